#include "kdvtbc/problem.hpp"

#include <cmath>
#include <numbers>

namespace kdvtbc {

const char* scheme_name(Scheme s) { return s == Scheme::RCN ? "rcn" : "ccn"; }

Scheme scheme_from_name(const std::string& name) {
    if (name == "rcn" || name == "RCN" || name == "R-CN") return Scheme::RCN;
    if (name == "ccn" || name == "CCN" || name == "C-CN") return Scheme::CCN;
    throw InvalidSpec("unknown scheme '" + name + "' (expected rcn or ccn)");
}

std::vector<double> ProblemSpec::sample_u0() const {
    if (!u0) throw InvalidSpec("ProblemSpec: no initial condition set");
    std::vector<double> vals(std::size_t(J) + 1);
    for (int j = 0; j <= J; ++j) vals[std::size_t(j)] = u0(x(j));
    return vals;
}

void ProblemSpec::validate() const {
    if (!(U2 > 0.0)) throw InvalidSpec("ProblemSpec: U2 must be > 0");
    if (J < 8) throw InvalidSpec("ProblemSpec: J must be >= 8");
    if (N_steps < 2) throw InvalidSpec("ProblemSpec: N_steps must be >= 2");
    if (!(r > 1.0)) throw InvalidSpec("ProblemSpec: inversion radius must be > 1");
    if (!(b > a)) throw InvalidSpec("ProblemSpec: need b > a");
    if (!(T > 0.0)) throw InvalidSpec("ProblemSpec: need T > 0");
    if (scheme == Scheme::RCN && U1 != 0.0)
        throw InvalidSpec("ProblemSpec: RCN scheme requires U1 = 0");
    if (u0) {
        const auto vals = sample_u0();
        double vmax = 0.0;
        for (double v : vals) vmax = std::max(vmax, std::abs(v));
        if (vmax > 0.0) {
            const double tol = 1e-12 * vmax;
            if (std::abs(vals.front()) > tol || std::abs(vals.back()) > tol)
                throw InvalidSpec(
                    "ProblemSpec: initial data not compactly supported in [a,b]");
        }
    }
}

std::function<double(double)> make_initial_condition(const std::string& name) {
    if (name == "gaussian")
        return [](double x) { return std::exp(-x * x); };
    if (name == "example2") {
        // modulated Gaussian wave packet on [0,10]
        return [](double x) {
            const double pi = std::numbers::pi;
            return std::exp(-8.0 * (x - 5.0) * (x - 5.0)) *
                   std::sin(50.0 * pi * x / 4.0);
        };
    }
    if (name == "zero")
        return [](double) { return 0.0; };
    throw InvalidSpec("unknown initial condition '" + name + "'");
}

} // namespace kdvtbc

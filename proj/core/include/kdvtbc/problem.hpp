#ifndef KDVTBC_PROBLEM_HPP
#define KDVTBC_PROBLEM_HPP

#include <functional>
#include <string>
#include <vector>

#include "kdvtbc/errors.hpp"

namespace kdvtbc {

enum class Scheme { RCN, CCN };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Physical and discretization parameters of one run.
///
/// The grid is x_j = a + j*dx, j = 0..J with dx = (b-a)/J, and
/// t_n = n*dt with dt = T/N_steps. The inversion radius r is the circle
/// radius used for the numerical inverse Z-transform of the boundary
/// kernels.
struct ProblemSpec {
    Scheme scheme = Scheme::RCN;
    double U1 = 0.0; ///< advection coefficient (must be 0 for RCN)
    double U2 = 1.0; ///< dispersion coefficient, > 0
    double a = -6.0;
    double b = 6.0;
    double T = 4.0;
    int J = 5000;
    int N_steps = 2560;
    double r = 1.001;
    std::function<double(double)> u0;

    double dx() const { return (b - a) / double(J); }
    double dt() const { return T / double(N_steps); }
    double x(int j) const { return a + j * dx(); }

    /// Mesh ratios of the midpoint systems.
    double alpha() const { return U2 * dt() / (2.0 * dx() * dx() * dx()); }
    double beta() const { return U1 * dt() / (4.0 * dx()); }

    /// mu = 2 dx^3 / (U2 dt), the factor in p = mu (z-1)/(z+1).
    double mu() const { return 2.0 * dx() * dx() * dx() / (U2 * dt()); }
    /// a = U1 dx^2 / U2, the advection coefficient of the quartic.
    double a_coef() const { return U1 * dx() * dx() / U2; }

    std::vector<double> sample_u0() const;

    /// Throws InvalidSpec on violated preconditions (U2 <= 0, J < 8,
    /// N < 2, r <= 1, RCN with U1 != 0, initial data not compactly
    /// supported in [a,b]).
    void validate() const;
};

/// Named initial conditions accepted in config files.
std::function<double(double)> make_initial_condition(const std::string& name);

} // namespace kdvtbc

#endif

#include "kdvtbc/poly_roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kdvtbc/errors.hpp"
#include "lapack.hpp"

namespace kdvtbc {

namespace {

const cplx kOmega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

cplx principal_cbrt(cplx w) { return std::pow(w, 1.0 / 3.0); }

int count_with(const cplx* roots, int d, bool inside) {
    int c = 0;
    for (int k = 0; k < d; ++k)
        if ((std::abs(roots[k]) < 1.0) == inside) ++c;
    return c;
}

} // namespace

cplx p_of_z(double mu, cplx z) { return mu * (z - 1.0) / (z + 1.0); }

double poly_relative_residual(std::span<const cplx> coeffs, cplx x) {
    cplx value = 0.0;
    double scale = 0.0;
    cplx xp = 1.0;
    for (const cplx& c : coeffs) {
        value += c * xp;
        scale += std::abs(c) * std::abs(xp);
        xp *= x;
    }
    return scale > 0.0 ? std::abs(value) / scale : std::abs(value);
}

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs) {
    const int n = int(coeffs.size()) - 1;
    if (n < 1) throw DegenerateRoot("polynomial_roots: degree < 1");
    const cplx lead = coeffs[std::size_t(n)];
    double cmax = 0.0;
    for (const cplx& c : coeffs) cmax = std::max(cmax, std::abs(c));
    if (std::abs(lead) < 1e-300 || std::abs(lead) < 1e-14 * cmax)
        throw DegenerateRoot("polynomial_roots: vanishing leading coefficient");

    // column-major companion matrix
    std::vector<cplx> a(std::size_t(n) * n, cplx(0.0));
    for (int i = 1; i < n; ++i) a[std::size_t(i) + std::size_t(i - 1) * n] = 1.0;
    for (int i = 0; i < n; ++i)
        a[std::size_t(i) + std::size_t(n - 1) * n] = -coeffs[std::size_t(i)] / lead;

    std::vector<cplx> w(static_cast<std::size_t>(n));
    std::vector<double> rwork(static_cast<std::size_t>(2 * n));
    int info = 0, lwork = std::max(16, 4 * n);
    std::vector<cplx> work(static_cast<std::size_t>(lwork));
    const char jobn = 'N';
    const int one = 1;
    zgeev_(&jobn, &jobn, &n, a.data(), &n, w.data(), nullptr, &one, nullptr,
           &one, work.data(), &lwork, rwork.data(), &info);
    if (info != 0)
        throw DegenerateRoot("polynomial_roots: zgeev failed, info=" +
                             std::to_string(info));
    return w;
}

ContinuousCubicRoots solve_continuous_cubic(double U1, double U2, cplx s) {
    if (!(U2 > 0.0)) throw InvalidSpec("solve_continuous_cubic: U2 must be > 0");
    if (!(s.real() > 0.0))
        throw InvalidSpec("solve_continuous_cubic: need Re(s) > 0");
    const cplx su = s / U2;
    const double P = U1 / (3.0 * U2);
    const cplx zeta3 = -0.5 * (su + std::sqrt(su * su + 4.0 * P * P * P));
    const cplx zeta = principal_cbrt(zeta3);
    if (std::abs(zeta) < 1e-14)
        throw DegenerateRoot("solve_continuous_cubic: zeta at branch point");

    ContinuousCubicRoots out;
    out.s = s;
    out.zeta = zeta;
    cplx branch = zeta;
    for (int k = 0; k < 3; ++k) {
        out.lambda[std::size_t(k)] = branch - P / branch;
        branch *= kOmega;
    }
    // one decaying root (Re < 0) first, the two growing ones after
    std::stable_sort(out.lambda.begin(), out.lambda.end(),
                     [](cplx x, cplx y) { return x.real() < y.real(); });
    const int neg = int(out.lambda[0].real() < 0.0) +
                    int(out.lambda[1].real() < 0.0) +
                    int(out.lambda[2].real() < 0.0);
    if (neg != 1)
        throw NonSeparated("solve_continuous_cubic: root sign pattern is not (-,+,+)");
    return out;
}

std::array<cplx, 3> solve_discrete_cubic(cplx p) {
    if (std::abs(p) < 1e-300)
        throw DegenerateRoot("solve_discrete_cubic: p = 0 gives the triple root 1");
    // zeta^3 = (-p + sqrt(p^2 + 4p^3/27)) / 2, written in the conjugate
    // form that avoids cancellation for small |p| with Re(p) > 0.
    const cplx disc = std::sqrt(p * p + (4.0 / 27.0) * p * p * p);
    const cplx zeta3 = (2.0 / 27.0) * p * p * p / (p + disc);
    const cplx zeta = principal_cbrt(zeta3);
    if (std::abs(zeta) < 1e-150)
        throw DegenerateRoot("solve_discrete_cubic: zeta underflow");
    std::array<cplx, 3> roots;
    cplx branch = zeta;
    for (int k = 0; k < 3; ++k) {
        roots[std::size_t(k)] = branch - (p / 3.0) / branch + 1.0;
        branch *= kOmega;
    }
    return roots;
}

std::array<cplx, 4> solve_discrete_quartic(cplx p, double a_coef) {
    const std::array<cplx, 5> coeffs = {cplx(-1.0), cplx(2.0 - a_coef),
                                        2.0 * p, cplx(-(2.0 - a_coef)),
                                        cplx(1.0)};
    const auto w = polynomial_roots(coeffs);
    std::array<cplx, 4> roots;
    std::copy(w.begin(), w.end(), roots.begin());
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(roots[std::size_t(i)] - roots[std::size_t(j)]) < 1e-12)
                throw DegenerateRoot("solve_discrete_quartic: repeated root");
    return roots;
}

cplx DiscreteRootTrack::z(std::size_t i) const {
    return std::polar(radius, 2.0 * std::numbers::pi * double(i) / double(Nz));
}

namespace {

// Ordering of the seed row: inside-disk roots first, each group sorted
// by ascending magnitude, ties by ascending argument.
void seed_order(cplx* roots, int d, int n_inside) {
    std::sort(roots, roots + d, [](cplx x, cplx y) {
        const bool xi = std::abs(x) < 1.0, yi = std::abs(y) < 1.0;
        if (xi != yi) return xi;
        const double ax = std::abs(x), ay = std::abs(y);
        if (std::abs(ax - ay) > 1e-14 * std::max(ax, ay)) return ax < ay;
        return std::arg(x) < std::arg(y);
    });
    if (count_with(roots, d, true) != n_inside)
        throw SeparationViolation("track_roots: wrong inside/outside count at seed");
}

// Match `cur` against `prev` by the permutation minimizing the total
// distance; writes the reordered roots back into `cur`.
void match_row(const cplx* prev, cplx* cur, int d) {
    std::array<int, 4> perm{0, 1, 2, 3}, best{0, 1, 2, 3};
    double best_cost = 1e300;
    std::sort(perm.begin(), perm.begin() + d);
    do {
        double cost = 0.0;
        for (int k = 0; k < d; ++k)
            cost += std::abs(cur[perm[std::size_t(k)]] - prev[k]);
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.begin() + d));

    // a match is ambiguous when some root sits (nearly) equally close to
    // two previous columns
    for (int k = 0; k < d; ++k) {
        double d1 = 1e300, d2 = 1e300;
        for (int j = 0; j < d; ++j) {
            const double dist = std::abs(cur[best[std::size_t(k)]] - prev[j]);
            if (dist < d1) { d2 = d1; d1 = dist; }
            else if (dist < d2) d2 = dist;
        }
        if (d2 - d1 < 1e-12 && d > 1)
            throw TrackingAmbiguity("track_roots: two matches within 1e-12");
    }

    std::array<cplx, 4> reordered;
    for (int k = 0; k < d; ++k) reordered[std::size_t(k)] = cur[best[std::size_t(k)]];
    std::copy(reordered.begin(), reordered.begin() + d, cur);
}

std::array<int, 4> loop_permutation(const cplx* last, const cplx* first, int d) {
    // which seed column continues each tracked column across theta = 2 pi
    std::array<int, 4> perm{0, 1, 2, 3};
    std::array<cplx, 4> cont;
    std::copy(first, first + d, cont.begin());
    match_row(last, cont.data(), d);
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j < d; ++j)
            if (std::abs(cont[std::size_t(k)] - first[j]) == 0.0) {
                perm[std::size_t(k)] = j;
                break;
            }
    }
    return perm;
}

} // namespace

DiscreteRootTrack track_roots(Scheme scheme, double mu, double a_coef,
                              double radius, std::size_t Nz) {
    if (!(radius > 1.0)) throw InvalidSpec("track_roots: radius must be > 1");
    if (Nz < 2 || Nz % 2 != 0)
        throw InvalidSpec("track_roots: Nz must be even and >= 2");

    DiscreteRootTrack track;
    track.scheme = scheme;
    track.radius = radius;
    track.mu = mu;
    track.a_coef = a_coef;
    track.Nz = Nz;
    track.degree = scheme == Scheme::RCN ? 3 : 4;
    track.n_inside = scheme == Scheme::RCN ? 1 : 2;
    track.p_values.resize(Nz);
    track.roots.resize(Nz);

    const int d = track.degree;
    for (std::size_t i = 0; i < Nz; ++i) {
        const cplx p = p_of_z(mu, track.z(i));
        track.p_values[i] = p;
        std::array<cplx, 4> row{};
        if (scheme == Scheme::RCN) {
            const auto c = solve_discrete_cubic(p);
            std::copy(c.begin(), c.end(), row.begin());
        } else {
            row = solve_discrete_quartic(p, a_coef);
        }
        for (int k = 0; k < d; ++k) {
            if (std::abs(std::abs(row[std::size_t(k)]) - 1.0) < 1e-12)
                throw SeparationViolation(
                    "track_roots: root magnitude on the unit circle");
        }
        if (i == 0) {
            seed_order(row.data(), d, track.n_inside);
        } else {
            match_row(track.roots[i - 1].data(), row.data(), d);
        }
        if (count_with(row.data(), track.n_inside, true) != track.n_inside ||
            count_with(row.data() + track.n_inside, d - track.n_inside, false) !=
                d - track.n_inside)
            throw SeparationViolation(
                "track_roots: inside/outside count changed along the track");
        track.roots[i] = row;
    }
    track.monodromy =
        loop_permutation(track.roots[Nz - 1].data(), track.roots[0].data(), d);
    return track;
}

DiscreteRootTrack track_roots(Scheme scheme, const ProblemSpec& spec,
                              std::size_t Nz) {
    return track_roots(scheme, spec.mu(), spec.a_coef(), spec.r, Nz);
}

} // namespace kdvtbc

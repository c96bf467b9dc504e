#ifndef KDVTBC_POLY_ROOTS_HPP
#define KDVTBC_POLY_ROOTS_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "kdvtbc/fft.hpp"
#include "kdvtbc/problem.hpp"

namespace kdvtbc {

/// Roots of s + U1*lambda + U2*lambda^3 = 0 for Re(s) > 0, ordered so
/// that Re(lambda[0]) < 0 < Re(lambda[1]), Re(lambda[2]).
struct ContinuousCubicRoots {
    cplx s;
    cplx zeta;
    std::array<cplx, 3> lambda;
};

ContinuousCubicRoots solve_continuous_cubic(double U1, double U2, cplx s);

/// Roots of r^3 - 3 r^2 + (3+p) r - 1 = 0, Re(p) > 0, via the explicit
/// Cardano-type formula. Order follows the three cube-root branches
/// (no magnitude classification here).
std::array<cplx, 3> solve_discrete_cubic(cplx p);

/// Roots of l^4 - (2-a) l^3 + 2p l^2 + (2-a) l - 1 = 0, Re(p) > 0,
/// computed as companion-matrix eigenvalues.
std::array<cplx, 4> solve_discrete_quartic(cplx p, double a_coef);

/// Roots of c[0] + c[1] x + ... + c[n] x^n (companion matrix, LAPACK
/// zgeev). The leading coefficient must be nonzero.
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs);

/// Continuity-ordered characteristic roots along the inversion circle
/// z = r e^{i theta}, theta_i = 2 pi i / Nz. Column k of `roots` is the
/// continuous root l_k(theta); the first `n_inside` columns lie inside
/// the unit disk for every angle.
struct DiscreteRootTrack {
    Scheme scheme = Scheme::RCN;
    double radius = 0.0;
    double mu = 0.0;
    double a_coef = 0.0;
    std::size_t Nz = 0;
    int degree = 3;
    int n_inside = 1;
    std::vector<cplx> p_values;
    std::vector<std::array<cplx, 4>> roots; ///< row i: roots at theta_i (degree entries used)
    std::array<int, 4> monodromy{0, 1, 2, 3}; ///< column permutation after a full loop

    cplx z(std::size_t i) const;
};

DiscreteRootTrack track_roots(Scheme scheme, double mu, double a_coef,
                              double radius, std::size_t Nz);
DiscreteRootTrack track_roots(Scheme scheme, const ProblemSpec& spec,
                              std::size_t Nz);

/// p = mu (z-1)/(z+1).
cplx p_of_z(double mu, cplx z);

/// Relative residual |P(x)| / sum_i |c_i x^i| of a polynomial given by
/// its coefficients (ascending order).
double poly_relative_residual(std::span<const cplx> coeffs, cplx x);

} // namespace kdvtbc

#endif

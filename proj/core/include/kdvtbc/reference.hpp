#ifndef KDVTBC_REFERENCE_HPP
#define KDVTBC_REFERENCE_HPP

#include <map>
#include <span>
#include <tuple>
#include <vector>

namespace kdvtbc {

/// Airy function Ai(x) to about 1e-13 absolute: extended-precision
/// Maclaurin series on the middle range, asymptotic expansions outside.
/// Throws OutOfRange beyond |x| > 100.
double airy_ai(double x);

namespace detail {
/// No range guard; positive arguments beyond the asymptotic range give 0.
double airy_ai_unchecked(double x);
}

/// Whole-line solution of u_t + u_xxx = 0 with u(0,x) = exp(-x^2):
/// u(t,x) = E(t,.) * u0 with E(t,x) = (3t)^{-1/3} Ai(x (3t)^{-1/3}),
/// by adaptively refined composite Gauss-Legendre quadrature (refined
/// until two levels agree to quad_tol). Requires t >= 1e-6.
std::vector<double> exact_example1(double t, std::span<const double> xs,
                                   double quad_tol = 1e-9);

/// exact_example1 on the uniform grid x_j = a + j (b-a)/J, with a memo
/// shared across calls (convergence sweeps revisit the same times).
const std::vector<double>& exact_example1_cached(double t, double a, double b,
                                                 int J);

/// Periodic spectral propagator for u_t + U1 u_x + U2 u_xxx = 0 on a
/// period of the given length: one DFT, the exact symbol
/// exp(-(i xi U1 - i xi^3 U2) t) per mode, one inverse DFT. Input and
/// output hold J+1 grid values with the periodic endpoint duplicated.
std::vector<double> exact_example2(double t, std::span<const double> u0,
                                   double length, double U1 = 1.0,
                                   double U2 = 1.0);

} // namespace kdvtbc

#endif

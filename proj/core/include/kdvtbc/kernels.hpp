#ifndef KDVTBC_KERNELS_HPP
#define KDVTBC_KERNELS_HPP

#include <map>
#include <string>
#include <vector>

#include "kdvtbc/poly_roots.hpp"
#include "kdvtbc/problem.hpp"
#include "kdvtbc/ztrans.hpp"

namespace kdvtbc {

/// Boundary convolution kernels. R1..R4 belong to the R-CN scheme,
/// C1..C8 to the C-CN scheme. In terms of the continuity-ordered roots:
///   R1 = l2+l3, R2 = l2*l3, R3 = l1, R4 = l1^2   (l1 inside the disk)
///   C1 = l1+l2, C2 = (l1+l2)^2, C3 = l1*l2, C4 = (l1*l2)^2   (inside pair)
///   C5 = l3+l4, C6 = (l3+l4)^2, C7 = l3*l4, C8 = (l3*l4)^2   (outside pair)
enum class KernelId { R1, R2, R3, R4, C1, C2, C3, C4, C5, C6, C7, C8 };

const char* kernel_name(KernelId id);
KernelId kernel_from_name(const std::string& name);
const std::vector<KernelId>& kernels_for(Scheme scheme);

/// Convolution coefficient sequences Y^{(n)} and Y^{xi,(n)} for one
/// (scheme, U1, U2, dx, dt, r, Nz) configuration. Solvers consume the
/// xi-regularized sequences only.
struct KernelSet {
    Scheme scheme = Scheme::RCN;
    double U1 = 0.0, U2 = 1.0, dx = 0.0, dt = 0.0;
    double radius = 0.0;
    double mu = 0.0, a_coef = 0.0;
    std::size_t Nz = 0;
    std::map<KernelId, CoefficientSequence> plain;
    std::map<KernelId, CoefficientSequence> xi;

    const CoefficientSequence& plain_of(KernelId id) const;
    const CoefficientSequence& xi_of(KernelId id) const;
};

/// Default circle node count: smallest power of two covering both the
/// convolution window 2(N_steps+2) and the aliasing bound r^{-Nz} <= 1e-4.
std::size_t default_nz(int n_steps, double r);

/// Samples all kernels of spec.scheme on the inversion circle, applies
/// xi(z) = 1 + 1/z, and inverse-transforms. With a nonempty cache_dir the
/// result is read from / written to disk keyed by the configuration.
KernelSet build_kernels(const ProblemSpec& spec, std::size_t Nz = 0,
                        const std::string& cache_dir = {});

/// Single-point Z-domain kernel evaluation (test support).
cplx kernel_zdomain(KernelId id, double mu, double a_coef, cplx z);
cplx kernel_zdomain(KernelId id, const ProblemSpec& spec, cplx z);

} // namespace kdvtbc

#endif

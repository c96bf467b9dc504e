#ifndef KDVTBC_ZTRANS_HPP
#define KDVTBC_ZTRANS_HPP

#include <span>
#include <string>
#include <vector>

#include "kdvtbc/fft.hpp"

namespace kdvtbc {

/// Kernel samples U(z_k) on the inversion circle z_k = r e^{2 pi i k/Nz}.
struct CircleSamples {
    double radius = 0.0;
    std::vector<cplx> values; ///< size Nz, a power of two
    bool real_sequence = true; ///< generating sequence known to be real

    std::size_t Nz() const { return values.size(); }
};

/// Time-domain coefficients u_n recovered from circle samples.
struct CoefficientSequence {
    std::vector<double> coeffs;
    double radius_used = 0.0;
    std::string tag;

    std::size_t size() const { return coeffs.size(); }
    double operator[](std::size_t n) const { return coeffs[n]; }
};

/// u_n = r^n IDFT{U_k}(n), 0 <= n < Nz. For a kernel declared real the
/// imaginary residue must stay below 1e-8 of the largest coefficient
/// (NonRealResult otherwise) and is dropped.
CoefficientSequence inverse_ztransform(const CircleSamples& samples,
                                       std::string tag = {});

/// Retains the imaginary part; used when the generating sequence is not
/// known to be real.
std::vector<cplx> inverse_ztransform_complex(const CircleSamples& samples);

/// Finite forward transform sum_{k<L} u_k z^{-k}, |z| > 1.
cplx forward_ztransform_finite(std::span<const double> coeffs, cplx z);

/// Samples of a finite sequence's transform on the circle (test helper
/// and round-trip companion of inverse_ztransform).
CircleSamples sample_finite_sequence(std::span<const double> coeffs,
                                     double radius, std::size_t Nz);

} // namespace kdvtbc

#endif

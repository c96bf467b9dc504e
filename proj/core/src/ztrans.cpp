#include "kdvtbc/ztrans.hpp"

#include <cmath>
#include <numbers>

#include "kdvtbc/errors.hpp"

namespace kdvtbc {

std::vector<cplx> inverse_ztransform_complex(const CircleSamples& samples) {
    if (!is_power_of_two(samples.Nz()))
        throw InvalidSpec("inverse_ztransform: Nz must be a power of two");
    if (!(samples.radius > 1.0))
        throw InvalidSpec("inverse_ztransform: radius must be > 1");
    std::vector<cplx> a = samples.values;
    fft_radix2(a, +1);
    const double inv = 1.0 / double(a.size());
    double rn = 1.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
        a[n] *= inv * rn;
        rn *= samples.radius;
    }
    return a;
}

CoefficientSequence inverse_ztransform(const CircleSamples& samples,
                                       std::string tag) {
    const auto full = inverse_ztransform_complex(samples);
    double umax = 0.0, imax = 0.0;
    for (const cplx& v : full) {
        umax = std::max(umax, std::abs(v.real()));
        imax = std::max(imax, std::abs(v.imag()));
    }
    if (samples.real_sequence && umax > 0.0 && imax > 1e-8 * umax)
        throw NonRealResult("inverse_ztransform: imaginary residue " +
                            std::to_string(imax / umax) + " on kernel " + tag);
    CoefficientSequence seq;
    seq.radius_used = samples.radius;
    seq.tag = std::move(tag);
    seq.coeffs.resize(full.size());
    for (std::size_t n = 0; n < full.size(); ++n) seq.coeffs[n] = full[n].real();
    return seq;
}

cplx forward_ztransform_finite(std::span<const double> coeffs, cplx z) {
    // Horner in 1/z
    const cplx zi = 1.0 / z;
    cplx acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * zi + coeffs[k];
    return acc;
}

CircleSamples sample_finite_sequence(std::span<const double> coeffs,
                                     double radius, std::size_t Nz) {
    CircleSamples s;
    s.radius = radius;
    s.values.resize(Nz);
    for (std::size_t k = 0; k < Nz; ++k) {
        const cplx z =
            std::polar(radius, 2.0 * std::numbers::pi * double(k) / double(Nz));
        s.values[k] = forward_ztransform_finite(coeffs, z);
    }
    return s;
}

} // namespace kdvtbc

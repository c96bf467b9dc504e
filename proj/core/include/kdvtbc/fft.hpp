#ifndef KDVTBC_FFT_HPP
#define KDVTBC_FFT_HPP

#include <complex>
#include <vector>

namespace kdvtbc {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

/// In-place radix-2 FFT. sign = -1 forward (e^{-2pi i kn/N}), +1 inverse
/// kernel without the 1/N factor. Length must be a power of two.
void fft_radix2(std::vector<cplx>& a, int sign);

// Out-of-place DFT of arbitrary length (Bluestein chirp for non powers of
// two). Conventions: forward = sum x_n e^{-2pi i kn/N}; inverse includes
// the 1/N factor.
std::vector<cplx> dft(const std::vector<cplx>& x);
std::vector<cplx> idft(const std::vector<cplx>& x);

} // namespace kdvtbc

#endif

#include "kdvtbc/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kdvtbc {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_radix2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft_radix2: length must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / double(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

namespace {

// Bluestein's algorithm: DFT of arbitrary length via one power-of-two
// convolution. sign as in fft_radix2.
std::vector<cplx> dft_bluestein(const std::vector<cplx>& x, int sign) {
    const std::size_t n = x.size();
    const std::size_t m = next_power_of_two(2 * n + 1);
    const double pi = std::numbers::pi;
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2/2 mod n kept exact via k^2 mod 2n
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = sign * pi * double(k2) / double(n);
        chirp[k] = cplx(std::cos(ang), std::sin(ang));
    }
    std::vector<cplx> a(m, 0.0), b(m, 0.0);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
    fft_radix2(a, -1);
    fft_radix2(b, -1);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_radix2(a, +1);
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k] / double(m);
    return out;
}

std::vector<cplx> dft_any(const std::vector<cplx>& x, int sign) {
    if (is_power_of_two(x.size())) {
        std::vector<cplx> a = x;
        fft_radix2(a, sign);
        return a;
    }
    return dft_bluestein(x, sign);
}

} // namespace

std::vector<cplx> dft(const std::vector<cplx>& x) { return dft_any(x, -1); }

std::vector<cplx> idft(const std::vector<cplx>& x) {
    std::vector<cplx> out = dft_any(x, +1);
    const double scale = 1.0 / double(x.size());
    for (auto& v : out) v *= scale;
    return out;
}

} // namespace kdvtbc

#include "kdvtbc/banded.hpp"

#include <cmath>
#include <string>

#include "kdvtbc/errors.hpp"
#include "lapack.hpp"

namespace kdvtbc {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(std::size_t(ldab_) * std::size_t(n), 0.0), ipiv_(std::size_t(n), 0) {}

double& BandedMatrix::ref(int i, int j) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_)
        throw BandwidthViolation("BandedMatrix: entry (" + std::to_string(i) +
                                 "," + std::to_string(j) + ") outside band");
    // dgbtrf layout: A(i,j) at ab[kl + ku + i - j, j]
    return ab_[std::size_t(kl_ + ku_ + i - j) + std::size_t(j) * std::size_t(ldab_)];
}

void BandedMatrix::set(int i, int j, double value) { ref(i, j) = value; }
void BandedMatrix::add(int i, int j, double value) { ref(i, j) += value; }

double BandedMatrix::get(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_)
        return 0.0;
    const auto& src = factored_ ? ab_orig_ : ab_;
    return src[std::size_t(kl_ + ku_ + i - j) + std::size_t(j) * std::size_t(ldab_)];
}

void BandedMatrix::factorize() {
    if (factored_) throw SingularSystem("BandedMatrix: already factored");
    ab_orig_ = ab_;
    int info = 0;
    dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab_, ipiv_.data(), &info);
    if (info != 0)
        throw SingularSystem("BandedMatrix: dgbtrf info=" + std::to_string(info));
    double umax = 0.0;
    for (int j = 0; j < n_; ++j)
        umax = std::max(umax, std::abs(ab_[std::size_t(kl_ + ku_) +
                                           std::size_t(j) * std::size_t(ldab_)]));
    for (int j = 0; j < n_; ++j) {
        const double ujj = std::abs(
            ab_[std::size_t(kl_ + ku_) + std::size_t(j) * std::size_t(ldab_)]);
        if (ujj < 1e-14 * umax)
            throw SingularSystem("BandedMatrix: pivot below 1e-14 at column " +
                                 std::to_string(j));
    }
    factored_ = true;
}

void BandedMatrix::solve(std::span<double> rhs) const {
    if (!factored_) throw SingularSystem("BandedMatrix: solve before factorize");
    if (int(rhs.size()) != n_)
        throw InvalidSpec("BandedMatrix: rhs size mismatch");
    const char trans = 'N';
    const int nrhs = 1;
    int info = 0;
    dgbtrs_(&trans, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, ipiv_.data(),
            rhs.data(), &n_, &info);
    if (info != 0)
        throw SingularSystem("BandedMatrix: dgbtrs info=" + std::to_string(info));
}

std::vector<double> BandedMatrix::dense() const {
    std::vector<double> full(std::size_t(n_) * std::size_t(n_), 0.0);
    for (int j = 0; j < n_; ++j)
        for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
            full[std::size_t(i) * std::size_t(n_) + std::size_t(j)] = get(i, j);
    return full;
}

} // namespace kdvtbc

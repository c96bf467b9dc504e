#ifndef KDVTBC_BANDED_HPP
#define KDVTBC_BANDED_HPP

#include <span>
#include <vector>

namespace kdvtbc {

/// Square banded matrix in LAPACK band storage with kl sub- and ku
/// superdiagonals, factored once with dgbtrf and solved with dgbtrs.
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    int lower_bandwidth() const { return kl_; }
    int upper_bandwidth() const { return ku_; }

    /// Entry write access; throws BandwidthViolation outside the band.
    void set(int i, int j, double value);
    void add(int i, int j, double value);
    double get(int i, int j) const; ///< 0 outside the band

    /// LU with partial pivoting; SingularSystem when a pivot falls below
    /// 1e-14 of the largest pivot.
    void factorize();
    bool factored() const { return factored_; }

    void solve(std::span<double> rhs) const;

    /// Dense copy of the unfactored matrix (test support).
    std::vector<double> dense() const;

private:
    double& ref(int i, int j);
    int n_, kl_, ku_, ldab_;
    std::vector<double> ab_;      ///< factored in place
    std::vector<double> ab_orig_; ///< kept for dense() after factorization
    std::vector<int> ipiv_;
    bool factored_ = false;
};

} // namespace kdvtbc

#endif

#ifndef KDVTBC_SOE_HPP
#define KDVTBC_SOE_HPP

#include <string>
#include <vector>

#include "kdvtbc/fft.hpp"
#include "kdvtbc/ztrans.hpp"

namespace kdvtbc {

/// Sum-of-exponentials compression of one convolution coefficient
/// sequence X^{(n)}:
///   X~^{(n)} = X^{(n)}              for n < nu (exact head)
///   X~^{(n)} = sum_l b_l q_l^{-n}   for n >= nu, |q_l| > 1
/// obtained from the [L-1|L] Pade approximant of
/// g(x) = sum_k X^{(nu+k)} x^k. The first 2L tail coefficients are
/// reproduced exactly.
struct SoeKernel {
    int nu = 2;
    std::vector<double> head;
    std::vector<cplx> poles;
    std::vector<cplx> weights;
    std::string source;
    std::vector<std::string> fit_log; ///< retries taken while fitting

    int L() const { return int(poles.size()); }

    /// X~^{(n)}: head passthrough below nu, exponential sum from nu on.
    double eval(int n) const;
    /// The exponential sum Re sum_l b_l q_l^{-n} regardless of n.
    double tail(int n) const;
};

/// Fits L exponentials to seq[nu..]; requires seq.size() >= nu + 2L.
/// Retries with L-1, ..., 1 when a pole lands inside the closed unit
/// disk or the Pade order is deficient; every retry is recorded in
/// fit_log. Throws PadeSingular / PoleInsideDisk / RepeatedPole.
SoeKernel fit_soe(const CoefficientSequence& seq, int L, int nu = 2);

/// Recurrence state for S^{(n)} = sum_{k=2}^{n} X~^{(k)} h^{(n-k)} over a
/// history h^{(0)}, h^{(1)}, ... fed one value per step. Constructed at
/// step index 1 (empty sum); advance() to step n consumes h^{(n-2)}.
/// Cost per advance is O(L), independent of n.
class SoeAccumulator {
public:
    explicit SoeAccumulator(const SoeKernel& kernel);

    int step_index() const { return n_; }
    void advance(double h_nm2);
    /// S^{(n)} at the current step index.
    double total() const;
    /// X~^{(n+1)} from the running pole powers (no pow() calls).
    double next_coeff() const;

private:
    std::vector<cplx> qinv_;
    std::vector<cplx> winc_;  ///< b_l q_l^{-2}
    std::vector<cplx> state_;
    std::vector<cplx> bpow_;  ///< b_l q_l^{-(n+1)}
    int n_ = 1;
};

/// Right-hand-side contribution of one compressed boundary convolution in
/// the midpoint formulation at solve step n = acc.step_index():
/// S^{(n)} over the midpoint history plus the initial-data correction
/// X~^{(n+1)} u0 / 2.
double midpoint_convolution_terms(const SoeAccumulator& acc,
                                  const SoeKernel& kernel, double u0_node);

} // namespace kdvtbc

#endif

#include "kdvtbc/soe.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "kdvtbc/errors.hpp"
#include "kdvtbc/poly_roots.hpp"

namespace kdvtbc {

namespace {

using ldouble = long double;
using lcplx = std::complex<ldouble>;

// Gaussian elimination with full pivoting in extended precision; the
// Toeplitz systems behind Pade denominators are badly conditioned for
// moderate L already.
std::vector<ldouble> solve_full_pivot(std::vector<ldouble> m,
                                      std::vector<ldouble> rhs, int n) {
    std::vector<int> col(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) col[std::size_t(i)] = i;
    ldouble piv_max = 0.0L, piv_min = 0.0L;
    auto at = [&](int i, int j) -> ldouble& {
        return m[std::size_t(i) * std::size_t(n) + std::size_t(j)];
    };
    for (int k = 0; k < n; ++k) {
        int pi = k, pj = k;
        ldouble best = -1.0L;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j)
                if (std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    pi = i;
                    pj = j;
                }
        if (k == 0) piv_max = best;
        piv_min = best;
        if (best <= 0.0L || (piv_max > 0.0L && best < piv_max * 1e-14L))
            throw PadeSingular("fit_soe: Pade denominator system is singular "
                               "(condition above 1e14)");
        if (pi != k)
            for (int j = 0; j < n; ++j) std::swap(at(pi, j), at(k, j));
        if (pi != k) std::swap(rhs[std::size_t(pi)], rhs[std::size_t(k)]);
        if (pj != k) {
            for (int i = 0; i < n; ++i) std::swap(at(i, pj), at(i, k));
            std::swap(col[std::size_t(pj)], col[std::size_t(k)]);
        }
        for (int i = k + 1; i < n; ++i) {
            const ldouble f = at(i, k) / at(k, k);
            at(i, k) = 0.0L;
            for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
            rhs[std::size_t(i)] -= f * rhs[std::size_t(k)];
        }
    }
    std::vector<ldouble> y(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        ldouble s = rhs[std::size_t(i)];
        for (int j = i + 1; j < n; ++j) s -= at(i, j) * y[std::size_t(j)];
        y[std::size_t(i)] = s / at(i, i);
    }
    std::vector<ldouble> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[std::size_t(col[std::size_t(i)])] = y[std::size_t(i)];
    return x;
}

lcplx poly_eval(const std::vector<ldouble>& coeffs, lcplx x) {
    lcplx acc = 0.0L;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
}

// One fit attempt at a fixed term count.
SoeKernel fit_once(const CoefficientSequence& seq, int L, int nu) {
    const auto& x = seq.coeffs;
    std::vector<ldouble> c(static_cast<std::size_t>(2 * L));
    for (int k = 0; k < 2 * L; ++k) c[std::size_t(k)] = x[std::size_t(nu + k)];

    // denominator: sum_{j=1..L} q_j c_{n-j} = -c_n, n = L..2L-1
    std::vector<ldouble> m(std::size_t(L) * std::size_t(L));
    std::vector<ldouble> rhs(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j)
            m[std::size_t(i) * std::size_t(L) + std::size_t(j)] =
                c[std::size_t(L + i - 1 - j)];
        rhs[std::size_t(i)] = -c[std::size_t(L + i)];
    }
    const auto qsol = solve_full_pivot(std::move(m), std::move(rhs), L);

    std::vector<ldouble> qpoly(std::size_t(L) + 1);
    qpoly[0] = 1.0L;
    for (int j = 1; j <= L; ++j) qpoly[std::size_t(j)] = qsol[std::size_t(j - 1)];

    // numerator by series multiplication: p_n = sum_{j<=min(n,L)} q_j c_{n-j}
    std::vector<ldouble> ppoly(static_cast<std::size_t>(L));
    for (int n = 0; n < L; ++n) {
        ldouble s = 0.0L;
        for (int j = 0; j <= std::min(n, L); ++j)
            s += qpoly[std::size_t(j)] * c[std::size_t(n - j)];
        ppoly[std::size_t(n)] = s;
    }
    std::vector<ldouble> dqpoly(static_cast<std::size_t>(L));
    for (int j = 1; j <= L; ++j)
        dqpoly[std::size_t(j - 1)] = ldouble(j) * qpoly[std::size_t(j)];

    std::vector<cplx> qd(qpoly.size());
    for (std::size_t k = 0; k < qpoly.size(); ++k) qd[k] = double(qpoly[k]);
    std::vector<cplx> roots = polynomial_roots(qd); // DegenerateRoot on deficiency

    for (const cplx& q : roots)
        if (!(std::abs(q) > 1.0 + 1e-12))
            throw PoleInsideDisk("fit_soe: pole at |q| = " +
                                 std::to_string(std::abs(q)));
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-10)
                throw RepeatedPole("fit_soe: poles closer than 1e-10");

    // enforce exact conjugate pairing so reconstructions are real
    std::vector<cplx> poles;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        if (std::abs(roots[i].imag()) <= 1e-12 * (1.0 + std::abs(roots[i]))) {
            poles.push_back(cplx(roots[i].real(), 0.0));
            continue;
        }
        std::size_t partner = i;
        double best = 1e300;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(roots[j] - std::conj(roots[i]));
            if (d < best) { best = d; partner = j; }
        }
        if (partner != i && best < 1e-6 * std::abs(roots[i])) {
            used[partner] = true;
            const cplx avg = 0.5 * (roots[i] + std::conj(roots[partner]));
            poles.push_back(avg);
            poles.push_back(std::conj(avg));
        } else {
            poles.push_back(roots[i]); // no partner found, keep as is
        }
    }

    SoeKernel kernel;
    kernel.nu = nu;
    kernel.source = seq.tag;
    kernel.head.assign(x.begin(), x.begin() + nu);
    kernel.poles = poles;
    kernel.weights.resize(poles.size());
    for (std::size_t l = 0; l < poles.size(); ++l) {
        const lcplx q(poles[l].real(), poles[l].imag());
        const lcplx num = poly_eval(ppoly, q);
        const lcplx den = poly_eval(dqpoly, q);
        // b_l = -P(q)/Q'(q) q^{nu-1}; the paper states the nu = 2 case
        lcplx b = -num / den;
        for (int k = 0; k < nu - 1; ++k) b *= q;
        kernel.weights[l] = cplx(double(b.real()), double(b.imag()));
    }
    return kernel;
}

} // namespace

SoeKernel fit_soe(const CoefficientSequence& seq, int L, int nu) {
    if (L < 1) throw InvalidSpec("fit_soe: L must be >= 1");
    if (nu < 0) throw InvalidSpec("fit_soe: nu must be >= 0");
    if (seq.size() < std::size_t(2 * L + nu))
        throw InvalidSpec("fit_soe: sequence shorter than 2L + nu");

    std::vector<std::string> log;
    for (int Lcur = L; Lcur >= 1; --Lcur) {
        try {
            SoeKernel kernel = fit_once(seq, Lcur, nu);
            kernel.fit_log = std::move(log);
            return kernel;
        } catch (const PoleInsideDisk& e) {
            log.push_back("L=" + std::to_string(Lcur) + ": " + e.what());
        } catch (const DegenerateRoot& e) {
            log.push_back("L=" + std::to_string(Lcur) + ": " + e.what());
        }
    }
    throw PoleInsideDisk("fit_soe: no admissible pole set found down to L=1");
}

double SoeKernel::tail(int n) const {
    cplx s = 0.0;
    for (std::size_t l = 0; l < poles.size(); ++l)
        s += weights[l] * std::pow(poles[l], -double(n));
    return s.real();
}

double SoeKernel::eval(int n) const {
    if (n < 0) throw InvalidSpec("SoeKernel::eval: n must be >= 0");
    if (n < nu) return head[std::size_t(n)];
    return tail(n);
}

SoeAccumulator::SoeAccumulator(const SoeKernel& kernel) {
    const std::size_t L = kernel.poles.size();
    qinv_.resize(L);
    winc_.resize(L);
    state_.assign(L, cplx(0.0));
    bpow_.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        qinv_[l] = 1.0 / kernel.poles[l];
        winc_[l] = kernel.weights[l] * qinv_[l] * qinv_[l];
        bpow_[l] = winc_[l]; // b q^{-2} = b q^{-(n+1)} at n = 1
    }
}

void SoeAccumulator::advance(double h_nm2) {
    for (std::size_t l = 0; l < state_.size(); ++l) {
        state_[l] = qinv_[l] * state_[l] + winc_[l] * h_nm2;
        bpow_[l] *= qinv_[l];
    }
    ++n_;
}

double SoeAccumulator::total() const {
    cplx s = 0.0;
    for (const cplx& v : state_) s += v;
    return s.real();
}

double SoeAccumulator::next_coeff() const {
    cplx s = 0.0;
    for (const cplx& v : bpow_) s += v;
    return s.real();
}

double midpoint_convolution_terms(const SoeAccumulator& acc,
                                  const SoeKernel& kernel, double u0_node) {
    const int np1 = acc.step_index() + 1;
    const double coeff = np1 < kernel.nu ? kernel.head[std::size_t(np1)]
                                         : acc.next_coeff();
    return acc.total() + 0.5 * coeff * u0_node;
}

} // namespace kdvtbc

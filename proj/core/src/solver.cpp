#include "kdvtbc/solver.hpp"

#include <chrono>
#include <cmath>

#include "kdvtbc/errors.hpp"

namespace kdvtbc {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool close(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
}

} // namespace

const char* conv_mode_name(ConvMode m) {
    return m == ConvMode::Direct ? "direct" : "fast";
}

ConvMode conv_mode_from_name(const std::string& name) {
    if (name == "direct") return ConvMode::Direct;
    if (name == "fast") return ConvMode::Fast;
    throw InvalidSpec("unknown mode '" + name + "' (expected direct or fast)");
}

std::vector<BoundaryRow> boundary_rows(Scheme scheme, int J) {
    using K = KernelId;
    if (scheme == Scheme::RCN)
        return {
            {0, 2, {{K::R2, 0, -1.0}, {K::R1, 1, +1.0}}},
            {J - 1, J - 1, {{K::R3, J - 2, +1.0}}},
            {J, J, {{K::R4, J - 2, +1.0}}},
        };
    return {
        {0, 2, {{K::C7, 0, -1.0}, {K::C5, 1, +1.0}}},
        {1, 4, {{K::C8, 0, +1.0}, {K::C6, 2, -1.0}, {K::C5, 3, +2.0}}},
        {J - 1, J, {{K::C3, J - 2, -1.0}, {K::C1, J - 1, +1.0}}},
        {J, J, {{K::C4, J - 4, +1.0}, {K::C2, J - 2, -1.0}, {K::C1, J - 1, +2.0}}},
    };
}

Solver::Solver(const ProblemSpec& spec, const KernelSet& kernels,
               SolverOptions options)
    : spec_(spec), kernels_(kernels), opt_(options),
      rows_(boundary_rows(spec.scheme, spec.J)),
      matrix_(spec.J + 1, spec.scheme == Scheme::RCN ? 2 : 4,
              spec.scheme == Scheme::RCN ? 2 : 3) {
    spec_.validate();
    if (kernels_.scheme != spec_.scheme || !close(kernels_.dx, spec_.dx()) ||
        !close(kernels_.dt, spec_.dt()) || !close(kernels_.radius, spec_.r) ||
        !close(kernels_.U1, spec_.U1) || !close(kernels_.U2, spec_.U2))
        throw InvalidSpec("Solver: kernel set built for different parameters");
    for (KernelId id : kernels_for(spec_.scheme))
        if (kernels_.xi_of(id).size() < std::size_t(spec_.N_steps) + 2)
            throw InvalidSpec("Solver: kernel sequences shorter than N_steps + 2");

    u_ = spec_.sample_u0();
    v_prev_ = u_;
    u0_ = u_;
    u0_norm_ = grid_norm();

    matrix_ = assemble_matrix();
    matrix_.factorize();

    for (const BoundaryRow& row : rows_) {
        for (const BoundaryTerm& term : row.terms) {
            if (opt_.mode == ConvMode::Direct) {
                auto& h = hist_[term.node];
                h.reserve(std::size_t(spec_.N_steps));
            } else {
                if (!soe_.count(term.kernel))
                    soe_.emplace(term.kernel,
                                 fit_soe(kernels_.xi_of(term.kernel), opt_.soe_L,
                                         opt_.soe_nu));
                acc_.emplace(std::pair<int, int>(int(term.kernel), term.node),
                             SoeAccumulator(soe_.at(term.kernel)));
                prev2_[term.node] = 0.0;
            }
        }
    }
}

BandedMatrix Solver::assemble_matrix() const {
    const int J = spec_.J;
    const double alpha = spec_.alpha();
    const double beta = spec_.beta();
    BandedMatrix m(J + 1, spec_.scheme == Scheme::RCN ? 2 : 4,
                   spec_.scheme == Scheme::RCN ? 2 : 3);
    if (spec_.scheme == Scheme::RCN) {
        for (int j = 1; j <= J - 2; ++j) {
            m.set(j, j - 1, -alpha);
            m.set(j, j, 1.0 + 3.0 * alpha);
            m.set(j, j + 1, -3.0 * alpha);
            m.set(j, j + 2, alpha);
        }
    } else {
        for (int j = 2; j <= J - 2; ++j) {
            m.set(j, j - 2, -0.5 * alpha);
            m.set(j, j - 1, alpha - beta);
            m.set(j, j, 1.0);
            m.set(j, j + 1, -alpha + beta);
            m.set(j, j + 2, 0.5 * alpha);
        }
    }
    for (const BoundaryRow& row : rows_) {
        m.add(row.row, row.local, 1.0);
        for (const BoundaryTerm& term : row.terms)
            m.add(row.row, term.node,
                  -term.coeff * kernels_.xi_of(term.kernel).coeffs[0]);
    }
    return m;
}

double Solver::conv_rhs_term(const BoundaryTerm& term) const {
    const int n = n_;
    if (opt_.mode == ConvMode::Direct) {
        const auto& Y = kernels_.xi_of(term.kernel).coeffs;
        const auto& h = hist_.at(term.node);
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += Y[std::size_t(k)] * h[std::size_t(n - k)];
        s += 0.5 * Y[std::size_t(n) + 1] * u0_[std::size_t(term.node)];
        return term.coeff * s;
    }
    const SoeKernel& kernel = soe_.at(term.kernel);
    if (n == 0)
        return term.coeff * 0.5 * kernel.eval(1) * u0_[std::size_t(term.node)];
    const auto& acc = acc_.at({int(term.kernel), term.node});
    const double s = kernel.head[1] * v_prev_[std::size_t(term.node)] +
                     midpoint_convolution_terms(acc, kernel,
                                                u0_[std::size_t(term.node)]);
    return term.coeff * s;
}

std::vector<double> Solver::assemble_rhs() const {
    const int J = spec_.J;
    std::vector<double> rhs(std::size_t(J) + 1, 0.0);
    const int jlo = spec_.scheme == Scheme::RCN ? 1 : 2;
    for (int j = jlo; j <= J - 2; ++j) rhs[std::size_t(j)] = u_[std::size_t(j)];
    for (const BoundaryRow& row : rows_) {
        double s = -v_prev_[std::size_t(row.local)];
        for (const BoundaryTerm& term : row.terms) s += conv_rhs_term(term);
        rhs[std::size_t(row.row)] = s;
    }
    return rhs;
}

void Solver::step() {
    if (n_ >= spec_.N_steps)
        throw InvalidSpec("Solver: already at the final time level");

    const auto t0 = clock_type::now();
    if (opt_.mode == ConvMode::Fast && n_ >= 2)
        for (auto& [key, acc] : acc_) acc.advance(prev2_.at(key.second));

    const int J = spec_.J;
    std::vector<double> rhs(std::size_t(J) + 1, 0.0);
    const int jlo = spec_.scheme == Scheme::RCN ? 1 : 2;
    for (const BoundaryRow& row : rows_) {
        double s = -v_prev_[std::size_t(row.local)];
        for (const BoundaryTerm& term : row.terms) s += conv_rhs_term(term);
        rhs[std::size_t(row.row)] = s;
    }
    boundary_seconds_ += seconds_since(t0);

    for (int j = jlo; j <= J - 2; ++j) rhs[std::size_t(j)] = u_[std::size_t(j)];
    matrix_.solve(rhs);
    post_solve_update(rhs);
}

void Solver::post_solve_update(const std::vector<double>& v_half) {
    const auto t0 = clock_type::now();
    if (opt_.mode == ConvMode::Direct) {
        for (auto& [node, h] : hist_) h.push_back(v_half[std::size_t(node)]);
    } else {
        for (auto& [node, p2] : prev2_) p2 = v_prev_[std::size_t(node)];
    }
    boundary_seconds_ += seconds_since(t0);

    for (std::size_t j = 0; j < u_.size(); ++j)
        u_[j] = 2.0 * v_half[j] - u_[j];
    v_prev_ = v_half;
    ++n_;

    if (opt_.stability_factor > 0.0) {
        const double norm = grid_norm();
        if (!(norm <= opt_.stability_factor * u0_norm_ + 1e-300) ||
            !std::isfinite(norm))
            throw StabilityViolation(
                "Solver: interior norm " + std::to_string(norm) + " exceeds " +
                std::to_string(opt_.stability_factor) + " * ||u0|| at step " +
                std::to_string(n_));
    }
}

double Solver::grid_norm() const {
    double s = 0.5 * (u_.front() * u_.front() + u_.back() * u_.back());
    for (std::size_t j = 1; j + 1 < u_.size(); ++j) s += u_[j] * u_[j];
    return std::sqrt(spec_.dx() * s);
}

RunResult run(const ProblemSpec& spec, const RunOptions& options) {
    spec.validate();
    const KernelSet kernels =
        build_kernels(spec, options.Nz, options.kernel_cache_dir);
    SolverOptions sopt;
    sopt.mode = options.mode;
    sopt.soe_L = options.soe_L;
    sopt.soe_nu = options.soe_nu;
    sopt.stability_factor = options.stability_factor;
    Solver solver(spec, kernels, sopt);

    std::multimap<int, double> snap_steps;
    for (double t : options.snapshot_times) {
        int target = int(std::lround(t / spec.dt()));
        target = std::max(0, std::min(spec.N_steps, target));
        snap_steps.emplace(target, t);
    }

    RunResult result;
    result.norm_history.reserve(std::size_t(spec.N_steps) + 1);
    result.norm_history.push_back(solver.grid_norm());
    auto record_snapshots = [&](int level) {
        auto [lo, hi] = snap_steps.equal_range(level);
        for (auto it = lo; it != hi; ++it)
            result.snapshots.push_back(
                {level * spec.dt(), level, solver.u()});
    };
    record_snapshots(0);

    const auto t0 = std::chrono::steady_clock::now();
    double boundary_before = 0.0;
    for (int n = 1; n <= spec.N_steps; ++n) {
        const auto ts = std::chrono::steady_clock::now();
        solver.step();
        if (options.record_timings) {
            result.step_seconds.push_back(seconds_since(ts));
            result.boundary_step_seconds.push_back(solver.boundary_seconds() -
                                                   boundary_before);
            boundary_before = solver.boundary_seconds();
        }
        result.norm_history.push_back(solver.grid_norm());
        record_snapshots(n);
    }
    result.total_seconds = seconds_since(t0);
    result.boundary_seconds = solver.boundary_seconds();
    result.steps = spec.N_steps;
    return result;
}

} // namespace kdvtbc

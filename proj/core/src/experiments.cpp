#include "kdvtbc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "kdvtbc/errors.hpp"
#include "kdvtbc/reference.hpp"

namespace kdvtbc {

namespace {

double trapezoid_norm(std::span<const double> v, double dx) {
    if (v.size() < 2) return 0.0;
    double s = 0.5 * (v.front() * v.front() + v.back() * v.back());
    for (std::size_t j = 1; j + 1 < v.size(); ++j) s += v[j] * v[j];
    return std::sqrt(dx * s);
}

} // namespace

double relative_l2_error(std::span<const double> u_exact,
                         std::span<const double> u_num, double dx) {
    if (u_exact.size() != u_num.size())
        throw InvalidSpec("relative_l2_error: grid size mismatch");
    const double ref_norm = trapezoid_norm(u_exact, dx);
    if (ref_norm < 1e-300)
        throw ZeroReferenceNorm("relative_l2_error: reference norm underflow");
    std::vector<double> diff(u_exact.size());
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = u_exact[j] - u_num[j];
    return trapezoid_norm(diff, dx) / ref_norm;
}

ErrorReport compute_errors(const Trajectory& numerical,
                           const Trajectory& reference) {
    if (numerical.times.size() != reference.times.size() ||
        numerical.states.size() != reference.states.size() ||
        numerical.times.size() != numerical.states.size())
        throw InvalidSpec("compute_errors: trajectory shapes differ");
    for (std::size_t i = 0; i < numerical.times.size(); ++i)
        if (std::abs(numerical.times[i] - reference.times[i]) >
            1e-9 * (1.0 + std::abs(numerical.times[i])))
            throw InvalidSpec("compute_errors: evaluation times differ");

    ErrorReport report;
    report.times = numerical.times;
    report.errors.resize(report.times.size());
    for (std::size_t i = 0; i < report.times.size(); ++i)
        report.errors[i] = relative_l2_error(reference.states[i],
                                             numerical.states[i], numerical.dx);

    double sq = 0.0;
    double t_prev = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        const double t = report.times[i];
        if (t <= 0.0) { t_prev = t; continue; }
        const double w = first && i == 0 ? t : t - t_prev;
        report.rel_err_tm = std::max(report.rel_err_tm, report.errors[i]);
        sq += w * report.errors[i] * report.errors[i];
        t_prev = t;
        first = false;
    }
    report.rel_err_l2 = std::sqrt(sq);
    return report;
}

const char* sweep_axis_name(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::Dx: return "dx";
    case SweepAxis::Dt: return "dt";
    case SweepAxis::Radius: return "radius";
    case SweepAxis::SoeTerms: return "soe_terms";
    }
    return "?";
}

SweepAxis sweep_axis_from_name(const std::string& name) {
    if (name == "dx") return SweepAxis::Dx;
    if (name == "dt") return SweepAxis::Dt;
    if (name == "radius" || name == "r") return SweepAxis::Radius;
    if (name == "soe_terms" || name == "L") return SweepAxis::SoeTerms;
    throw InvalidSpec("unknown sweep axis '" + name + "'");
}

Trajectory reference_trajectory(const ProblemSpec& spec, ReferenceKind kind,
                                std::span<const double> times) {
    Trajectory traj;
    traj.dx = spec.dx();
    for (double t : times) {
        traj.times.push_back(t);
        if (t <= 0.0) {
            traj.states.push_back(spec.sample_u0());
        } else if (kind == ReferenceKind::AiryConvolution) {
            if (spec.U1 != 0.0 || spec.U2 != 1.0)
                throw InvalidSpec(
                    "Airy reference only covers U1 = 0, U2 = 1");
            traj.states.push_back(
                exact_example1_cached(t, spec.a, spec.b, spec.J));
        } else {
            traj.states.push_back(
                exact_example2(t, spec.sample_u0(), spec.b - spec.a, spec.U1,
                               spec.U2));
        }
    }
    return traj;
}

double fit_loglog_slope(std::span<const double> xs, std::span<const double> es,
                        double* residual) {
    if (xs.size() != es.size() || xs.size() < 2)
        throw InvalidSpec("fit_loglog_slope: need >= 2 matching points");
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(es[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    if (residual) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double fit = my + slope * (lx[i] - mx);
            rss += (ly[i] - fit) * (ly[i] - fit);
        }
        *residual = std::sqrt(rss / double(n));
    }
    return slope;
}

namespace {

ReferenceKind default_reference(const ProblemSpec& spec) {
    return spec.U1 == 0.0 && spec.U2 == 1.0 ? ReferenceKind::AiryConvolution
                                            : ReferenceKind::PeriodicSpectral;
}

std::vector<double> eval_times(const ProblemSpec& spec, int points) {
    std::vector<double> times;
    const int m = std::max(1, points);
    for (int i = 1; i <= m; ++i) {
        const int step = int(std::lround(double(spec.N_steps) * i / m));
        if (step >= 1) times.push_back(step * spec.dt());
    }
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

SweepPoint run_sweep_point(const ProblemSpec& spec, double axis_value,
                           const SweepOptions& options) {
    SweepPoint point;
    point.axis_value = axis_value;
    try {
        const auto times = eval_times(spec, options.eval_points);
        RunOptions ropt;
        ropt.mode = options.mode;
        ropt.soe_L = options.soe_L;
        ropt.soe_nu = options.soe_nu;
        ropt.kernel_cache_dir = options.kernel_cache_dir;
        ropt.snapshot_times = times;
        const RunResult result = run(spec, ropt);

        Trajectory num;
        num.dx = spec.dx();
        for (const Snapshot& snap : result.snapshots) {
            num.times.push_back(snap.time);
            num.states.push_back(snap.u);
        }
        const ReferenceKind kind =
            options.reference.value_or(default_reference(spec));
        const Trajectory ref = reference_trajectory(spec, kind, num.times);
        const ErrorReport report = compute_errors(num, ref);
        point.rel_err_tm = report.rel_err_tm;
        point.rel_err_l2 = report.rel_err_l2;
        point.final_err = report.errors.back();
    } catch (const Error& e) {
        point.failed = true;
        point.message = e.what();
    }
    return point;
}

double metric_of(const SweepPoint& p, SweepOptions::Metric metric) {
    switch (metric) {
    case SweepOptions::Metric::FinalStep: return p.final_err;
    case SweepOptions::Metric::RelErrTm: return p.rel_err_tm;
    case SweepOptions::Metric::RelErrL2: return p.rel_err_l2;
    }
    return p.rel_err_l2;
}

} // namespace

SweepResult convergence_sweep(const ProblemSpec& base, SweepAxis axis,
                              std::span<const double> values,
                              const SweepOptions& options) {
    SweepResult result;
    result.axis = axis;
    result.points.resize(values.size());

    std::vector<ProblemSpec> specs(values.size(), base);
    std::vector<double> axis_values(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        ProblemSpec& spec = specs[i];
        switch (axis) {
        case SweepAxis::Dx:
            spec.J = int(std::lround(values[i]));
            axis_values[i] = spec.dx();
            break;
        case SweepAxis::Dt:
            spec.N_steps = int(std::lround(values[i]));
            axis_values[i] = spec.dt();
            break;
        case SweepAxis::Radius:
            spec.r = values[i];
            axis_values[i] = values[i];
            break;
        case SweepAxis::SoeTerms:
            axis_values[i] = values[i];
            break;
        }
    }

    SweepOptions point_options = options;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            SweepOptions po = point_options;
            if (axis == SweepAxis::SoeTerms) {
                po.soe_L = int(std::lround(values[i]));
                po.mode = ConvMode::Fast;
            }
            result.points[i] = run_sweep_point(specs[i], axis_values[i], po);
        }
    };
    unsigned n_workers = options.workers > 0
                             ? unsigned(options.workers)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, unsigned(values.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // slope over the pre-plateau refinement points (coarse to fine)
    if (axis != SweepAxis::Radius) {
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < result.points.size(); ++i)
            if (!result.points[i].failed) order.push_back(i);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return result.points[x].axis_value > result.points[y].axis_value;
        });
        std::vector<std::size_t> used;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (k > 0) {
                const double coarse =
                    metric_of(result.points[order[k - 1]], options.metric);
                const double fine = metric_of(result.points[order[k]], options.metric);
                if (!(coarse / fine >= 1.2)) break; // saturation plateau
            }
            used.push_back(order[k]);
        }
        if (used.size() >= 3) {
            std::vector<double> xs, es;
            for (std::size_t i : used) {
                xs.push_back(result.points[i].axis_value);
                es.push_back(metric_of(result.points[i], options.metric));
            }
            result.slope = fit_loglog_slope(xs, es, &result.slope_residual);
            result.slope_valid = true;
            result.used = used;
        }
    }
    return result;
}

SweepResult radius_sweep(const ProblemSpec& base, std::span<const double> radii,
                         const SweepOptions& options) {
    return convergence_sweep(base, SweepAxis::Radius, radii, options);
}

ErrorReport error_evolution(const ProblemSpec& spec, int stride,
                            const SweepOptions& options) {
    spec.validate();
    if (stride < 1) throw InvalidSpec("error_evolution: stride must be >= 1");
    const KernelSet kernels = build_kernels(spec, 0, options.kernel_cache_dir);
    SolverOptions sopt;
    sopt.mode = options.mode;
    sopt.soe_L = options.soe_L;
    sopt.soe_nu = options.soe_nu;
    Solver solver(spec, kernels, sopt);
    const ReferenceKind kind = options.reference.value_or(default_reference(spec));

    Trajectory num;
    num.dx = spec.dx();
    for (int n = 1; n <= spec.N_steps; ++n) {
        solver.step();
        if (n % stride == 0 || n == spec.N_steps) {
            num.times.push_back(solver.time());
            num.states.push_back(solver.u());
        }
    }
    const Trajectory ref = reference_trajectory(spec, kind, num.times);
    return compute_errors(num, ref);
}

} // namespace kdvtbc

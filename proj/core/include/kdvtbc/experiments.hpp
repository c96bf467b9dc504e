#ifndef KDVTBC_EXPERIMENTS_HPP
#define KDVTBC_EXPERIMENTS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kdvtbc/problem.hpp"
#include "kdvtbc/solver.hpp"

namespace kdvtbc {

/// ||u_exact - u_num||_2 / ||u_exact||_2 with the trapezoidal l2 norm.
double relative_l2_error(std::span<const double> u_exact,
                         std::span<const double> u_num, double dx);

/// Sampled trajectory: states at increasing times on one fixed grid.
struct Trajectory {
    double dx = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
};

/// Per-step relative l2 errors e^{(n)} with the two aggregates
///   rel_err_tm = max_n e^{(n)},
///   rel_err_l2 = (sum_n w_n (e^{(n)})^2)^{1/2},
/// w_n the time gaps of the evaluated ladder (= dt on the full ladder).
/// Entries at t = 0 are excluded from both aggregates.
struct ErrorReport {
    std::vector<double> times;
    std::vector<double> errors;
    double rel_err_tm = 0.0;
    double rel_err_l2 = 0.0;
};

ErrorReport compute_errors(const Trajectory& numerical,
                           const Trajectory& reference);

enum class SweepAxis { Dx, Dt, Radius, SoeTerms };
enum class ReferenceKind { AiryConvolution, PeriodicSpectral };

const char* sweep_axis_name(SweepAxis axis);
SweepAxis sweep_axis_from_name(const std::string& name);

struct SweepPoint {
    double axis_value = 0.0; ///< dx, dt, r or L of this run
    double rel_err_tm = 0.0;
    double rel_err_l2 = 0.0;
    double final_err = 0.0; ///< e^{(N)}
    bool failed = false;
    std::string message;
};

/// Log-log slope of the chosen error metric against the axis value.
/// Plateau points (later refinements improving by less than 1.2x) are
/// excluded from the fit; `used` lists the fitted point indices.
struct SweepResult {
    SweepAxis axis = SweepAxis::Dx;
    std::vector<SweepPoint> points;
    double slope = 0.0;
    double slope_residual = 0.0;
    bool slope_valid = false;
    std::vector<std::size_t> used;
};

struct SweepOptions {
    ConvMode mode = ConvMode::Direct;
    int soe_L = 20;
    int soe_nu = 2;
    std::string kernel_cache_dir;
    std::optional<ReferenceKind> reference; ///< default: by U1 (0 -> Airy)
    int eval_points = 33;  ///< error-evaluation times per run (plus T)
    int workers = 0;       ///< 0 = hardware concurrency
    enum class Metric { FinalStep, RelErrTm, RelErrL2 } metric = Metric::RelErrL2;
};

/// Runs the solver once per axis value (J for Dx, N for Dt, r, or L) and
/// fits the convergence slope. Failed points are kept, marked, and
/// excluded from the fit.
SweepResult convergence_sweep(const ProblemSpec& base, SweepAxis axis,
                              std::span<const double> values,
                              const SweepOptions& options = {});

SweepResult radius_sweep(const ProblemSpec& base, std::span<const double> radii,
                         const SweepOptions& options = {});

/// e^{(n)} against the reference every `stride` steps of one run.
ErrorReport error_evolution(const ProblemSpec& spec, int stride = 1,
                            const SweepOptions& options = {});

/// Reference trajectory for the given problem at the requested times.
Trajectory reference_trajectory(const ProblemSpec& spec, ReferenceKind kind,
                                std::span<const double> times);

double fit_loglog_slope(std::span<const double> xs, std::span<const double> es,
                        double* residual = nullptr);

} // namespace kdvtbc

#endif

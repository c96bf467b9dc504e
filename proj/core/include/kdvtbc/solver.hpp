#ifndef KDVTBC_SOLVER_HPP
#define KDVTBC_SOLVER_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kdvtbc/banded.hpp"
#include "kdvtbc/kernels.hpp"
#include "kdvtbc/problem.hpp"
#include "kdvtbc/soe.hpp"

namespace kdvtbc {

enum class ConvMode { Direct, Fast };

const char* conv_mode_name(ConvMode m);
ConvMode conv_mode_from_name(const std::string& name);

/// One boundary convolution of the midpoint algorithm: the matrix row
/// gets -coeff * Y^{xi,(0)} on column `node`, the right-hand side gets
/// coeff * (sum_{k=1}^{n} Y^{xi,(k)} v_node^{(n+1/2-k)}
///          + Y^{xi,(n+1)} u_node^{(0)} / 2).
struct BoundaryTerm {
    KernelId kernel;
    int node;
    double coeff;
};

/// Boundary row: unknown v_local carries coefficient +1 and the previous
/// midpoint value -v_local^{(n-1/2)} goes to the right-hand side.
struct BoundaryRow {
    int row;
    int local;
    std::vector<BoundaryTerm> terms;
};

std::vector<BoundaryRow> boundary_rows(Scheme scheme, int J);

struct SolverOptions {
    ConvMode mode = ConvMode::Direct;
    int soe_L = 20;
    int soe_nu = 2;
    /// Interior norm guard ||u^(n)|| <= factor * ||u^(0)||; <= 0 disables.
    double stability_factor = 10.0;
};

/// Time stepper for one run: banded midpoint systems with discrete
/// transparent boundary closures, convolutions either summed directly
/// from the stored history or compressed through the SOE recurrence.
class Solver {
public:
    Solver(const ProblemSpec& spec, const KernelSet& kernels,
           SolverOptions options = {});

    void step();

    int n() const { return n_; }
    double time() const { return n_ * spec_.dt(); }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& v_prev() const { return v_prev_; }
    const ProblemSpec& spec() const { return spec_; }
    const std::vector<BoundaryRow>& rows() const { return rows_; }
    const std::map<KernelId, SoeKernel>& soe_kernels() const { return soe_; }

    /// Trapezoidal l2 norm of the current grid values.
    double grid_norm() const;

    /// Unfactored system matrix (test support).
    BandedMatrix assemble_matrix() const;
    /// Right-hand side of the next midpoint solve (test support).
    std::vector<double> assemble_rhs() const;

    /// Seconds spent in boundary-convolution work since construction.
    double boundary_seconds() const { return boundary_seconds_; }

private:
    double conv_rhs_term(const BoundaryTerm& term) const;
    void post_solve_update(const std::vector<double>& v_half);

    ProblemSpec spec_;
    const KernelSet& kernels_;
    SolverOptions opt_;
    std::vector<BoundaryRow> rows_;
    BandedMatrix matrix_;
    std::vector<double> u_, v_prev_, u0_;
    double u0_norm_ = 0.0;
    int n_ = 0;

    std::map<int, std::vector<double>> hist_;       // direct: node -> v history
    std::map<KernelId, SoeKernel> soe_;             // fast
    std::map<std::pair<int, int>, SoeAccumulator> acc_; // (kernel,node) -> state
    std::map<int, double> prev2_;                   // fast: v_node^{(n-3/2)}
    double boundary_seconds_ = 0.0;
};

struct Snapshot {
    double time = 0.0;
    int step = 0;
    std::vector<double> u;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    std::vector<double> step_seconds;     ///< per step, when timings recorded
    std::vector<double> boundary_step_seconds;
    std::vector<double> norm_history;     ///< trapezoidal l2 norm per level
    double total_seconds = 0.0;
    double boundary_seconds = 0.0;
    int steps = 0;
};

struct RunOptions {
    ConvMode mode = ConvMode::Direct;
    int soe_L = 20;
    int soe_nu = 2;
    std::size_t Nz = 0; ///< 0 = default_nz
    std::string kernel_cache_dir;
    double stability_factor = 10.0;
    std::vector<double> snapshot_times;
    bool record_timings = false;
};

/// Full trajectory driver: builds kernels, steps to T, collects
/// snapshots at the requested times (nearest step) and per-level norms.
RunResult run(const ProblemSpec& spec, const RunOptions& options = {});

} // namespace kdvtbc

#endif

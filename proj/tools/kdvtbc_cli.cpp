// Command-line front end: run, sweep, kernels dump, roots dump, soe fit,
// reference dump. All tabular output is CSV with 17-significant-digit
// floats; configs are flat key-value text files.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "kdvtbc/csv.hpp"
#include "kdvtbc/errors.hpp"
#include "kdvtbc/experiments.hpp"
#include "kdvtbc/kernels.hpp"
#include "kdvtbc/poly_roots.hpp"
#include "kdvtbc/reference.hpp"
#include "kdvtbc/soe.hpp"
#include "kdvtbc/solver.hpp"

namespace {

using namespace kdvtbc;

struct CliConfig {
    ProblemSpec spec;
    std::string ic_name = "gaussian";
    ConvMode mode = ConvMode::Direct;
    int soe_L = 20;
    int soe_nu = 2;
    std::vector<double> snapshots = {1.0, 2.0, 3.0, 4.0};
    std::string out_dir = ".";
    std::string cache_dir;
};

CliConfig example1_defaults() {
    CliConfig cfg;
    cfg.spec.scheme = Scheme::RCN;
    cfg.spec.U1 = 0.0;
    cfg.spec.U2 = 1.0;
    cfg.spec.a = -6.0;
    cfg.spec.b = 6.0;
    cfg.spec.T = 4.0;
    cfg.spec.J = 5000;
    cfg.spec.N_steps = 2560;
    cfg.spec.r = 1.001;
    cfg.ic_name = "gaussian";
    return cfg;
}

CliConfig example2_defaults() {
    CliConfig cfg;
    cfg.spec.scheme = Scheme::CCN;
    cfg.spec.U1 = 1.0;
    cfg.spec.U2 = 1.0;
    cfg.spec.a = 0.0;
    cfg.spec.b = 10.0;
    cfg.spec.T = 4.8e-4;
    cfg.spec.J = 5000;
    cfg.spec.N_steps = 2560;
    cfg.spec.r = 1.001;
    cfg.ic_name = "example2";
    cfg.snapshots = {4.8e-4};
    return cfg;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stod(item));
    }
    return values;
}

CliConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidSpec("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ss(line);
        std::string key;
        ss >> key;
        if (key.empty()) continue;
        std::string value;
        ss >> value;
        if (value == "=") ss >> value;
        kv[key] = value;
    }
    CliConfig cfg = example1_defaults();
    auto take = [&](const char* key, auto setter) {
        const auto it = kv.find(key);
        if (it != kv.end()) setter(it->second);
    };
    take("scheme", [&](const std::string& v) { cfg.spec.scheme = scheme_from_name(v); });
    take("U1", [&](const std::string& v) { cfg.spec.U1 = std::stod(v); });
    take("U2", [&](const std::string& v) { cfg.spec.U2 = std::stod(v); });
    take("a", [&](const std::string& v) { cfg.spec.a = std::stod(v); });
    take("b", [&](const std::string& v) { cfg.spec.b = std::stod(v); });
    take("T", [&](const std::string& v) { cfg.spec.T = std::stod(v); });
    take("J", [&](const std::string& v) { cfg.spec.J = std::stoi(v); });
    take("N", [&](const std::string& v) { cfg.spec.N_steps = std::stoi(v); });
    take("r", [&](const std::string& v) { cfg.spec.r = std::stod(v); });
    take("mode", [&](const std::string& v) { cfg.mode = conv_mode_from_name(v); });
    take("L", [&](const std::string& v) { cfg.soe_L = std::stoi(v); });
    take("nu", [&](const std::string& v) { cfg.soe_nu = std::stoi(v); });
    take("ic", [&](const std::string& v) { cfg.ic_name = v; });
    take("snapshots", [&](const std::string& v) { cfg.snapshots = parse_double_list(v); });
    take("out_dir", [&](const std::string& v) { cfg.out_dir = v; });
    take("cache_dir", [&](const std::string& v) { cfg.cache_dir = v; });
    return cfg;
}

CliConfig resolve_config(const std::string& config_path, int example_defaults) {
    CliConfig cfg = example_defaults == 2 ? example2_defaults()
                                          : example1_defaults();
    if (!config_path.empty()) cfg = load_config(config_path);
    cfg.spec.u0 = make_initial_condition(cfg.ic_name);
    return cfg;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw InvalidSpec("cannot write '" + path.string() + "'");
    return out;
}

bool reference_available(const ProblemSpec& spec, ReferenceKind* kind) {
    if (spec.U1 == 0.0 && spec.U2 == 1.0) {
        *kind = ReferenceKind::AiryConvolution;
        return true;
    }
    *kind = ReferenceKind::PeriodicSpectral;
    return true;
}

int cmd_run(const std::string& config_path, bool timings) {
    const CliConfig cfg = resolve_config(config_path, 1);
    cfg.spec.validate();

    RunOptions opt;
    opt.mode = cfg.mode;
    opt.soe_L = cfg.soe_L;
    opt.soe_nu = cfg.soe_nu;
    opt.kernel_cache_dir = cfg.cache_dir;
    opt.snapshot_times = cfg.snapshots;
    opt.record_timings = timings;
    const RunResult result = run(cfg.spec, opt);

    ReferenceKind kind;
    const bool with_ref = reference_available(cfg.spec, &kind);
    const std::filesystem::path dir(cfg.out_dir);
    for (const Snapshot& snap : result.snapshots) {
        std::ostringstream name;
        name << "snapshot_n" << snap.step << ".csv";
        auto out = open_out(dir / name.str());
        std::vector<double> uex;
        if (with_ref && snap.time > 0.0) {
            Trajectory ref = reference_trajectory(cfg.spec, kind, {{snap.time}});
            uex = ref.states.front();
        }
        const std::vector<std::string> cols =
            uex.empty() ? std::vector<std::string>{"x", "u_num"}
                        : std::vector<std::string>{"x", "u_num", "u_exact"};
        csv::write_header(out, cols);
        for (int j = 0; j <= cfg.spec.J; ++j) {
            std::vector<double> row = {cfg.spec.x(j), snap.u[std::size_t(j)]};
            if (!uex.empty()) row.push_back(uex[std::size_t(j)]);
            csv::write_row(out, row);
        }
        std::cout << "wrote " << (dir / name.str()).string() << " (t="
                  << snap.time << ")\n";
    }
    if (timings) {
        auto out = open_out(dir / "timing.csv");
        csv::write_header(out, std::vector<std::string>{"n", "step_seconds"});
        for (std::size_t n = 0; n < result.step_seconds.size(); ++n)
            csv::write_row(out, std::vector<double>{double(n + 1),
                                                    result.step_seconds[n]});
        std::cout << "wrote " << (dir / "timing.csv").string() << "\n";
    }
    std::cout << "steps=" << result.steps
              << " total_seconds=" << result.total_seconds
              << " boundary_seconds=" << result.boundary_seconds << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& axis_name,
              const std::string& values_text, const std::string& out_path,
              int workers) {
    const CliConfig cfg = resolve_config(config_path, 1);
    const SweepAxis axis = sweep_axis_from_name(axis_name);
    const std::vector<double> values = parse_double_list(values_text);
    if (values.empty()) throw InvalidSpec("sweep: no axis values given");

    SweepOptions opt;
    opt.mode = cfg.mode;
    opt.soe_L = cfg.soe_L;
    opt.soe_nu = cfg.soe_nu;
    opt.kernel_cache_dir = cfg.cache_dir;
    opt.workers = workers;
    const SweepResult result = convergence_sweep(cfg.spec, axis, values, opt);

    auto out = open_out(out_path);
    csv::write_header(out, std::vector<std::string>{
                               sweep_axis_name(axis), "rel_err_tm",
                               "rel_err_l2", "final_err", "failed"});
    for (const SweepPoint& p : result.points)
        csv::write_row(out, std::vector<double>{p.axis_value, p.rel_err_tm,
                                                p.rel_err_l2, p.final_err,
                                                p.failed ? 1.0 : 0.0});
    for (const SweepPoint& p : result.points)
        if (p.failed)
            std::cout << "point " << p.axis_value << " failed: " << p.message
                      << "\n";
    if (result.slope_valid)
        std::cout << "fitted slope=" << result.slope
                  << " residual=" << result.slope_residual << " over "
                  << result.used.size() << " points\n";
    else
        std::cout << "slope not fitted (need >= 3 pre-plateau points)\n";
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_kernels_dump(const std::string& config_path, const std::string& scheme,
                     const std::string& out_path, int nmax) {
    CliConfig cfg = resolve_config(config_path, 1);
    if (!scheme.empty()) cfg.spec.scheme = scheme_from_name(scheme);
    if (cfg.spec.scheme == Scheme::RCN) cfg.spec.U1 = 0.0;
    const KernelSet set = build_kernels(cfg.spec, 0, cfg.cache_dir);

    auto out = open_out(out_path);
    out << "n,kernel_id,Y,Y_xi\n";
    const int last = std::min<int>(nmax, int(set.Nz) - 1);
    for (KernelId id : kernels_for(cfg.spec.scheme)) {
        const auto& plain = set.plain_of(id);
        const auto& xi = set.xi_of(id);
        for (int n = 0; n <= last; ++n)
            out << n << ',' << kernel_name(id) << ','
                << csv::format(plain[std::size_t(n)]) << ','
                << csv::format(xi[std::size_t(n)]) << "\n";
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_roots_dump(const std::string& config_path, const std::string& scheme,
                   const std::string& out_path, int nz) {
    CliConfig cfg = resolve_config(config_path, 1);
    if (!scheme.empty()) cfg.spec.scheme = scheme_from_name(scheme);
    if (cfg.spec.scheme == Scheme::RCN) cfg.spec.U1 = 0.0;
    const DiscreteRootTrack track =
        track_roots(cfg.spec.scheme, cfg.spec, std::size_t(nz));

    auto out = open_out(out_path);
    out << "theta,k,re,im,abs\n";
    for (std::size_t i = 0; i < track.Nz; ++i) {
        const double theta = 2.0 * 3.14159265358979323846 * double(i) /
                             double(track.Nz);
        for (int k = 0; k < track.degree; ++k) {
            const cplx l = track.roots[i][std::size_t(k)];
            out << csv::format(theta) << ',' << (k + 1) << ','
                << csv::format(l.real()) << ',' << csv::format(l.imag()) << ','
                << csv::format(std::abs(l)) << "\n";
        }
    }
    std::cout << "wrote " << out_path << " (monodromy:";
    for (int k = 0; k < track.degree; ++k)
        std::cout << ' ' << track.monodromy[std::size_t(k)];
    std::cout << ")\n";
    return 0;
}

int cmd_soe_fit(const std::string& config_path, const std::string& kernel,
                int L, int nu, const std::string& out_path, int nmax) {
    CliConfig cfg = resolve_config(config_path, 1);
    const KernelId id = kernel_from_name(kernel);
    const bool rcn_kernel = kernel.back() == 'R';
    cfg.spec.scheme = rcn_kernel ? Scheme::RCN : Scheme::CCN;
    if (rcn_kernel) cfg.spec.U1 = 0.0;
    const KernelSet set = build_kernels(cfg.spec, 0, cfg.cache_dir);
    const CoefficientSequence& seq = set.xi_of(id);
    const SoeKernel soe = fit_soe(seq, L, nu);
    for (const std::string& note : soe.fit_log)
        std::cout << "retry: " << note << "\n";

    auto out = open_out(out_path);
    out << "n,X,X_tilde,abs_error\n";
    const int last = std::min<int>(nmax, int(seq.size()) - 1);
    for (int n = 0; n <= last; ++n) {
        const double x = seq[std::size_t(n)];
        const double xt = soe.eval(n);
        out << n << ',' << csv::format(x) << ',' << csv::format(xt) << ','
            << csv::format(std::abs(x - xt)) << "\n";
    }
    std::cout << "wrote " << out_path << " (L=" << soe.L() << ", nu=" << soe.nu
              << ")\n";
    return 0;
}

int cmd_reference_dump(const std::string& config_path, int example, double time,
                       const std::string& out_path) {
    const CliConfig cfg = resolve_config(config_path, example);
    std::vector<double> values;
    if (example == 1) {
        std::vector<double> xs(std::size_t(cfg.spec.J) + 1);
        for (int j = 0; j <= cfg.spec.J; ++j) xs[std::size_t(j)] = cfg.spec.x(j);
        values = time > 0.0 ? exact_example1(time, xs) : cfg.spec.sample_u0();
    } else if (example == 2) {
        values = exact_example2(time, cfg.spec.sample_u0(),
                                cfg.spec.b - cfg.spec.a, cfg.spec.U1,
                                cfg.spec.U2);
    } else {
        throw InvalidSpec("reference dump: example must be 1 or 2");
    }
    auto out = open_out(out_path);
    out << "x,u_exact\n";
    for (int j = 0; j <= cfg.spec.J; ++j)
        out << csv::format(cfg.spec.x(j)) << ','
            << csv::format(values[std::size_t(j)]) << "\n";
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linearized KdV solver with discrete transparent boundary "
                 "conditions"};
    app.require_subcommand(1);

    std::string config_path, scheme, out_path = "out.csv", kernel = "Y3R";
    std::string axis = "dx", values;
    int nmax = 256, nz = 512, L = 20, nu = 2, example = 1, workers = 0;
    double time = 1.0;
    bool timings = false;

    auto* c_run = app.add_subcommand("run", "time-step one configuration");
    c_run->add_option("--config", config_path, "config file");
    c_run->add_flag("--timings", timings, "write per-step timing log");

    auto* c_sweep = app.add_subcommand("sweep", "convergence/radius sweep");
    c_sweep->add_option("--config", config_path, "config file");
    c_sweep->add_option("--axis", axis, "dx | dt | radius | soe_terms");
    c_sweep->add_option("--values", values,
                        "comma list (J for dx, N for dt, r, or L)")
        ->required();
    c_sweep->add_option("--out", out_path, "output CSV");
    c_sweep->add_option("--workers", workers, "worker threads (0 = auto)");

    auto* c_kern = app.add_subcommand("kernels", "kernel utilities");
    auto* c_kdump = c_kern->add_subcommand("dump", "coefficient CSV");
    c_kdump->add_option("--config", config_path, "config file");
    c_kdump->add_option("--scheme", scheme, "rcn | ccn");
    c_kdump->add_option("--out", out_path, "output CSV")->required();
    c_kdump->add_option("--nmax", nmax, "last coefficient index");

    auto* c_roots = app.add_subcommand("roots", "root-track utilities");
    auto* c_rdump = c_roots->add_subcommand("dump", "tracked roots CSV");
    c_rdump->add_option("--config", config_path, "config file");
    c_rdump->add_option("--scheme", scheme, "rcn | ccn");
    c_rdump->add_option("--out", out_path, "output CSV");
    c_rdump->add_option("--nz", nz, "circle nodes");

    auto* c_soe = app.add_subcommand("soe", "sum-of-exponentials utilities");
    auto* c_sfit = c_soe->add_subcommand("fit", "fit one kernel, emit CSV");
    c_sfit->add_option("--config", config_path, "config file");
    c_sfit->add_option("--kernel", kernel, "kernel id, e.g. Y3R");
    c_sfit->add_option("--L", L, "exponential terms");
    c_sfit->add_option("--nu", nu, "exact head length");
    c_sfit->add_option("--out", out_path, "output CSV");
    c_sfit->add_option("--nmax", nmax, "last index in CSV");

    auto* c_ref = app.add_subcommand("reference", "reference solutions");
    auto* c_refdump = c_ref->add_subcommand("dump", "exact solution CSV");
    c_refdump->add_option("--config", config_path, "config file");
    c_refdump->add_option("--example", example, "1 | 2")->required();
    c_refdump->add_option("--time", time, "evaluation time")->required();
    c_refdump->add_option("--out", out_path, "output CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_run->parsed()) return cmd_run(config_path, timings);
        if (c_sweep->parsed())
            return cmd_sweep(config_path, axis, values, out_path, workers);
        if (c_kern->parsed() && c_kdump->parsed())
            return cmd_kernels_dump(config_path, scheme, out_path, nmax);
        if (c_roots->parsed() && c_rdump->parsed())
            return cmd_roots_dump(config_path, scheme, out_path, nz);
        if (c_soe->parsed() && c_sfit->parsed())
            return cmd_soe_fit(config_path, kernel, L, nu, out_path, nmax);
        if (c_ref->parsed() && c_refdump->parsed())
            return cmd_reference_dump(config_path, example, time, out_path);
        std::cerr << "error: missing subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

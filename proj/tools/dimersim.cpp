// dimersim: scans, power-law fits and single-point reports for the driven
// dissipative two-site Bose-Hubbard model across three tiers:
//   semiclassical  mean-field branches and their stability
//   gaussian       fluctuation covariances in the large-density limit
//   fock           exact truncated-space steady states at finite U
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dimer/scan.hpp"

namespace {

struct CommonParams {
    double J = 2.5, delta = -1.5, gamma = 1.0, U = 1.0;
};

void add_param_flags(CLI::App* app, CommonParams& p) {
    app->add_option("--J", p.J, "Hopping amplitude (units of gamma)")
        ->capture_default_str();
    app->add_option("--delta", p.delta, "Pump-cavity detuning (units of gamma)")
        ->capture_default_str();
    app->add_option("--gamma", p.gamma, "Single-site loss rate")
        ->capture_default_str();
    app->add_option("--U", p.U, "Kerr interaction strength (units of gamma)")
        ->capture_default_str();
}

int write_output(const dimer::ScanResult& result, const std::string& out) {
    if (out.empty() || out == "-") {
        dimer::write_scan(result, std::cout);
        return 0;
    }
    std::ofstream os(out, std::ios::binary);
    if (!os) {
        std::cerr << "error: cannot open output file " << out << "\n";
        return 1;
    }
    dimer::write_scan(result, os);
    return os.good() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Driven-dissipative Bose-Hubbard dimer: semiclassical bifurcations, "
        "Gaussian fluctuations, exact Fock-space steady states"};
    app.require_subcommand(1);

    // -------- scan --------
    CommonParams scan_params;
    dimer::ScanConfig cfg;
    std::string method_str = "semiclassical";
    std::string branch_str = "auto";
    std::string out_path;
    auto* scan = app.add_subcommand(
        "scan", "Sweep the rescaled drive uf and emit one record per point");
    add_param_flags(scan, scan_params);
    scan->add_option("--method", method_str,
                     "Tier: semiclassical | gaussian | fock")
        ->check(CLI::IsMember({"semiclassical", "gaussian", "fock"}))
        ->capture_default_str();
    scan->add_option("--uf-min", cfg.uf_min, "Scan start (sqrt(U) F / gamma^1.5)")
        ->capture_default_str();
    scan->add_option("--uf-max", cfg.uf_max, "Scan end")->capture_default_str();
    scan->add_option("--steps", cfg.steps, "Number of grid points (>= 2)")
        ->capture_default_str();
    scan->add_option("--cutoff", cfg.cutoff,
                     "Fock cutoff per site (fock method only)")
        ->capture_default_str();
    scan->add_option("--tol-kernel", cfg.tol_kernel,
                     "Steady-state kernel residual tolerance")
        ->capture_default_str();
    scan->add_option("--branch", branch_str,
                     "Displacement/branch policy: auto | symmetric | broken+")
        ->check(CLI::IsMember({"auto", "symmetric", "broken+"}))
        ->capture_default_str();
    scan->add_option("--format", cfg.format, "Output format: csv | json-lines")
        ->check(CLI::IsMember({"csv", "json-lines"}))
        ->capture_default_str();
    scan->add_option("--threads", cfg.threads, "Worker threads for the grid")
        ->capture_default_str();
    scan->add_option("--out", out_path, "Output file ('-' or empty: stdout)");

    // -------- fit --------
    std::string fit_input, fit_observable = "order", fit_side = "lower";
    auto* fit = app.add_subcommand(
        "fit", "Fit a power law to a previously written scan file");
    fit->add_option("--in", fit_input, "Scan CSV produced by `scan`")
        ->required();
    fit->add_option("--observable", fit_observable,
                    "order (rescaled order parameter, expect +1/2) | "
                    "variance (V, expect -1)")
        ->check(CLI::IsMember({"order", "variance"}))
        ->capture_default_str();
    fit->add_option("--side", fit_side, "Which threshold: lower | upper")
        ->check(CLI::IsMember({"lower", "upper"}))
        ->capture_default_str();

    // -------- point --------
    CommonParams point_params;
    std::string point_method = "semiclassical";
    double point_uf = 1.0;
    int point_cutoff = 10;
    double point_tol = 1e-8;
    auto* point = app.add_subcommand(
        "point", "Full observable and diagnostic report at one drive value");
    add_param_flags(point, point_params);
    point->add_option("--uf", point_uf, "Rescaled drive sqrt(U) F / gamma^1.5")
        ->capture_default_str();
    point->add_option("--method", point_method,
                      "Tier: semiclassical | gaussian | fock")
        ->check(CLI::IsMember({"semiclassical", "gaussian", "fock"}))
        ->capture_default_str();
    point->add_option("--cutoff", point_cutoff, "Fock cutoff per site")
        ->capture_default_str();
    point->add_option("--tol-kernel", point_tol,
                      "Steady-state kernel residual tolerance")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan->parsed()) {
            cfg.method = dimer::method_from_string(method_str);
            cfg.branch = dimer::branch_policy_from_string(branch_str);
            cfg.J = scan_params.J;
            cfg.delta = scan_params.delta;
            cfg.gamma = scan_params.gamma;
            cfg.U = scan_params.U;
            const auto result = dimer::run_scan(cfg);
            return write_output(result, out_path);
        }
        if (fit->parsed()) {
            const auto report =
                dimer::run_fit(fit_input, fit_observable, fit_side);
            std::cout << dimer::format_fit_report(report);
            return 0;
        }
        if (point->parsed()) {
            const dimer::DimerParams p = dimer::DimerParams::at_uf(
                point_params.J, point_params.delta, point_params.gamma,
                point_params.U, point_uf);
            std::cout << dimer::run_point(
                p, dimer::method_from_string(point_method), point_cutoff,
                point_tol);
            return 0;
        }
    } catch (const dimer::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

#include "dimer/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace dimer {

Method method_from_string(const std::string& s) {
    if (s == "semiclassical") return Method::semiclassical;
    if (s == "gaussian") return Method::gaussian;
    if (s == "fock") return Method::fock;
    throw InvalidArgument("unknown method: " + s);
}

BranchPolicy branch_policy_from_string(const std::string& s) {
    if (s == "auto") return BranchPolicy::automatic;
    if (s == "symmetric") return BranchPolicy::symmetric;
    if (s == "broken+") return BranchPolicy::broken_plus;
    throw InvalidArgument("unknown branch policy: " + s);
}

namespace {

const char* method_name(Method m) {
    switch (m) {
        case Method::semiclassical: return "semiclassical";
        case Method::gaussian: return "gaussian";
        case Method::fock: return "fock";
    }
    return "?";
}

const char* policy_name(BranchPolicy b) {
    switch (b) {
        case BranchPolicy::automatic: return "auto";
        case BranchPolicy::symmetric: return "symmetric";
        case BranchPolicy::broken_plus: return "broken+";
    }
    return "?";
}

}  // namespace

void ScanConfig::validate() const {
    if (!(uf_min < uf_max))
        throw InvalidArgument("scan: uf-min must be < uf-max");
    if (steps < 2) throw InvalidArgument("scan: steps must be >= 2");
    if (!(gamma > 0.0) || !(J > 0.0))
        throw InvalidArgument("scan: gamma and J must be > 0");
    if (!(U > 0.0))
        throw InvalidArgument("scan: U must be > 0 (uf fixes F via U)");
    if (method == Method::fock && cutoff < 1)
        throw InvalidArgument("scan: fock needs cutoff >= 1");
    if (format != "csv" && format != "json-lines")
        throw InvalidArgument("scan: format must be csv or json-lines");
    if (threads < 1) throw InvalidArgument("scan: threads must be >= 1");
}

std::vector<double> ScanConfig::grid() const {
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i)
        g[i] = uf_min + (uf_max - uf_min) * double(i) / double(steps - 1);
    return g;
}

std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

int branch_rank(Branch b) {
    switch (b) {
        case Branch::symmetric: return 0;
        case Branch::broken_plus: return 1;
        case Branch::broken_minus: return 2;
    }
    return 3;
}

// Solution chosen for the fluctuation tiers under a branch policy; returns
// nullptr with a reason when the policy cannot be satisfied.
const SemiclassicalSolution* pick_solution(
    const std::vector<SemiclassicalSolution>& sols, BranchPolicy pol,
    std::string* reason) {
    const auto find = [&sols](Branch b,
                              bool need_stable) -> const SemiclassicalSolution* {
        for (const auto& s : sols)
            if (s.branch == b && (!need_stable || s.stable)) return &s;
        return nullptr;
    };
    switch (pol) {
        case BranchPolicy::automatic:
            if (const auto* s = find(Branch::broken_plus, true)) return s;
            if (const auto* s = find(Branch::broken_minus, true)) return s;
            if (const auto* s = find(Branch::symmetric, true)) return s;
            *reason = "no dynamically stable solution at this point";
            return nullptr;
        case BranchPolicy::symmetric:
            if (const auto* s = find(Branch::symmetric, true)) return s;
            *reason = "symmetric branch unstable at this point";
            return nullptr;
        case BranchPolicy::broken_plus:
            if (const auto* s = find(Branch::broken_plus, true)) return s;
            *reason = "no stable broken+ branch at this point";
            return nullptr;
    }
    *reason = "bad branch policy";
    return nullptr;
}

std::vector<std::string> numeric_columns(Method m) {
    switch (m) {
        case Method::semiclassical:
            return {"re_alpha1", "im_alpha1", "re_alpha2", "im_alpha2",
                    "order_param_rescaled", "stable", "max_re_lambda",
                    "residual_norm"};
        case Method::gaussian:
            return {"V",       "inv_V",   "E_N",    "S",
                    "nu_tilde_minus", "nu_minus", "nu_plus"};
        case Method::fock:
            return {"U",        "cutoff",   "re_order_total",
                    "im_order_total", "abs_order_total", "V",
                    "E_N",      "S",        "residual",
                    "min_eig",  "trace_correction"};
    }
    return {};
}

void scan_semiclassical(const ScanConfig& cfg, ScanResult& out) {
    DimerParams base;
    base.J = cfg.J;
    base.delta = cfg.delta;
    base.gamma = cfg.gamma;
    base.U = cfg.U;
    const auto points = scan_branches(base, cfg.grid());
    for (size_t i = 0; i < points.size(); ++i) {
        const auto& pt = points[i];
        if (!pt.error.empty()) {
            ScanRecord rec;
            rec.index = static_cast<int>(i);
            rec.values["uf"] = pt.uf;
            rec.error = pt.error;
            out.records.push_back(std::move(rec));
            continue;
        }
        auto sols = pt.solutions;
        std::sort(sols.begin(), sols.end(),
                  [](const SemiclassicalSolution& a,
                     const SemiclassicalSolution& b) {
                      if (a.branch != b.branch)
                          return branch_rank(a.branch) < branch_rank(b.branch);
                      return std::norm(a.alpha1) < std::norm(b.alpha1);
                  });
        for (const auto& s : sols) {
            ScanRecord rec;
            rec.index = static_cast<int>(i);
            rec.values["uf"] = pt.uf;
            rec.branch = branch_name(s.branch);
            rec.values["re_alpha1"] = s.alpha1.real();
            rec.values["im_alpha1"] = s.alpha1.imag();
            rec.values["re_alpha2"] = s.alpha2.real();
            rec.values["im_alpha2"] = s.alpha2.imag();
            rec.values["order_param_rescaled"] = s.order_param_rescaled();
            rec.values["stable"] = s.stable ? 1.0 : 0.0;
            rec.values["max_re_lambda"] = s.max_re_lambda;
            rec.values["residual_norm"] = s.residual_norm;
            out.records.push_back(std::move(rec));
        }
    }
}

ScanRecord gaussian_point(const ScanConfig& cfg, int index, double uf) {
    ScanRecord rec;
    rec.index = index;
    rec.values["uf"] = uf;
    try {
        const DimerParams p =
            DimerParams::at_uf(cfg.J, cfg.delta, cfg.gamma, cfg.U, uf);
        const auto sols = all_solutions(p);
        std::string reason;
        const auto* s = pick_solution(sols, cfg.branch, &reason);
        if (!s) {
            rec.error = reason;
            return rec;
        }
        rec.branch = branch_name(s->branch);
        const MomentSet m = solve_moments(*s);
        const CovarianceMatrix c = covariance_from_moments(m);
        const double V = variance_order_parameter(m);
        const auto nu = symplectic_eigenvalues(c);
        rec.values["V"] = V;
        rec.values["inv_V"] = 1.0 / V;
        rec.values["E_N"] = log_negativity_gaussian(c);
        rec.values["S"] = von_neumann_entropy_gaussian(c);
        rec.values["nu_tilde_minus"] = ptranspose_symplectic_min(c);
        rec.values["nu_minus"] = nu[0];
        rec.values["nu_plus"] = nu[1];
    } catch (const Error& e) {
        rec.error = e.what();
    }
    return rec;
}

ScanRecord fock_point(const ScanConfig& cfg, int index, double uf) {
    ScanRecord rec;
    rec.index = index;
    rec.values["uf"] = uf;
    rec.values["U"] = cfg.U;
    rec.values["cutoff"] = cfg.cutoff;
    try {
        const DimerParams p =
            DimerParams::at_uf(cfg.J, cfg.delta, cfg.gamma, cfg.U, uf);
        const auto sols = all_solutions(p);
        std::string reason;
        const auto* s = pick_solution(sols, cfg.branch, &reason);
        if (!s) {
            rec.error = reason;
            return rec;
        }
        rec.branch = branch_name(s->branch);
        FockConfig fc;
        fc.cutoff = cfg.cutoff;
        fc.alpha1 = s->alpha1;
        fc.alpha2 = s->alpha2;
        const SpMat H = displaced_hamiltonian(p, fc);
        const SpMat L = build_liouvillian(H, fc, p.gamma);
        const DensityMatrix dm = steady_state(L, fc, cfg.tol_kernel);
        const FockObservables obs = observables(dm);
        rec.values["re_order_total"] = obs.order_param_total.real();
        rec.values["im_order_total"] = obs.order_param_total.imag();
        rec.values["abs_order_total"] = std::abs(obs.order_param_total);
        rec.values["V"] = obs.V;
        rec.values["E_N"] = negativity_exact(dm).E_N;
        rec.values["S"] = entropy_exact(dm);
        rec.values["residual"] = dm.residual;
        rec.values["min_eig"] = dm.min_eigenvalue;
        rec.values["trace_correction"] = dm.trace_correction;
    } catch (const Error& e) {
        rec.error = e.what();
    }
    return rec;
}

}  // namespace

ScanResult run_scan(const ScanConfig& config) {
    config.validate();
    ScanResult out;
    out.config = config;
    out.columns = numeric_columns(config.method);
    const auto grid = config.grid();

    if (config.method == Method::semiclassical) {
        // continuation along the grid is inherently sequential
        scan_semiclassical(config, out);
        return out;
    }

    std::vector<ScanRecord> records(grid.size());
    const auto worker_fn = [&](std::atomic<size_t>& cursor) {
        for (;;) {
            const size_t i = cursor.fetch_add(1);
            if (i >= grid.size()) return;
            records[i] = config.method == Method::gaussian
                             ? gaussian_point(config, int(i), grid[i])
                             : fock_point(config, int(i), grid[i]);
        }
    };
    const int nthreads =
        std::min<int>(config.threads, static_cast<int>(grid.size()));
    if (nthreads <= 1) {
        std::atomic<size_t> cursor{0};
        worker_fn(cursor);
    } else {
        std::atomic<size_t> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] { worker_fn(cursor); });
        for (auto& th : pool) th.join();
    }
    out.records = std::move(records);
    return out;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

std::string json_number(double v) {
    if (!std::isfinite(v)) return "null";
    return format_g12(v);
}

void write_metadata_csv(const ScanResult& r, std::ostream& os) {
    const auto& c = r.config;
    os << "# schema=1\n";
    os << "# method=" << method_name(c.method) << " J=" << format_g12(c.J)
       << " delta=" << format_g12(c.delta) << " gamma=" << format_g12(c.gamma)
       << " U=" << format_g12(c.U) << " uf_min=" << format_g12(c.uf_min)
       << " uf_max=" << format_g12(c.uf_max) << " steps=" << c.steps
       << " cutoff=" << c.cutoff << " tol_kernel=" << format_g12(c.tol_kernel)
       << " branch=" << policy_name(c.branch) << "\n";
}

}  // namespace

void write_scan(const ScanResult& r, std::ostream& os) {
    const bool has_branch = true;
    if (r.config.format == "csv") {
        write_metadata_csv(r, os);
        os << "index,uf";
        if (has_branch) os << ",branch";
        for (const auto& col : r.columns)
            if (col != "uf") os << "," << col;
        os << ",error\n";
        for (const auto& rec : r.records) {
            os << rec.index << "," << format_g12(rec.values.at("uf"));
            if (has_branch) os << "," << rec.branch;
            for (const auto& col : r.columns) {
                if (col == "uf") continue;
                os << ",";
                const auto it = rec.values.find(col);
                if (it != rec.values.end()) os << format_g12(it->second);
            }
            os << "," << rec.error << "\n";
        }
    } else {
        const auto& c = r.config;
        os << "{\"schema\":1,\"method\":\"" << method_name(c.method)
           << "\",\"J\":" << json_number(c.J)
           << ",\"delta\":" << json_number(c.delta)
           << ",\"gamma\":" << json_number(c.gamma)
           << ",\"U\":" << json_number(c.U)
           << ",\"uf_min\":" << json_number(c.uf_min)
           << ",\"uf_max\":" << json_number(c.uf_max)
           << ",\"steps\":" << c.steps << ",\"cutoff\":" << c.cutoff
           << ",\"tol_kernel\":" << json_number(c.tol_kernel)
           << ",\"branch\":\"" << policy_name(c.branch) << "\"}\n";
        for (const auto& rec : r.records) {
            os << "{\"index\":" << rec.index
               << ",\"uf\":" << json_number(rec.values.at("uf"));
            if (!rec.branch.empty())
                os << ",\"branch\":\"" << json_escape(rec.branch) << "\"";
            for (const auto& col : r.columns) {
                if (col == "uf") continue;
                const auto it = rec.values.find(col);
                if (it != rec.values.end())
                    os << ",\"" << col << "\":" << json_number(it->second);
            }
            if (!rec.error.empty())
                os << ",\"error\":\"" << json_escape(rec.error) << "\"";
            os << "}\n";
        }
    }
}

namespace {

struct ParsedScan {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    // column -> per-row string values; error is the final column
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end())
            throw InvalidArgument("scan file lacks column " + name);
        return static_cast<int>(it - columns.begin());
    }
    double num(const std::vector<std::string>& row, int c) const {
        return std::stod(row[c]);
    }
};

ParsedScan parse_scan_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open scan file " + path);
    ParsedScan ps;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string tok;
            while (ls >> tok) {
                const auto eq = tok.find('=');
                if (eq != std::string::npos)
                    ps.meta[tok.substr(0, eq)] = tok.substr(eq + 1);
            }
            continue;
        }
        std::vector<std::string> fields;
        size_t pos = 0;
        const size_t ncols = header_seen ? ps.columns.size() : SIZE_MAX;
        while (fields.size() + 1 < ncols) {
            const size_t comma = line.find(',', pos);
            if (comma == std::string::npos) break;
            fields.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        fields.push_back(line.substr(pos));  // remainder (error may hold ',')
        if (!header_seen) {
            ps.columns = fields;
            header_seen = true;
        } else {
            while (fields.size() < ps.columns.size()) fields.emplace_back();
            ps.rows.push_back(std::move(fields));
        }
    }
    if (!header_seen) throw InvalidArgument("scan file has no header: " + path);
    if (ps.meta["schema"] != "1")
        throw InvalidArgument("unsupported scan schema in " + path);
    return ps;
}

}  // namespace

FitReport run_fit(const std::string& scan_path, const std::string& observable,
                  const std::string& side) {
    if (observable != "order" && observable != "variance")
        throw InvalidArgument("run_fit: observable must be order|variance");
    if (side != "lower" && side != "upper")
        throw InvalidArgument("run_fit: side must be lower|upper");
    const ParsedScan ps = parse_scan_csv(scan_path);
    const std::string method = ps.meta.count("method") ? ps.meta.at("method")
                                                       : "";
    if (observable == "order" && method != "semiclassical")
        throw InvalidArgument("run_fit: order fit needs a semiclassical scan");
    if (observable == "variance" && method != "gaussian")
        throw InvalidArgument("run_fit: variance fit needs a gaussian scan");

    const int c_uf = ps.col("uf");
    const int c_branch = ps.col("branch");
    const int c_err = ps.col("error");
    const int c_y = ps.col(observable == "order" ? "order_param_rescaled"
                                                 : "V");
    const bool data_above_threshold =
        (observable == "order") == (side == "lower");

    // Locate the transition into the symmetry-broken window directly from
    // the scan rows: a grid point is "inside" when a clean broken+ row is
    // present (order fits) or when the auto/symmetric policy stopped giving
    // a clean symmetric row (variance fits).  The midpoint of the flip
    // brackets the threshold well enough to select the fit window; the
    // threshold proper is refitted below.
    std::map<double, bool> inside_by_uf;
    for (const auto& row : ps.rows) {
        const double uf = ps.num(row, c_uf);
        const bool clean = row[c_err].empty();
        bool inside;
        if (observable == "order")
            inside = clean && row[c_branch] == "broken+";
        else
            inside = !clean || row[c_branch] != "symmetric";
        auto [it, fresh] = inside_by_uf.emplace(uf, inside);
        if (!fresh) it->second = it->second || inside;
    }
    if (inside_by_uf.size() < 2)
        throw InsufficientPoints("run_fit: scan has fewer than 2 grid points");
    std::vector<std::pair<double, double>> flips;  // (uf_before, uf_after)
    for (auto it = std::next(inside_by_uf.begin()); it != inside_by_uf.end();
         ++it) {
        const auto prev = std::prev(it);
        if (prev->second != it->second)
            flips.emplace_back(prev->first, it->first);
    }
    double uf_c;
    if (!flips.empty()) {
        const auto& f = side == "lower" ? flips.front() : flips.back();
        uf_c = 0.5 * (f.first + f.second);
    } else {
        // No flip in range (e.g. a one-sided synthetic file): threshold sits
        // just beyond the appropriate end of the grid.
        const double lo = inside_by_uf.begin()->first;
        const double hi = inside_by_uf.rbegin()->first;
        const double spacing = (hi - lo) / double(inside_by_uf.size() - 1);
        uf_c = data_above_threshold ? lo - 0.5 * spacing : hi + 0.5 * spacing;
    }

    // Fit-window selection: asymptotics hold for 1e-4 < |uf - uf_c| < 1e-1,
    // on the side where the observable follows the power law.
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : ps.rows) {
        if (!row[c_err].empty()) continue;
        const std::string& br = row[c_branch];
        if (observable == "order") {
            if (br != "broken+") continue;
        } else {
            if (br != "symmetric") continue;
        }
        const double uf = ps.num(row, c_uf);
        const double dist = data_above_threshold ? uf - uf_c : uf_c - uf;
        if (dist <= 1e-4 || dist >= 1e-1) continue;
        const double y = ps.num(row, c_y);
        if (!(y > 0.0)) continue;
        pts.emplace_back(uf, y);
    }
    if (pts.size() < 6)
        throw InsufficientPoints(
            "run_fit: fewer than 6 usable points in the fit window; "
            "run a denser scan near the threshold");

    FitReport rep;
    rep.observable = observable;
    rep.side = side;
    rep.threshold_guess = uf_c;
    rep.fit = fit_exponent(pts, uf_c);
    auto mm = std::minmax_element(
        pts.begin(), pts.end(),
        [](const auto& a, const auto& b) { return a.first < b.first; });
    rep.window_lo = mm.first->first;
    rep.window_hi = mm.second->first;
    rep.n_used = static_cast<int>(pts.size());
    return rep;
}

std::string format_fit_report(const FitReport& r) {
    std::ostringstream os;
    os << "power-law fit report\n"
       << "  observable      : " << r.observable << "\n"
       << "  side            : " << r.side << "\n"
       << "  threshold guess : " << format_g12(r.threshold_guess)
       << " (from scan transitions)\n"
       << "  fitted A_c      : " << format_g12(r.fit.A_c) << "\n"
       << "  fitted exponent : " << format_g12(r.fit.exponent) << "\n"
       << "  amplitude       : " << format_g12(r.fit.amplitude) << "\n"
       << "  rms (log space) : " << format_g12(r.fit.rms) << "\n"
       << "  points used     : " << r.n_used << " in uf ["
       << format_g12(r.window_lo) << ", " << format_g12(r.window_hi) << "]\n";
    return os.str();
}

std::string run_point(const DimerParams& p, Method method, int cutoff,
                      double tol_kernel) {
    p.validate();
    std::ostringstream os;
    os << "point report: method=" << method_name(method)
       << " J=" << format_g12(p.J) << " delta=" << format_g12(p.delta)
       << " gamma=" << format_g12(p.gamma) << " U=" << format_g12(p.U)
       << " F=" << format_g12(p.F) << " uf=" << format_g12(rescale(p).uf)
       << "\n";
    const auto sols = all_solutions(p);
    os << "semiclassical solutions: " << sols.size() << "\n";
    for (const auto& s : sols) {
        os << "  [" << branch_name(s.branch) << "] alpha1=("
           << format_g12(s.alpha1.real()) << "," << format_g12(s.alpha1.imag())
           << ") alpha2=(" << format_g12(s.alpha2.real()) << ","
           << format_g12(s.alpha2.imag())
           << ") |O|sqrt(U/gamma)=" << format_g12(s.order_param_rescaled())
           << " stable=" << (s.stable ? 1 : 0)
           << " max_re_lambda=" << format_g12(s.max_re_lambda)
           << " residual=" << format_g12(s.residual_norm) << "\n";
        if (method == Method::semiclassical) {
            os << "    spectrum:";
            for (const auto& l : s.spectrum)
                os << " (" << format_g12(l.real()) << ","
                   << format_g12(l.imag()) << ")";
            os << "\n";
        }
    }
    if (method == Method::semiclassical) return os.str();

    std::string reason;
    const auto* s = pick_solution(sols, BranchPolicy::automatic, &reason);
    if (!s) throw NoConvergence("run_point: " + reason);
    os << "tier branch: " << branch_name(s->branch) << "\n";

    if (method == Method::gaussian) {
        const MomentSet m = solve_moments(*s);
        const CovarianceMatrix c = covariance_from_moments(m);
        const auto nu = symplectic_eigenvalues(c);
        os << "  n1=" << format_g12(m.n1) << " n2=" << format_g12(m.n2)
           << " Re(t)=" << format_g12(m.t.real()) << "\n";
        os << "  V=" << format_g12(variance_order_parameter(m))
           << " E_N=" << format_g12(log_negativity_gaussian(c))
           << " S=" << format_g12(von_neumann_entropy_gaussian(c)) << "\n";
        os << "  nu_tilde_minus=" << format_g12(ptranspose_symplectic_min(c))
           << " nu=(" << format_g12(nu[0]) << "," << format_g12(nu[1])
           << ")\n";
        return os.str();
    }

    const std::vector<int> cuts =
        cutoff > 2 ? std::vector<int>{cutoff - 2, cutoff}
                   : std::vector<int>{cutoff};
    const auto rows = cutoff_convergence(p, {s->alpha1, s->alpha2}, cuts,
                                         1e-2, tol_kernel);
    const auto& last = rows.back();
    os << "  cutoff=" << last.cutoff << " V=" << format_g12(last.V)
       << " E_N=" << format_g12(last.E_N) << " S=" << format_g12(last.S)
       << "\n";
    os << "  order_total=(" << format_g12(last.order_param_total.real())
       << "," << format_g12(last.order_param_total.imag())
       << ") residual=" << format_g12(last.residual) << "\n";
    os << "  cutoff_converged=" << (last.converged ? 1 : 0)
       << " rel_diff_vs_prev=" << format_g12(last.rel_diff) << "\n";
    return os.str();
}

}  // namespace dimer

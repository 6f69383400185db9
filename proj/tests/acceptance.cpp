// Acceptance harness: one pass/fail line per project criterion.
// Exit status equals the number of failed criteria.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dimer/scan.hpp"

using namespace dimer;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr double kUfLowerExact = 2.2638462845343543;   // sqrt(41/8)
constexpr double kUfUpperExact = 3.1365527196211707;   // sqrt(2125/216)

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(double v) { return format_g12(v); }

SemiclassicalSolution pick_branch_at(const DimerParams& p, Branch want) {
    for (const auto& s : all_solutions(p))
        if (s.branch == want) return s;
    throw NoConvergence("acceptance: branch not found");
}

struct GaussianPoint {
    double V, EN, S;
};

GaussianPoint gaussian_point_at(double uf, Branch want, double U = 1.0) {
    const DimerParams p = DimerParams::at_uf(2.5, -1.5, 1.0, U, uf);
    const auto sol = pick_branch_at(p, want);
    const MomentSet m = solve_moments(sol);
    const CovarianceMatrix c = covariance_from_moments(m);
    return {variance_order_parameter(m), log_negativity_gaussian(c),
            von_neumann_entropy_gaussian(c)};
}

Branch outer_branch(double uf) {
    return (uf > kUfLowerExact && uf < kUfUpperExact) ? Branch::broken_plus
                                                      : Branch::symmetric;
}

struct FockPoint {
    double V, EN, S, abs_order, residual;
};

FockPoint fock_point_at(const DimerParams& p, const SemiclassicalSolution& s,
                        int cutoff) {
    FockConfig fc;
    fc.cutoff = cutoff;
    fc.alpha1 = s.alpha1;
    fc.alpha2 = s.alpha2;
    const SpMat H = displaced_hamiltonian(p, fc);
    const SpMat L = build_liouvillian(H, fc, p.gamma);
    const DensityMatrix dm = steady_state(L, fc);
    const FockObservables obs = observables(dm);
    return {obs.V, negativity_exact(dm).E_N, entropy_exact(dm),
            std::abs(obs.order_param_total), dm.residual};
}

// ---------------------------------------------------------------- criterion 1
// Note: at J = 2.5, delta = -1.5 the two thresholds sit at uf = 2.2638 and
// 3.1366, so the scan range is [0.2, 4.0] to actually contain them.
Outcome criterion_1() {
    const auto t0 = clock_type::now();
    DimerParams base;
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i) grid.push_back(0.2 + (4.0 - 0.2) * i / 199.0);
    const auto points = scan_branches(base, grid);

    int crossings = 0;
    bool prev_stable = true, have_prev = false;
    double bracket_lo = 0;
    std::vector<std::pair<double, double>> brackets;
    for (const auto& pt : points) {
        if (!pt.error.empty())
            return {false, "scan error at uf=" + fmt(pt.uf) + ": " + pt.error};
        bool sym_stable = false;
        for (const auto& s : pt.solutions)
            if (s.branch == Branch::symmetric && s.stable) sym_stable = true;
        if (have_prev && sym_stable != prev_stable) {
            ++crossings;
            brackets.emplace_back(bracket_lo, pt.uf);
        }
        bracket_lo = pt.uf;
        prev_stable = sym_stable;
        have_prev = true;
    }
    if (crossings != 2)
        return {false, "expected 2 stability crossings, found " +
                           std::to_string(crossings)};

    const double uf_lo = bifurcation_bisect(base, brackets[0].first,
                                            brackets[0].second, 1e-10);
    const double uf_hi = bifurcation_bisect(base, brackets[1].first,
                                            brackets[1].second, 1e-10);
    if (std::abs(uf_lo - kUfLowerExact) > 1e-8 ||
        std::abs(uf_hi - kUfUpperExact) > 1e-8)
        return {false, "bisected thresholds " + fmt(uf_lo) + ", " + fmt(uf_hi) +
                           " disagree with the closed forms"};

    for (const auto& pt : points) {
        double order = 0.0;
        for (const auto& s : pt.solutions)
            if (s.branch != Branch::symmetric)
                order = std::max(order, s.order_param_rescaled());
        const bool inside = pt.uf > uf_lo && pt.uf < uf_hi;
        if (!inside && order > 1e-10)
            return {false, "nonzero order parameter outside the window at uf=" +
                               fmt(pt.uf)};
        if (inside && !(order > 1e-10))
            return {false,
                    "vanishing order parameter inside the window at uf=" +
                        fmt(pt.uf)};
    }
    const double dt = seconds_since(t0);
    if (dt > 5.0) return {false, "runtime " + fmt(dt) + " s exceeds 5 s"};
    return {true, "uf_c = " + fmt(uf_lo) + ", " + fmt(uf_hi) + "; " + fmt(dt) +
                      " s"};
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion_2() {
    const auto t0 = clock_type::now();
    std::ostringstream detail;
    for (const char* side : {"lower", "upper"}) {
        const double uf_c =
            side == std::string("lower") ? kUfLowerExact : kUfUpperExact;
        ScanConfig cfg;
        cfg.method = Method::semiclassical;
        // Dense grid hugging the threshold: the power law is asymptotic, so
        // the default fit window should be populated near its small-distance
        // end (the spacing keeps every grid point off the exact threshold).
        const bool lower = side == std::string("lower");
        cfg.uf_min = lower ? uf_c - 0.0003 : uf_c - 0.0101;
        cfg.uf_max = lower ? uf_c + 0.0101 : uf_c + 0.0003;
        cfg.steps = 53;  // spacing 2e-4
        const ScanResult res = run_scan(cfg);
        const std::string path =
            std::string("/tmp/dimer_acceptance_order_") + side + ".csv";
        {
            std::ofstream os(path);
            write_scan(res, os);
        }
        const FitReport rep = run_fit(path, "order", side);
        std::remove(path.c_str());
        if (std::abs(rep.fit.exponent - 0.5) > 0.05)
            return {false, std::string(side) + " exponent " +
                               fmt(rep.fit.exponent) + " outside 0.5 +- 0.05"};
        detail << side << "=" << fmt(rep.fit.exponent) << " ";
    }
    const double dt = seconds_since(t0);
    if (dt > 5.0) return {false, "runtime " + fmt(dt) + " s exceeds 5 s"};
    return {true, detail.str() + fmt(dt) + " s"};
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion_3() {
    const auto t0 = clock_type::now();
    std::ostringstream detail;
    for (const char* side : {"lower", "upper"}) {
        const bool lower = side == std::string("lower");
        const double uf_c = lower ? kUfLowerExact : kUfUpperExact;
        ScanConfig cfg;
        cfg.method = Method::gaussian;
        cfg.branch = BranchPolicy::automatic;
        // Dense grid hugging the threshold from the symmetric side, with a
        // short overlap past it so the branch change pins the transition;
        // the asymptotic 1/distance divergence dominates only here (farther
        // out, corrections to scaling bend the fitted slope).
        cfg.uf_min = lower ? uf_c - 0.0101 : uf_c - 0.0003;
        cfg.uf_max = lower ? uf_c + 0.0003 : uf_c + 0.0101;
        cfg.steps = 53;  // spacing 2e-4
        const ScanResult res = run_scan(cfg);
        const std::string path =
            std::string("/tmp/dimer_acceptance_var_") + side + ".csv";
        {
            std::ofstream os(path);
            write_scan(res, os);
        }
        const FitReport rep = run_fit(path, "variance", side);
        std::remove(path.c_str());
        if (std::abs(rep.fit.exponent - (-1.0)) > 0.1)
            return {false, std::string(side) + " exponent " +
                               fmt(rep.fit.exponent) + " outside -1 +- 0.1"};

        // 1/V -> 0 extrapolation from the two symmetric points nearest the
        // threshold must land on the bisected uf_c to 1e-3
        std::vector<std::pair<double, double>> sym;  // (uf, 1/V)
        for (const auto& rec : res.records)
            if (rec.error.empty() && rec.branch == "symmetric")
                sym.emplace_back(rec.values.at("uf"), rec.values.at("inv_V"));
        std::sort(sym.begin(), sym.end());
        if (sym.size() < 2) return {false, "too few symmetric points"};
        std::pair<double, double> p1, p2;  // nearest and next-nearest
        if (lower) {
            p1 = sym[sym.size() - 1];
            p2 = sym[sym.size() - 2];
        } else {
            p1 = sym[0];
            p2 = sym[1];
        }
        const double slope = (p2.second - p1.second) / (p2.first - p1.first);
        const double crossing = p1.first - p1.second / slope;
        if (std::abs(crossing - uf_c) > 1e-3)
            return {false, std::string(side) + " 1/V crossing " +
                               fmt(crossing) + " vs uf_c " + fmt(uf_c)};
        detail << side << ": e=" << fmt(rep.fit.exponent)
               << " x0-err=" << fmt(std::abs(crossing - uf_c)) << " ";
    }
    const double dt = seconds_since(t0);
    if (dt > 5.0) return {false, "runtime " + fmt(dt) + " s exceeds 5 s"};
    return {true, detail.str() + fmt(dt) + " s"};
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion_4() {
    const auto t0 = clock_type::now();
    std::ostringstream detail;
    double lower_peak = 0.0;
    for (const double uf_c : {kUfLowerExact, kUfUpperExact}) {
        // E_N rises monotonically into the threshold from both sides: a cusp
        const double dists[] = {5e-2, 1e-2, 1e-3, 1e-4};
        double last = -1.0, peak = 0.0;
        for (int sgn : {-1, +1}) {
            last = -1.0;
            for (const double d : dists) {
                const double uf = uf_c + sgn * d;
                const GaussianPoint g = gaussian_point_at(uf, outer_branch(uf));
                if (g.EN <= last)
                    return {false, "E_N not increasing toward uf_c=" +
                                       fmt(uf_c) + " at distance " + fmt(d)};
                last = g.EN;
                peak = std::max(peak, g.EN);
            }
        }
        if (uf_c == kUfLowerExact) lower_peak = peak;
        detail << "peak(" << fmt(uf_c) << ")~" << fmt(peak) << " ";
    }
    if (lower_peak < 0.25 || lower_peak > 0.45)
        return {false,
                "lower-threshold peak " + fmt(lower_peak) + " not in [0.25, 0.45]"};
    const double dt = seconds_since(t0);
    if (dt > 5.0) return {false, "runtime " + fmt(dt) + " s exceeds 5 s"};
    return {true, detail.str() + fmt(dt) + " s"};
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion_5() {
    const auto t0 = clock_type::now();
    double peaks[2];
    int k = 0;
    for (const double uf_c : {kUfLowerExact, kUfUpperExact}) {
        const double s_near_lo =
            gaussian_point_at(uf_c - 1e-4, outer_branch(uf_c - 1e-4)).S;
        const double s_near_hi =
            gaussian_point_at(uf_c + 1e-4, outer_branch(uf_c + 1e-4)).S;
        const double s_off_lo =
            gaussian_point_at(uf_c - 1e-1, outer_branch(uf_c - 1e-1)).S;
        const double s_off_hi =
            gaussian_point_at(uf_c + 1e-1, outer_branch(uf_c + 1e-1)).S;
        const double near = std::max(s_near_lo, s_near_hi);
        if (!(near > 2.0) || !std::isfinite(near))
            return {false, "no finite peak at uf_c=" + fmt(uf_c)};
        // narrow: falls well off within a distance of 0.1
        if (!(near > 2.0 * std::max(s_off_lo, s_off_hi)))
            return {false, "peak at uf_c=" + fmt(uf_c) + " is not narrow"};
        peaks[k++] = near;
    }
    // strictly positive between the thresholds
    const double s_mid = gaussian_point_at(2.7, Branch::broken_plus).S;
    if (!(s_mid > 0.0))
        return {false, "S not positive between the thresholds"};
    // small far outside
    const double s_far_lo = gaussian_point_at(0.4, Branch::symmetric).S;
    const double s_far_hi = gaussian_point_at(4.0, Branch::symmetric).S;
    if (!(s_far_lo < 0.05))
        return {false, "S(0.4) = " + fmt(s_far_lo) + " not small"};
    if (!(s_far_hi < 0.25 * std::min(peaks[0], peaks[1])))
        return {false, "S(4.0) = " + fmt(s_far_hi) + " not well below peaks"};
    return {true, "peaks " + fmt(peaks[0]) + ", " + fmt(peaks[1]) +
                      "; S(2.7)=" + fmt(s_mid) + "; " +
                      fmt(seconds_since(t0)) + " s"};
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion_6() {
    const auto t0 = clock_type::now();
    const double uf = 1.8;  // safely outside the critical region
    const GaussianPoint g = gaussian_point_at(uf, Branch::symmetric);
    const double Us[] = {1.0, 0.5, 0.25};
    double V[3], EN[3], S[3];
    for (int i = 0; i < 3; ++i) {
        const DimerParams p = DimerParams::at_uf(2.5, -1.5, 1.0, Us[i], uf);
        const auto sol = pick_branch_at(p, Branch::symmetric);
        const auto rows =
            cutoff_convergence(p, {sol.alpha1, sol.alpha2}, {6, 8, 10}, 1e-2);
        if (!rows.back().converged)
            return {false, "cutoff ladder not converged at U=" + fmt(Us[i])};
        V[i] = rows.back().V;
        EN[i] = rows.back().E_N;
        S[i] = rows.back().S;
    }
    // exact values approach the Gaussian limit monotonically from below as
    // U decreases (larger deviation at larger U: the top-to-bottom ordering)
    const auto ordered = [](double a, double b, double c, double lim) {
        return a < b && b < c && c < lim;
    };
    if (!ordered(V[0], V[1], V[2], g.V))
        return {false, "V ordering violated"};
    if (!ordered(EN[0], EN[1], EN[2], g.EN))
        return {false, "E_N ordering violated"};
    if (!ordered(S[0], S[1], S[2], g.S))
        return {false, "S ordering violated"};
    const double dt = seconds_since(t0);
    if (dt > 900.0) return {false, "runtime " + fmt(dt) + " s exceeds 15 min"};
    std::ostringstream d;
    d << "V: " << fmt(V[0]) << " < " << fmt(V[1]) << " < " << fmt(V[2]) << " < "
      << fmt(g.V) << " (gaussian); " << fmt(dt) << " s";
    return {true, d.str()};
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion_7() {
    const auto t0 = clock_type::now();
    // gaussian tier, U = 1
    const GaussianPoint gp = gaussian_point_at(2.7, Branch::broken_plus);
    const GaussianPoint gm = gaussian_point_at(2.7, Branch::broken_minus);
    if (std::abs(gp.V - gm.V) > 1e-6 || std::abs(gp.EN - gm.EN) > 1e-6 ||
        std::abs(gp.S - gm.S) > 1e-6)
        return {false, "gaussian-tier branch observables disagree"};
    // exact tier, U = 0.5, cutoff 8
    const DimerParams p = DimerParams::at_uf(2.5, -1.5, 1.0, 0.5, 2.7);
    const FockPoint fp =
        fock_point_at(p, pick_branch_at(p, Branch::broken_plus), 8);
    const FockPoint fm =
        fock_point_at(p, pick_branch_at(p, Branch::broken_minus), 8);
    const double worst =
        std::max({std::abs(fp.V - fm.V), std::abs(fp.EN - fm.EN),
                  std::abs(fp.S - fm.S), std::abs(fp.abs_order - fm.abs_order)});
    if (worst > 1e-6)
        return {false, "exact-tier branch observables disagree by " + fmt(worst)};
    return {true, "max exact-tier mismatch " + fmt(worst) + "; " +
                      fmt(seconds_since(t0)) + " s"};
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion_8a() {
    DimerParams p;
    p.U = 0.0;
    p.F = 1.7;
    const cplx expect = -p.F / cplx(p.J - p.delta, -p.gamma / 2.0);
    const auto sols = all_solutions(p);
    if (sols.size() != 1) return {false, "expected a single linear solution"};
    const double err = std::max(std::abs(sols[0].alpha1 - expect),
                                std::abs(sols[0].alpha2 + expect));
    if (err > 1e-12) return {false, "closed-form mismatch " + fmt(err)};
    return {true, "|alpha - closed form| = " + fmt(err)};
}

Outcome criterion_8b() {
    double worst = 0.0;
    for (double uf : {0.6, 1.8, 2.5, 2.9, 3.4}) {
        const DimerParams p = DimerParams::at_uf(2.5, -1.5, 1.0, 1.0, uf);
        for (const auto& s : all_solutions(p)) {
            const auto r = residual(s.alpha1, s.alpha2, p);
            worst = std::max(worst, std::sqrt(std::norm(r.first) +
                                              std::norm(r.second)));
        }
    }
    if (worst > 1e-10)
        return {false, "linear-term residual " + fmt(worst) + " > 1e-10"};
    return {true, "max residual " + fmt(worst)};
}

Outcome criterion_8c() {
    const DimerParams p = DimerParams::at_uf(2.5, -1.5, 1.0, 1.0, 0.8);
    const auto s = pick_branch_at(p, Branch::symmetric);
    FockConfig fc;
    fc.cutoff = 3;
    fc.alpha1 = s.alpha1;
    fc.alpha2 = s.alpha2;
    const SpMat H = displaced_hamiltonian(p, fc);
    const SpMat L = build_liouvillian(H, fc, p.gamma);
    const DensityMatrix dm = steady_state(L, fc);
    const Eigensystem es = eig_general_full(Mat(L));
    int k = 0;
    for (int i = 1; i < es.values.size(); ++i)
        if (std::abs(es.values(i)) < std::abs(es.values(k))) k = i;
    const int dim = fc.dim();
    Mat rho_bf(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) rho_bf(i, j) = es.vectors.col(k)(j * dim + i);
    rho_bf /= rho_bf.trace();
    rho_bf = 0.5 * (rho_bf + Mat(rho_bf.adjoint()));
    const double err = (rho_bf - dm.rho).cwiseAbs().maxCoeff();
    if (err > 1e-10) return {false, "brute-force mismatch " + fmt(err)};
    return {true, "max elementwise difference " + fmt(err)};
}

Outcome criterion_8d() {
    // Bell-like pair state
    FockConfig fc;
    fc.cutoff = 1;
    DensityMatrix dm;
    dm.config = fc;
    Vec psi = Vec::Zero(4);
    psi(1) = psi(2) = 1.0 / std::sqrt(2.0);
    dm.rho = psi * psi.adjoint();
    const double en_bell = negativity_exact(dm).E_N;
    if (std::abs(en_bell - std::log(2.0)) > 1e-10)
        return {false, "Bell E_N " + fmt(en_bell)};

    // two-mode squeezed state, r = 0.5: Gaussian tier vs Fock construction
    const double r = 0.5, lam = std::tanh(r);
    CovarianceMatrix c;
    const double ch = std::cosh(2 * r), sh = std::sinh(2 * r);
    c.sigma << ch, 0, sh, 0, 0, ch, 0, -sh, sh, 0, ch, 0, 0, -sh, 0, ch;
    c.sigma *= 0.5;
    const double en_gauss = log_negativity_gaussian(c);

    FockConfig fc2;
    fc2.cutoff = 22;
    DensityMatrix dm2;
    dm2.config = fc2;
    const int d = fc2.site_dim();
    Vec psi2 = Vec::Zero(fc2.dim());
    for (int n = 0; n < d; ++n)
        psi2(n * d + n) = std::pow(lam, n) / std::cosh(r);
    Mat rho = psi2 * psi2.adjoint();
    rho /= rho.trace();
    dm2.rho = rho;
    const double en_fock = negativity_exact(dm2).E_N;
    if (std::abs(en_gauss - 1.0) > 1e-12)
        return {false, "Gaussian TMSV E_N " + fmt(en_gauss)};
    if (std::abs(en_gauss - en_fock) > 1e-6)
        return {false, "Gaussian vs Fock TMSV gap " + fmt(en_gauss - en_fock)};
    return {true, "Bell ln2 ok; TMSV gap " + fmt(en_gauss - en_fock)};
}

Outcome criterion_8e() {
    const double uf = 2.7;
    const DimerParams pa = DimerParams::at_uf(2.5, -1.5, 1.0, 1.0, uf);
    const DimerParams pb = DimerParams::at_uf(2.5, -1.5, 1.0, 0.25, uf);
    double worst = 0.0;
    for (Branch b :
         {Branch::symmetric, Branch::broken_plus, Branch::broken_minus}) {
        const auto sa = pick_branch_at(pa, b);
        const auto sb = pick_branch_at(pb, b);
        worst = std::max(worst, std::abs(sa.order_param_rescaled() -
                                         sb.order_param_rescaled()));
        if (b != Branch::symmetric) {
            const MomentSet ma = solve_moments(sa);
            const MomentSet mb = solve_moments(sb);
            worst = std::max(
                {worst, std::abs(ma.n1 - mb.n1), std::abs(ma.n2 - mb.n2),
                 std::abs(ma.s1 - mb.s1), std::abs(ma.s2 - mb.s2),
                 std::abs(ma.t - mb.t), std::abs(ma.u - mb.u)});
        }
    }
    if (worst > 1e-10) return {false, "rescaling breaks at " + fmt(worst)};
    return {true, "max drift " + fmt(worst)};
}

Outcome criterion_8f() {
    double worst_tr = 0.0, worst_res = 0.0;
    for (double uf : {0.8, 1.8, 2.7}) {
        const DimerParams p = DimerParams::at_uf(2.5, -1.5, 1.0, 1.0, uf);
        const Branch b = outer_branch(uf);
        const auto s = pick_branch_at(p, b);
        FockConfig fc;
        fc.cutoff = 6;
        fc.alpha1 = s.alpha1;
        fc.alpha2 = s.alpha2;
        const SpMat H = displaced_hamiltonian(p, fc);
        const SpMat L = build_liouvillian(H, fc, p.gamma);
        const double scale = sparse_scale(L);
        const int dim = fc.dim();
        Vec tr = Vec::Zero(dim * dim);
        for (int i = 0; i < dim; ++i) tr(i * dim + i) = 1.0;
        worst_tr = std::max(worst_tr,
                            Vec(L.adjoint() * tr).cwiseAbs().maxCoeff() / scale);
        const DensityMatrix dm = steady_state(L, fc, 1e-8);
        worst_res = std::max(worst_res, dm.residual / std::max(scale, 1.0));
    }
    if (worst_tr > 1e-12)
        return {false, "trace functional not annihilated: " + fmt(worst_tr)};
    if (worst_res > 1e-8)
        return {false, "steady-state residual bound broken: " + fmt(worst_res)};
    return {true, "trace " + fmt(worst_tr) + ", residual " + fmt(worst_res)};
}

}  // namespace

int main(int argc, char** argv) {
    struct Item {
        const char* name;
        std::function<Outcome()> fn;
    };
    const std::vector<Item> items = {
        {"1 bifurcation window", criterion_1},
        {"2 order-parameter exponent 1/2", criterion_2},
        {"3 variance exponent -1", criterion_3},
        {"4 entanglement cusps", criterion_4},
        {"5 entropy peaks", criterion_5},
        {"6 finite-U convergence to gaussian", criterion_6},
        {"7 mirror-branch equivalence", criterion_7},
        {"8a linear closed form", criterion_8a},
        {"8b displaced linear-term cancellation", criterion_8b},
        {"8c dense brute-force kernel", criterion_8c},
        {"8d bell and squeezed-state negativity", criterion_8d},
        {"8e rescaling invariance", criterion_8e},
        {"8f trace annihilation and residual bounds", criterion_8f},
    };
    // Optional arguments select criteria by leading token, e.g. `acceptance 3
    // 8d` runs only those two; no arguments runs the full list.
    const std::vector<std::string> picks(argv + 1, argv + argc);
    const auto selected = [&](const char* name) {
        if (picks.empty()) return true;
        for (const auto& p : picks)
            if (std::string(name).rfind(p, 0) == 0) return true;
        return false;
    };
    int failures = 0;
    for (const auto& item : items) {
        if (!selected(item.name)) continue;
        Outcome out;
        try {
            out = item.fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %-42s %s\n", out.pass ? "PASS" : "FAIL",
                    item.name, out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    if (failures == 0)
        std::printf("all acceptance criteria satisfied\n");
    else
        std::printf("%d criteria failed\n", failures);
    return failures;
}

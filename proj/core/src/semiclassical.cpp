#include "dimer/semiclassical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace dimer {

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::symmetric: return "symmetric";
        case Branch::broken_plus: return "broken+";
        case Branch::broken_minus: return "broken-";
    }
    return "?";
}

AmplitudePair residual(cplx a1, cplx a2, const DimerParams& p) {
    const cplx base(-p.delta, -0.5 * p.gamma);
    const cplx r1 = (base + 2.0 * p.U * std::norm(a1)) * a1 - p.J * a2 + p.F;
    const cplx r2 = (base + 2.0 * p.U * std::norm(a2)) * a2 - p.J * a1 - p.F;
    return {r1, r2};
}

namespace {

double residual_norm(cplx a1, cplx a2, const DimerParams& p) {
    auto [r1, r2] = residual(a1, a2, p);
    return std::sqrt(std::norm(r1) + std::norm(r2));
}

// Newton step on the four real components.  The nonlinearity |a|^2 a is not
// complex-differentiable, so the Jacobian is assembled from the Wirtinger
// pair dr/da = -delta - i gamma/2 + 4U|a|^2, dr/da* = 2U a^2 realified.
bool newton_full(cplx& a1, cplx& a2, const DimerParams& p, int max_iter,
                 double tol) {
    for (int it = 0; it < max_iter; ++it) {
        auto [r1, r2] = residual(a1, a2, p);
        if (std::sqrt(std::norm(r1) + std::norm(r2)) < tol) return true;
        Eigen::Matrix4d Jr = Eigen::Matrix4d::Zero();
        const cplx as[2] = {a1, a2};
        for (int i = 0; i < 2; ++i) {
            const cplx dz =
                cplx(-p.delta, -0.5 * p.gamma) + 4.0 * p.U * std::norm(as[i]);
            const cplx dzb = 2.0 * p.U * as[i] * as[i];
            Jr(2 * i, 2 * i) = (dz + dzb).real();
            Jr(2 * i, 2 * i + 1) = -(dz - dzb).imag();
            Jr(2 * i + 1, 2 * i) = (dz + dzb).imag();
            Jr(2 * i + 1, 2 * i + 1) = (dz - dzb).real();
        }
        Jr(0, 2) = -p.J;
        Jr(1, 3) = -p.J;
        Jr(2, 0) = -p.J;
        Jr(3, 1) = -p.J;
        Eigen::Vector4d rv(r1.real(), r1.imag(), r2.real(), r2.imag());
        Eigen::FullPivLU<Eigen::Matrix4d> lu(Jr);
        if (!lu.isInvertible()) return false;
        Eigen::Vector4d dx = lu.solve(rv);
        a1 -= cplx(dx[0], dx[1]);
        a2 -= cplx(dx[2], dx[3]);
        if (!std::isfinite(a1.real()) || !std::isfinite(a2.real()))
            return false;
    }
    return residual_norm(a1, a2, p) < tol;
}

// Reduced Newton with a2 = -a1 substituted, keeping the symmetric branch's
// order parameter exactly zero:
//   r(a1) = (-delta - i gamma/2 + 2U|a1|^2 + J) a1 + F = 0.
bool newton_symmetric(cplx& a1, const DimerParams& p, int max_iter,
                      double tol) {
    for (int it = 0; it < max_iter; ++it) {
        const cplx base =
            cplx(-p.delta + p.J, -0.5 * p.gamma) + 2.0 * p.U * std::norm(a1);
        const cplx r = base * a1 + p.F;
        if (std::abs(r) < tol) return true;
        const cplx dz = base + 2.0 * p.U * std::norm(a1);
        const cplx dzb = 2.0 * p.U * a1 * a1;
        Eigen::Matrix2d Jr;
        Jr << (dz + dzb).real(), -(dz - dzb).imag(), (dz + dzb).imag(),
            (dz - dzb).real();
        if (std::abs(Jr.determinant()) < 1e-300) return false;
        Eigen::Vector2d dx = Jr.inverse() * Eigen::Vector2d(r.real(), r.imag());
        a1 -= cplx(dx[0], dx[1]);
        if (!std::isfinite(a1.real())) return false;
    }
    const cplx base =
        cplx(-p.delta + p.J, -0.5 * p.gamma) + 2.0 * p.U * std::norm(a1);
    return std::abs(base * a1 + p.F) < tol;
}

// Real roots (>= 0) of the occupation cubic
//   4U^2 n^3 + 4U(J - delta) n^2 + ((J - delta)^2 + gamma^2/4) n - F^2 = 0
// via the companion matrix, polished by scalar Newton.
std::vector<double> symmetric_occupations(const DimerParams& p) {
    const double c1 = (p.J - p.delta) * (p.J - p.delta) +
                      0.25 * p.gamma * p.gamma;
    const double c0 = -p.F * p.F;
    std::vector<double> roots;
    if (p.U == 0.0) {
        roots.push_back(-c0 / c1);
    } else {
        const double c3 = 4.0 * p.U * p.U;
        const double c2 = 4.0 * p.U * (p.J - p.delta);
        Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
        C(1, 0) = 1.0;
        C(2, 1) = 1.0;
        C(0, 2) = -c0 / c3;
        C(1, 2) = -c1 / c3;
        C(2, 2) = -c2 / c3;
        Eigen::EigenSolver<Eigen::Matrix3d> es(C);
        for (int i = 0; i < 3; ++i) {
            const cplx z = es.eigenvalues()[i];
            if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z)))
                continue;
            double n = std::max(z.real(), 0.0);
            for (int it = 0; it < 60; ++it) {  // Newton polish on the cubic
                const double f = ((c3 * n + c2) * n + c1) * n + c0;
                const double df = (3.0 * c3 * n + 2.0 * c2) * n + c1;
                if (df == 0.0) break;
                const double step = f / df;
                n -= step;
                if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(n))) break;
            }
            if (n >= -1e-12) roots.push_back(std::max(n, 0.0));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) {
                                return std::abs(a - b) <
                                       1e-9 * std::max(1.0, std::abs(a));
                            }),
                roots.end());
    return roots;
}

cplx symmetric_amplitude(double n, const DimerParams& p) {
    return -p.F / cplx(p.J - p.delta + 2.0 * p.U * n, -0.5 * p.gamma);
}

Branch broken_label(cplx order) {
    if (std::abs(order.real()) > 1e-12 * std::max(1.0, std::abs(order)))
        return order.real() > 0 ? Branch::broken_plus : Branch::broken_minus;
    return order.imag() > 0 ? Branch::broken_plus : Branch::broken_minus;
}

SemiclassicalSolution make_solution(cplx a1, cplx a2, Branch branch,
                                    const DimerParams& p) {
    SemiclassicalSolution s;
    s.alpha1 = a1;
    s.alpha2 = a2;
    s.branch = branch;
    s.params = p;
    s.residual_norm = residual_norm(a1, a2, p);
    const Stability st = stability(a1, a2, p);
    s.stable = st.stable;
    s.max_re_lambda = st.max_re_lambda;
    s.spectrum = st.spectrum;
    return s;
}

bool is_symmetric_pair(cplx a1, cplx a2) {
    return std::abs(a1 + a2) <
           1e-6 * (std::abs(a1) + std::abs(a2) + 1e-300);
}

}  // namespace

SemiclassicalSolution solve_steady(const DimerParams& p, AmplitudePair guess,
                                   int max_iter, double tol) {
    p.validate();
    cplx a1 = guess.first, a2 = guess.second;
    if (!newton_full(a1, a2, p, max_iter, tol)) {
        throw NoConvergence("solve_steady: Newton stalled, last residual " +
                            std::to_string(residual_norm(a1, a2, p)));
    }
    Branch branch = Branch::symmetric;
    if (is_symmetric_pair(a1, a2)) {
        // land exactly on the symmetric manifold
        cplx as = 0.5 * (a1 - a2);
        if (newton_symmetric(as, p, max_iter, tol)) {
            a1 = as;
            a2 = -as;
        }
    } else {
        branch = broken_label(a1 + a2);
    }
    return make_solution(a1, a2, branch, p);
}

AmplitudePair integrate_transient(const DimerParams& p, AmplitudePair a0,
                                  double t_end, double dt) {
    p.validate();
    if (!(dt > 0.0) || !(t_end >= 0.0))
        throw InvalidArgument("integrate_transient: bad time step");
    cplx a1 = a0.first, a2 = a0.second;
    const auto f = [&p](cplx x1, cplx x2) -> AmplitudePair {
        auto [r1, r2] = residual(x1, x2, p);
        return {cplx(0, -1) * r1, cplx(0, -1) * r2};
    };
    const long nsteps = std::lround(t_end / dt);
    for (long i = 0; i < nsteps; ++i) {
        auto [k11, k12] = f(a1, a2);
        auto [k21, k22] = f(a1 + 0.5 * dt * k11, a2 + 0.5 * dt * k12);
        auto [k31, k32] = f(a1 + 0.5 * dt * k21, a2 + 0.5 * dt * k22);
        auto [k41, k42] = f(a1 + dt * k31, a2 + dt * k32);
        a1 += dt / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41);
        a2 += dt / 6.0 * (k12 + 2.0 * k22 + 2.0 * k32 + k42);
        if (std::abs(a1) > 1e6 || std::abs(a2) > 1e6)
            throw StepOverflow("integrate_transient: trajectory diverged");
    }
    return {a1, a2};
}

namespace {

// Generator of the linearized flow on (d1, d1*, d2, d2*).
Mat linearization_matrix(cplx a1, cplx a2, const DimerParams& p) {
    const double w1 = -p.delta + 4.0 * p.U * std::norm(a1);
    const double w2 = -p.delta + 4.0 * p.U * std::norm(a2);
    const cplx i(0.0, 1.0);
    Mat G = Mat::Zero(4, 4);
    G(0, 0) = -i * w1 - 0.5 * p.gamma;
    G(0, 1) = -2.0 * i * p.U * a1 * a1;
    G(0, 2) = i * p.J;
    G(1, 0) = 2.0 * i * p.U * std::conj(a1) * std::conj(a1);
    G(1, 1) = i * w1 - 0.5 * p.gamma;
    G(1, 3) = -i * p.J;
    G(2, 0) = i * p.J;
    G(2, 2) = -i * w2 - 0.5 * p.gamma;
    G(2, 3) = -2.0 * i * p.U * a2 * a2;
    G(3, 1) = -i * p.J;
    G(3, 2) = 2.0 * i * p.U * std::conj(a2) * std::conj(a2);
    G(3, 3) = i * w2 - 0.5 * p.gamma;
    return G;
}

}  // namespace

Stability stability(cplx a1, cplx a2, const DimerParams& p) {
    const Mat G = linearization_matrix(a1, a2, p);
    Stability st;
    const Vec ev = eig_general(G);
    for (int k = 0; k < 4; ++k) st.spectrum[k] = ev[k];
    std::sort(st.spectrum.begin(), st.spectrum.end(),
              [](cplx a, cplx b) {
                  return a.real() != b.real() ? a.real() < b.real()
                                              : a.imag() < b.imag();
              });
    st.max_re_lambda = st.spectrum[3].real();
    st.stable = st.max_re_lambda < 0.0;
    return st;
}

namespace {

// Unstable eigendirection of the linearization, projected to (da1, da2).
AmplitudePair unstable_direction(const SemiclassicalSolution& s) {
    const Mat G = linearization_matrix(s.alpha1, s.alpha2, s.params);
    const Eigensystem es = eig_general_full(G);
    int kmax = 0;
    for (int k = 1; k < 4; ++k)
        if (es.values[k].real() > es.values[kmax].real()) kmax = k;
    cplx d1 = es.vectors(0, kmax), d2 = es.vectors(2, kmax);
    const double nrm = std::sqrt(std::norm(d1) + std::norm(d2));
    if (nrm > 0) {
        d1 /= nrm;
        d2 /= nrm;
    }
    return {d1, d2};
}

// Grow a symmetry-broken solution out of an unstable symmetric one.  Near
// branch birth plain Newton falls back into the symmetric saddle, so after
// the eigenvector-step attempts the trajectory is relaxed in chunks until
// the flow has carried it to the attractor.
std::optional<AmplitudePair> seed_broken(const SemiclassicalSolution& sym,
                                         const DimerParams& p) {
    const auto [d1, d2] = unstable_direction(sym);
    for (double step : {1e-3, 1e-2, 1e-1, 3e-1}) {
        cplx a1 = sym.alpha1 + step * d1;
        cplx a2 = sym.alpha2 + step * d2;
        if (newton_full(a1, a2, p, 200, 1e-12) && !is_symmetric_pair(a1, a2))
            return AmplitudePair{a1, a2};
    }
    cplx a1 = sym.alpha1 + 1e-2 * d1;
    cplx a2 = sym.alpha2 + 1e-2 * d2;
    try {
        for (int chunk = 0; chunk < 20; ++chunk) {
            std::tie(a1, a2) = integrate_transient(
                p, {a1, a2}, 50.0 / p.gamma, 0.01 / p.gamma);
            if (residual_norm(a1, a2, p) < 1e-9) break;
        }
    } catch (const StepOverflow&) {
        return std::nullopt;
    }
    if (newton_full(a1, a2, p, 200, 1e-12) && !is_symmetric_pair(a1, a2))
        return AmplitudePair{a1, a2};
    return std::nullopt;
}

}  // namespace

std::vector<SemiclassicalSolution> all_solutions(const DimerParams& p) {
    p.validate();
    std::vector<SemiclassicalSolution> out;
    for (double n : symmetric_occupations(p)) {
        cplx a1 = symmetric_amplitude(n, p);
        newton_symmetric(a1, p, 200, 1e-13);
        out.push_back(make_solution(a1, -a1, Branch::symmetric, p));
    }
    std::vector<SemiclassicalSolution> broken;
    for (const auto& sym : out) {
        if (sym.stable) continue;
        const auto seeded = seed_broken(sym, p);
        if (!seeded) continue;
        auto [b1, b2] = *seeded;
        const bool dup =
            std::any_of(broken.begin(), broken.end(), [&](const auto& s) {
                return std::abs(s.alpha1 - b1) + std::abs(s.alpha2 - b2) <
                       1e-8;
            });
        if (dup) continue;
        broken.push_back(make_solution(b1, b2, broken_label(b1 + b2), p));
        const auto [m1, m2] = z2_transform({b1, b2});
        broken.push_back(make_solution(m1, m2, broken_label(m1 + m2), p));
    }
    out.insert(out.end(), broken.begin(), broken.end());
    return out;
}

std::vector<ScanPoint> scan_branches(const DimerParams& base,
                                     const std::vector<double>& uf_grid) {
    for (size_t i = 1; i < uf_grid.size(); ++i)
        if (!(uf_grid[i] > uf_grid[i - 1]))
            throw InvalidArgument("scan_branches: grid must ascend");
    std::vector<ScanPoint> points;
    points.reserve(uf_grid.size());
    std::vector<SemiclassicalSolution> prev;
    for (double uf : uf_grid) {
        ScanPoint pt;
        pt.uf = uf;
        try {
            const DimerParams p =
                DimerParams::at_uf(base.J, base.delta, base.gamma, base.U, uf);
            // fresh enumeration (cheap, never misses branch birth) ...
            pt.solutions = all_solutions(p);
            // ... then continuation seeds recover any branch the cold start
            // lost (deep in the window Newton basins can be thin).
            for (const auto& s : prev) {
                if (s.branch == Branch::symmetric) continue;
                cplx a1 = s.alpha1, a2 = s.alpha2;
                if (!newton_full(a1, a2, p, 200, 1e-12) ||
                    is_symmetric_pair(a1, a2))
                    continue;
                const bool dup = std::any_of(
                    pt.solutions.begin(), pt.solutions.end(),
                    [&](const auto& q) {
                        return std::abs(q.alpha1 - a1) +
                                   std::abs(q.alpha2 - a2) <
                               1e-8;
                    });
                if (!dup)
                    pt.solutions.push_back(
                        make_solution(a1, a2, broken_label(a1 + a2), p));
            }
            prev = pt.solutions;
        } catch (const Error& e) {
            pt.error = e.what();
        }
        points.push_back(std::move(pt));
    }
    return points;
}

double bifurcation_bisect(const DimerParams& base, double uf_lo, double uf_hi,
                          double tol) {
    const auto max_re = [&base](double uf) {
        const DimerParams p =
            DimerParams::at_uf(base.J, base.delta, base.gamma, base.U, uf);
        const auto occ = symmetric_occupations(p);
        if (occ.size() != 1)
            throw InvalidArgument(
                "bifurcation_bisect: symmetric branch not unique in bracket");
        cplx a1 = symmetric_amplitude(occ[0], p);
        newton_symmetric(a1, p, 200, 1e-13);
        return stability(a1, -a1, p).max_re_lambda;
    };
    double flo = max_re(uf_lo), fhi = max_re(uf_hi);
    if (flo == 0.0) return uf_lo;
    if (fhi == 0.0) return uf_hi;
    if (flo * fhi > 0.0)
        throw InvalidArgument("bifurcation_bisect: no sign change in bracket");
    while (uf_hi - uf_lo > tol) {
        const double mid = 0.5 * (uf_lo + uf_hi);
        const double fm = max_re(mid);
        if (fm == 0.0) return mid;
        if (fm * flo > 0.0) {
            uf_lo = mid;
            flo = fm;
        } else {
            uf_hi = mid;
        }
    }
    return 0.5 * (uf_lo + uf_hi);
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& points,
                       double uf_c_guess) {
    if (points.size() < 6)
        throw InsufficientPoints("fit_exponent: need at least 6 points");
    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    double xmin = points[0].first, xmax = points[0].first;
    for (const auto& [x, y] : points) {
        if (!(y > 0.0))
            throw FitDiverged("fit_exponent: non-positive ordinate");
        xs.push_back(x);
        ys.push_back(y);
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    bool mirrored = false;
    if (uf_c_guess >= xmax) {  // threshold above the data: mirror x -> -x
        mirrored = true;
        for (auto& x : xs) x = -x;
        uf_c_guess = -uf_c_guess;
        std::swap(xmin, xmax);
        xmin = -xmin;
        xmax = -xmax;
    } else if (uf_c_guess > xmin) {
        throw InvalidArgument("fit_exponent: threshold guess inside data");
    }

    const auto ssr_fit = [&xs, &ys](double ac, double* slope, double* icept) {
        const size_t n = xs.size();
        double st = 0, sy = 0, stt = 0, sty = 0;
        for (size_t i = 0; i < n; ++i) {
            const double t = std::log(xs[i] - ac);
            const double ly = std::log(ys[i]);
            st += t;
            sy += ly;
            stt += t * t;
            sty += t * ly;
        }
        const double det = n * stt - st * st;
        const double e = (n * sty - st * sy) / det;
        const double a = (sy - e * st) / n;
        double ssr = 0;
        for (size_t i = 0; i < n; ++i) {
            const double r = std::log(ys[i]) - a - e * std::log(xs[i] - ac);
            ssr += r * r;
        }
        if (slope) *slope = e;
        if (icept) *icept = a;
        return ssr;
    };

    const double span = std::max(xmax - xmin, 1e-12);
    double hi = xmin - 1e-12 * std::max(1.0, std::abs(xmin));
    double lo = std::min(uf_c_guess - span, xmin - 10.0 * span);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double fa = ssr_fit(a, nullptr, nullptr), fb = ssr_fit(b, nullptr, nullptr);
    for (int it = 0;
         it < 400 && hi - lo > 1e-13 * std::max(1.0, std::abs(xmin)); ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - gr * (hi - lo);
            fa = ssr_fit(a, nullptr, nullptr);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + gr * (hi - lo);
            fb = ssr_fit(b, nullptr, nullptr);
        }
    }
    const double ac = 0.5 * (lo + hi);
    double slope = 0, icept = 0;
    const double ssr = ssr_fit(ac, &slope, &icept);
    if (!std::isfinite(slope) || !std::isfinite(ssr))
        throw FitDiverged("fit_exponent: fit did not converge");

    FitResult r;
    r.A_c = mirrored ? -ac : ac;
    r.exponent = slope;
    r.amplitude = std::exp(icept);
    r.rms = std::sqrt(ssr / static_cast<double>(xs.size()));
    r.n_points = static_cast<int>(xs.size());
    return r;
}

}  // namespace dimer

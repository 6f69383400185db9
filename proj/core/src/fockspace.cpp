#include "dimer/fockspace.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>
#include <limits>

namespace dimer {

namespace {

SpMat single_site_ladder(int cutoff) {
    const int d = cutoff + 1;
    SpMat a(d, d);
    std::vector<Triplet> trip;
    trip.reserve(cutoff);
    for (int n = 1; n < d; ++n)
        trip.emplace_back(n - 1, n, cplx(std::sqrt(double(n)), 0.0));
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

SpMat sparse_identity(int n) {
    SpMat I(n, n);
    I.setIdentity();
    return I;
}

}  // namespace

FockOperators build_operators(const FockConfig& cfg) {
    if (cfg.cutoff < 1)
        throw InvalidArgument("build_operators: cutoff must be >= 1");
    const SpMat a = single_site_ladder(cfg.cutoff);
    const SpMat I = sparse_identity(cfg.site_dim());
    FockOperators ops;
    ops.d1 = Eigen::kroneckerProduct(a, I);
    ops.d2 = Eigen::kroneckerProduct(I, a);
    ops.n1op = SpMat(ops.d1.adjoint() * ops.d1);
    ops.n2op = SpMat(ops.d2.adjoint() * ops.d2);
    ops.dim = cfg.dim();
    return ops;
}

SpMat displaced_hamiltonian(const DimerParams& p, const FockConfig& cfg) {
    p.validate();
    const auto [r1, r2] = residual(cfg.alpha1, cfg.alpha2, p);
    const double rmax = std::max(std::abs(r1), std::abs(r2));
    if (rmax > 1e-8)
        throw ResidualDriveTooLarge(
            "displaced_hamiltonian: linear coefficient " +
            std::to_string(rmax) + " (displacement is not a steady state)");

    const FockOperators ops = build_operators(cfg);
    SpMat H(ops.dim, ops.dim);
    const cplx als[2] = {cfg.alpha1, cfg.alpha2};
    const SpMat* ds[2] = {&ops.d1, &ops.d2};
    for (int i = 0; i < 2; ++i) {
        const SpMat& d = *ds[i];
        const SpMat dg = d.adjoint();
        const cplx al = als[i];
        const SpMat dgd = SpMat(dg * d);
        H += cplx(-p.delta + 4.0 * p.U * std::norm(al), 0.0) * dgd;
        H += cplx(p.U, 0.0) * al * al * SpMat(dg * dg);
        H += cplx(p.U, 0.0) * std::conj(al * al) * SpMat(d * d);
        H += cplx(2.0 * p.U, 0.0) * al * SpMat(dg * dgd);
        H += cplx(2.0 * p.U, 0.0) * std::conj(al) * SpMat(dgd * d);
        H += cplx(p.U, 0.0) * SpMat(SpMat(dg * dg) * SpMat(d * d));
    }
    H += cplx(-p.J, 0.0) * SpMat(SpMat(ops.d1.adjoint() * ops.d2) +
                                 SpMat(ops.d2.adjoint() * ops.d1));
    H.prune(cplx(1.0, 0.0), 1e-300);
    return H;
}

SpMat build_liouvillian(const SpMat& H, const FockConfig& cfg, double gamma) {
    const int n = static_cast<int>(H.rows());
    if (n != cfg.dim())
        throw InvalidArgument("build_liouvillian: dimension mismatch");
    const SpMat I = sparse_identity(n);
    const SpMat Ht = H.transpose();
    SpMat L = SpMat(cplx(0.0, -1.0) *
                    SpMat(SpMat(Eigen::kroneckerProduct(I, H)) -
                          SpMat(Eigen::kroneckerProduct(Ht, I))));
    const FockOperators ops = build_operators(cfg);
    const SpMat* ds[2] = {&ops.d1, &ops.d2};
    for (int j = 0; j < 2; ++j) {
        const SpMat& d = *ds[j];
        const SpMat dc = d.conjugate();
        const SpMat nd = SpMat(d.adjoint() * d);
        const SpMat ndt = nd.transpose();
        L += cplx(0.5 * gamma, 0.0) *
             SpMat(cplx(2.0, 0.0) * SpMat(Eigen::kroneckerProduct(dc, d)) -
                   SpMat(Eigen::kroneckerProduct(I, nd)) -
                   SpMat(Eigen::kroneckerProduct(ndt, I)));
    }
    L.makeCompressed();
    return L;
}

DensityMatrix steady_state(const SpMat& L, const FockConfig& cfg,
                           double tol_kernel, bool use_null_vector) {
    const int d = cfg.dim();
    const long N = static_cast<long>(d) * d;
    if (L.rows() != N)
        throw InvalidArgument("steady_state: Liouvillian size mismatch");
    const double scale = sparse_scale(L);

    Vec v;
    if (use_null_vector) {
        v = null_vector(L, tol_kernel);
    } else {
        // Replace row 0 by the trace constraint sum_k rho_kk = 1, weighted
        // to the mean nonzero magnitude so the factorization stays balanced.
        const double w = std::max(scale, 1e-300);
        std::vector<Triplet> trip;
        trip.reserve(L.nonZeros() + d);
        for (int k = 0; k < L.outerSize(); ++k)
            for (SpMat::InnerIterator it(L, k); it; ++it)
                if (it.row() != 0)
                    trip.emplace_back(it.row(), it.col(), it.value());
        for (int k = 0; k < d; ++k)
            trip.emplace_back(0, k * (d + 1), cplx(w, 0.0));
        SpMat A(N, N);
        A.setFromTriplets(trip.begin(), trip.end());
        Vec b = Vec::Zero(N);
        b[0] = w;
        v = solve_sparse(A, b);
    }

    DensityMatrix dm;
    dm.config = cfg;
    Mat rho = Eigen::Map<const Mat>(v.data(), d, d);  // column-stacked
    dm.herm_correction = 0.5 * (rho - rho.adjoint()).norm();
    rho = 0.5 * (rho + Mat(rho.adjoint()));
    const double tr = rho.trace().real();
    if (!(std::abs(tr) > 1e-300))
        throw NotConverged("steady_state: extracted kernel has zero trace");
    dm.trace_correction = std::abs(tr - 1.0);
    rho /= tr;
    dm.rho = rho;

    const Vec vr = Eigen::Map<const Vec>(rho.data(), N);
    dm.residual = (L * vr).norm();
    if (dm.residual > tol_kernel * std::max(scale, 1.0))
        throw NotConverged("steady_state: residual " +
                           std::to_string(dm.residual) + " above tolerance");
    dm.min_eigenvalue = eig_hermitian(rho).minCoeff();
    return dm;
}

FockObservables observables(const DensityMatrix& dm) {
    const FockOperators ops = build_operators(dm.config);
    const auto ev = [&dm](const SpMat& op) {
        return cplx((op * dm.rho).eval().trace());
    };
    FockObservables o;
    o.m1 = ev(ops.d1);
    o.m2 = ev(ops.d2);
    o.n1 = ev(ops.n1op).real();
    o.n2 = ev(ops.n2op).real();
    o.t = ev(SpMat(ops.d1.adjoint() * ops.d2));
    const cplx dsum = o.m1 + o.m2;
    o.V = o.n1 + o.n2 + 2.0 * o.t.real() - std::norm(dsum);
    o.order_param_total = (dm.config.alpha1 + dm.config.alpha2) + dsum;
    return o;
}

NegativityResult negativity_exact(const DensityMatrix& dm) {
    const int d = dm.config.site_dim();
    Mat B(dm.rho.rows(), dm.rho.cols());
    for (int m1 = 0; m1 < d; ++m1)
        for (int m2 = 0; m2 < d; ++m2)
            for (int n1 = 0; n1 < d; ++n1)
                for (int n2 = 0; n2 < d; ++n2)
                    B(m1 * d + m2, n1 * d + n2) =
                        dm.rho(m1 * d + n2, n1 * d + m2);
    const Eigen::VectorXd lam = eig_hermitian(B);
    double N = 0.0;
    for (int i = 0; i < lam.size(); ++i)
        if (lam[i] < 0.0) N -= lam[i];
    return {N, std::log(2.0 * N + 1.0)};
}

double entropy_exact(const DensityMatrix& dm) {
    const Eigen::VectorXd lam = eig_hermitian(dm.rho);
    double S = 0.0;
    for (int i = 0; i < lam.size(); ++i) {
        double l = lam[i];
        if (l < -1e-6)
            throw UnphysicalSpectrum("entropy_exact: eigenvalue " +
                                     std::to_string(l));
        if (l <= 1e-14) continue;
        S -= l * std::log(l);
    }
    return S;
}

std::vector<CutoffRow> cutoff_convergence(const DimerParams& p,
                                          AmplitudePair displacement,
                                          const std::vector<int>& cutoffs,
                                          double threshold,
                                          double tol_kernel) {
    for (size_t i = 1; i < cutoffs.size(); ++i)
        if (cutoffs[i] <= cutoffs[i - 1])
            throw InvalidArgument("cutoff_convergence: cutoffs must ascend");
    std::vector<CutoffRow> rows;
    const CutoffRow* prev = nullptr;
    for (int cut : cutoffs) {
        FockConfig cfg;
        cfg.cutoff = cut;
        cfg.alpha1 = displacement.first;
        cfg.alpha2 = displacement.second;
        const SpMat H = displaced_hamiltonian(p, cfg);
        const SpMat L = build_liouvillian(H, cfg, p.gamma);
        const DensityMatrix dm = steady_state(L, cfg, tol_kernel);
        const FockObservables obs = observables(dm);
        CutoffRow row;
        row.cutoff = cut;
        row.V = obs.V;
        row.E_N = negativity_exact(dm).E_N;
        row.S = entropy_exact(dm);
        row.order_param_total = obs.order_param_total;
        row.residual = dm.residual;
        if (prev) {
            const auto rel = [](double x, double xp) {
                const double den =
                    std::max({std::abs(x), std::abs(xp), 1e-10});
                return std::abs(x - xp) / den;
            };
            row.rel_diff = std::max(
                {rel(row.V, prev->V), rel(row.E_N, prev->E_N),
                 rel(row.S, prev->S)});
            row.converged = row.rel_diff < threshold;
        } else {
            row.rel_diff = std::numeric_limits<double>::quiet_NaN();
            row.converged = false;
        }
        rows.push_back(row);
        prev = &rows.back();
    }
    return rows;
}

}  // namespace dimer

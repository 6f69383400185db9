#include "dimer/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <cmath>

namespace dimer {

Vec solve_dense(const Mat& A, const Vec& b) {
    if (A.rows() != A.cols())
        throw InvalidArgument("solve_dense: matrix not square");
    if (A.rows() != b.size())
        throw InvalidArgument("solve_dense: dimension mismatch");
    const double a_norm = A.cwiseAbs().rowwise().sum().maxCoeff();

    Eigen::PartialPivLU<Mat> lu(A);
    const double pivot_min = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (pivot_min < 1e-14 * a_norm)
        throw SingularMatrix("solve_dense: pivot below 1e-14 * ||A||");

    Vec x = lu.solve(b);
    const double resid = (A * x - b).cwiseAbs().maxCoeff();
    const double bound = 1e-10 * (a_norm * x.cwiseAbs().maxCoeff() +
                                  b.cwiseAbs().maxCoeff());
    if (!(resid <= bound)) {
        // one step of iterative refinement before giving up
        x += lu.solve(b - A * x);
        const double resid2 = (A * x - b).cwiseAbs().maxCoeff();
        if (!(resid2 <= bound))
            throw NoConvergence("solve_dense: residual bound not met");
    }
    return x;
}

Vec eig_general(const Mat& A) {
    Eigen::ComplexEigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NoConvergence("eig_general: QR iteration failed");
    return es.eigenvalues();
}

Eigensystem eig_general_full(const Mat& A) {
    Eigen::ComplexEigenSolver<Mat> es(A, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw NoConvergence("eig_general_full: QR iteration failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd eig_hermitian(const Mat& A) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NoConvergence("eig_hermitian: iteration failed");
    return es.eigenvalues();
}

Vec solve_sparse(const SpMat& A, const Vec& b) {
    SpMat Ac = A;
    Ac.makeCompressed();
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(Ac);
    lu.factorize(Ac);
    if (lu.info() != Eigen::Success)
        throw SingularMatrix("solve_sparse: factorization failed");
    Vec x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw NoConvergence("solve_sparse: solve failed");
    return x;
}

double sparse_scale(const SpMat& A) {
    double sum = 0.0;
    long nnz = 0;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            sum += std::abs(it.value());
            ++nnz;
        }
    return nnz ? sum / static_cast<double>(nnz) : 0.0;
}

namespace {

// Fix the global phase: largest-magnitude component real positive.
void fix_phase(Vec& v) {
    int imax = 0;
    double amax = 0.0;
    for (int i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > amax) {
            amax = a;
            imax = i;
        }
    }
    if (amax > 0.0) v *= std::conj(v[imax]) / amax;
    v.normalize();
}

}  // namespace

Vec null_vector(const SpMat& L, double tol) {
    const int n = static_cast<int>(L.rows());
    if (n != L.cols()) throw InvalidArgument("null_vector: matrix not square");
    const double scale = sparse_scale(L);

    // Shifted inverse iteration: (L - sigma I) stays invertible for a tiny
    // real shift while the near-null direction is amplified by ~1/sigma.
    const double sigma = std::max(tol, 1e-12) * std::max(scale, 1.0);
    SpMat A = L;
    SpMat I(n, n);
    I.setIdentity();
    A -= cplx(sigma, 0.0) * I;
    A.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success)
        throw NoConvergence("null_vector: shifted factorization failed");

    // Deterministic start: uniform vector (overlaps any nontrivial kernel of
    // a physical generator); re-seeded if an unlucky orthogonal start stalls.
    Vec v = Vec::Constant(n, cplx(1.0, 0.0)).normalized();
    const int max_iter = 50;
    bool ok = false;
    for (int it = 0; it < max_iter; ++it) {
        v = lu.solve(v);
        v.normalize();
        if ((L * v).norm() <= tol * std::max(scale, 1.0)) {
            ok = true;
            break;
        }
        if (it == max_iter / 2) {
            Vec alt = Vec::Zero(n);
            for (int i = 0; i < n; ++i)
                alt[i] = cplx(std::cos(0.7 * i + 0.3), std::sin(1.3 * i));
            v = alt.normalized();
        }
    }
    if (!ok) throw NoConvergence("null_vector: inverse iteration stalled");

    // Deflated probe for a second kernel vector.
    Vec w = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        w[i] = cplx(std::sin(0.9 * i + 1.1), std::cos(0.4 * i));
    w -= v * v.dot(w);
    if (w.norm() > 1e-12) {
        w.normalize();
        for (int it = 0; it < 8; ++it) {
            w = lu.solve(w);
            w -= v * v.dot(w);
            const double nw = w.norm();
            if (nw < 1e-300) break;
            w /= nw;
        }
        if (w.norm() > 0.5 && (L * w).norm() <= tol * std::max(scale, 1.0))
            throw AmbiguousKernel("null_vector: degenerate kernel detected");
    }

    fix_phase(v);
    return v;
}

}  // namespace dimer

#include "dimer/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace dimer {

MomentSet moment_derivative(const MomentSet& m, cplx a1, cplx a2,
                            const DimerParams& p) {
    const cplx i(0.0, 1.0);
    const double U = p.U, J = p.J, D = p.delta, g = p.gamma;
    const cplx n1 = m.n1, n2 = m.n2;
    const cplx s1 = m.s1, s2 = m.s2, t = m.t, u = m.u;
    const double q1 = std::norm(a1), q2 = std::norm(a2);

    // i d/dt of each correlator under the quadratic (Gaussian) dynamics:
    const cplx E1 = -i * g * n1 + 2.0 * U * a1 * a1 * std::conj(s1) -
                    2.0 * U * std::conj(a1) * std::conj(a1) * s1 -
                    J * (t - std::conj(t));
    const cplx E2 = -i * g * n2 + 2.0 * U * a2 * a2 * std::conj(s2) -
                    2.0 * U * std::conj(a2) * std::conj(a2) * s2 -
                    J * (std::conj(t) - t);
    const cplx E3 = 2.0 * (cplx(-D + 4.0 * U * q1, -0.5 * g)) * s1 +
                    2.0 * U * a1 * a1 * (1.0 + 2.0 * n1) - 2.0 * J * u;
    const cplx E4 = 2.0 * (cplx(-D + 4.0 * U * q2, -0.5 * g)) * s2 +
                    2.0 * U * a2 * a2 * (1.0 + 2.0 * n2) - 2.0 * J * u;
    const cplx E5 = (cplx(4.0 * U * (q2 - q1), -g)) * t +
                    2.0 * U * a2 * a2 * std::conj(u) -
                    2.0 * U * std::conj(a1) * std::conj(a1) * u -
                    J * (n1 - n2);
    const cplx E6 = (cplx(-2.0 * D + 4.0 * U * (q1 + q2), -g)) * u +
                    2.0 * U * a2 * a2 * std::conj(t) + 2.0 * U * a1 * a1 * t -
                    J * (s1 + s2);

    MomentSet d;
    d.n1 = (-i * E1).real();  // imaginary part vanishes identically
    d.n2 = (-i * E2).real();
    d.s1 = -i * E3;
    d.s2 = -i * E4;
    d.t = -i * E5;
    d.u = -i * E6;
    return d;
}

namespace {

Eigen::VectorXd pack(const MomentSet& m) {
    Eigen::VectorXd x(10);
    x << m.n1, m.n2, m.s1.real(), m.s1.imag(), m.s2.real(), m.s2.imag(),
        m.t.real(), m.t.imag(), m.u.real(), m.u.imag();
    return x;
}

MomentSet unpack(const Eigen::VectorXd& x) {
    MomentSet m;
    m.n1 = x[0];
    m.n2 = x[1];
    m.s1 = cplx(x[2], x[3]);
    m.s2 = cplx(x[4], x[5]);
    m.t = cplx(x[6], x[7]);
    m.u = cplx(x[8], x[9]);
    return m;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble_moment_system(
    const SemiclassicalSolution& sol) {
    const Eigen::VectorXd b = -pack(
        moment_derivative(MomentSet{}, sol.alpha1, sol.alpha2, sol.params));
    Eigen::MatrixXd A(10, 10);
    for (int j = 0; j < 10; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(10);
        e[j] = 1.0;
        A.col(j) = pack(moment_derivative(unpack(e), sol.alpha1, sol.alpha2,
                                          sol.params)) +
                   b;
    }
    return {A, b};
}

MomentSet solve_moments(const SemiclassicalSolution& sol) {
    auto [A, b] = assemble_moment_system(sol);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw SingularAtCriticality(
            "solve_moments: moment system singular (bifurcation point)");
    const Vec x = solve_dense(A.cast<cplx>(), b.cast<cplx>());
    Eigen::VectorXd xr(10);
    for (int k = 0; k < 10; ++k) xr[k] = x[k].real();
    return unpack(xr);
}

MomentSet integrate_moments(const MomentSet& m0, cplx a1, cplx a2,
                            const DimerParams& p, double t_end, double dt) {
    Eigen::VectorXd y = pack(m0);
    const auto f = [&](const Eigen::VectorXd& v) {
        return pack(moment_derivative(unpack(v), a1, a2, p));
    };
    const long nsteps = std::lround(t_end / dt);
    for (long s = 0; s < nsteps; ++s) {
        const Eigen::VectorXd k1 = f(y);
        const Eigen::VectorXd k2 = f(y + 0.5 * dt * k1);
        const Eigen::VectorXd k3 = f(y + 0.5 * dt * k2);
        const Eigen::VectorXd k4 = f(y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return unpack(y);
}

double variance_order_parameter(const MomentSet& m) {
    return m.n1 + m.n2 + 2.0 * m.t.real();
}

CovarianceMatrix covariance_from_moments(const MomentSet& m) {
    CovarianceMatrix c;
    Eigen::Matrix4d& s = c.sigma;
    s(0, 0) = m.n1 + m.s1.real() + 0.5;
    s(1, 1) = m.n1 - m.s1.real() + 0.5;
    s(0, 1) = s(1, 0) = m.s1.imag();
    s(2, 2) = m.n2 + m.s2.real() + 0.5;
    s(3, 3) = m.n2 - m.s2.real() + 0.5;
    s(2, 3) = s(3, 2) = m.s2.imag();
    s(0, 2) = s(2, 0) = m.t.real() + m.u.real();
    s(1, 3) = s(3, 1) = m.t.real() - m.u.real();
    s(0, 3) = s(3, 0) = m.u.imag() + m.t.imag();
    s(1, 2) = s(2, 1) = m.u.imag() - m.t.imag();
    const auto nu = symplectic_eigenvalues(c);
    if (nu[0] < 0.5 - 1e-6)
        throw Unphysical("covariance_from_moments: nu_min = " +
                         std::to_string(nu[0]) + " < 1/2");
    return c;
}

MomentSet moments_from_covariance(const CovarianceMatrix& c) {
    const Eigen::Matrix4d& s = c.sigma;
    MomentSet m;
    m.n1 = 0.5 * (s(0, 0) + s(1, 1) - 1.0);
    m.n2 = 0.5 * (s(2, 2) + s(3, 3) - 1.0);
    m.s1 = cplx(0.5 * (s(0, 0) - s(1, 1)), s(0, 1));
    m.s2 = cplx(0.5 * (s(2, 2) - s(3, 3)), s(2, 3));
    m.t = cplx(0.5 * (s(0, 2) + s(1, 3)), 0.5 * (s(0, 3) - s(1, 2)));
    m.u = cplx(0.5 * (s(0, 2) - s(1, 3)), 0.5 * (s(0, 3) + s(1, 2)));
    return m;
}

namespace {

Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d Om = Eigen::Matrix4d::Zero();
    Om(0, 1) = 1.0;
    Om(1, 0) = -1.0;
    Om(2, 3) = 1.0;
    Om(3, 2) = -1.0;
    return Om;
}

}  // namespace

std::array<double, 2> symplectic_eigenvalues(const CovarianceMatrix& c) {
    const Mat M =
        cplx(0.0, 1.0) * (symplectic_form() * c.sigma).cast<cplx>();
    const Vec ev = eig_general(M);
    std::array<double, 4> a{std::abs(ev[0]), std::abs(ev[1]), std::abs(ev[2]),
                            std::abs(ev[3])};
    std::sort(a.begin(), a.end());
    return {0.5 * (a[0] + a[1]), 0.5 * (a[2] + a[3])};  // degenerate pairs
}

double ptranspose_symplectic_min(const CovarianceMatrix& c) {
    const Eigen::Matrix4d& s = c.sigma;
    const Eigen::Matrix2d A = s.topLeftCorner<2, 2>();
    const Eigen::Matrix2d B = s.bottomRightCorner<2, 2>();
    const Eigen::Matrix2d C = s.topRightCorner<2, 2>();
    const double Dt =
        A.determinant() + B.determinant() - 2.0 * C.determinant();
    double disc = Dt * Dt - 4.0 * s.determinant();
    if (disc < 0.0) {
        if (disc < -1e-10)
            throw NumericalDomain(
                "log_negativity: negative discriminant " +
                std::to_string(disc));
        disc = 0.0;
    }
    double nu2 = 0.5 * (Dt - std::sqrt(disc));
    if (nu2 < 0.0) nu2 = 0.0;
    return std::sqrt(nu2);
}

double log_negativity_gaussian(const CovarianceMatrix& c) {
    const double nu = ptranspose_symplectic_min(c);
    if (nu <= 0.0) throw NumericalDomain("log_negativity: nu~ = 0");
    return std::max(0.0, -std::log(2.0 * nu));
}

double von_neumann_entropy_gaussian(const CovarianceMatrix& c) {
    const auto nu = symplectic_eigenvalues(c);
    double S = 0.0;
    for (double v : nu) {
        if (v <= 0.5 + 1e-12) continue;  // pure mode
        S += (v + 0.5) * std::log(v + 0.5) - (v - 0.5) * std::log(v - 0.5);
    }
    return S;
}

}  // namespace dimer

#pragma once

#include <array>
#include <utility>

#include "dimer/semiclassical.hpp"

namespace dimer {

// Second-order fluctuation correlators around a mean-field steady state,
// for fluctuation operators d_i = a_i - alpha_i:
//   n1 = <d1+ d1>, n2 = <d2+ d2>  (real),
//   s1 = <d1 d1>, s2 = <d2 d2>, t = <d1+ d2>, u = <d1 d2>  (complex).
struct MomentSet {
    double n1 = 0.0, n2 = 0.0;
    cplx s1, s2, t, u;
};

// Time derivative d/dt of the moments under the linearized (Gaussian)
// dynamics around (alpha1, alpha2).  Single source of truth: the steady-state
// linear system is assembled by applying this map to basis vectors, and the
// same map drives the RK4 relaxation oracle.
MomentSet moment_derivative(const MomentSet& m, cplx alpha1, cplx alpha2,
                            const DimerParams& p);

// 10x10 real system A x = b whose solution is the steady MomentSet, in the
// packing (n1, n2, Re s1, Im s1, Re s2, Im s2, Re t, Im t, Re u, Im u).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble_moment_system(
    const SemiclassicalSolution& sol);

// Steady moments via the dense solve.  Throws SingularAtCriticality when the
// system's condition number exceeds 1e12 (the fluctuations diverge at a
// bifurcation; no finite answer exists there).
MomentSet solve_moments(const SemiclassicalSolution& sol);

// RK4 integration of the moment equations; oracle path, not a public solver.
MomentSet integrate_moments(const MomentSet& m0, cplx alpha1, cplx alpha2,
                            const DimerParams& p, double t_end,
                            double dt = 0.005);

// Variance of the order parameter O = a1 + a2 in the Gaussian tier, where
// the first fluctuation moments vanish: V = n1 + n2 + 2 Re t.
double variance_order_parameter(const MomentSet& m);

// 4x4 real covariance over (x1, p1, x2, p2) with x = (d + d+)/sqrt(2),
// p = (d - d+)/(i sqrt(2)); vacuum = I/2.
struct CovarianceMatrix {
    Eigen::Matrix4d sigma = 0.5 * Eigen::Matrix4d::Identity();
};

// Moment dictionary:
//   sigma_x1x1 = n1 + Re s1 + 1/2   sigma_p1p1 = n1 - Re s1 + 1/2
//   sigma_x1p1 = Im s1              (site 2 analogous)
//   sigma_x1x2 = Re t + Re u        sigma_p1p2 = Re t - Re u
//   sigma_x1p2 = Im u + Im t        sigma_p1x2 = Im u - Im t
// Throws Unphysical when a symplectic eigenvalue falls below 1/2 - 1e-6.
CovarianceMatrix covariance_from_moments(const MomentSet& m);

// Inverse of the dictionary (round-trip check).
MomentSet moments_from_covariance(const CovarianceMatrix& c);

// Symplectic eigenvalues nu_-, nu_+ of sigma (moduli of eig(i Omega sigma),
// which come in equal pairs), ascending.
std::array<double, 2> symplectic_eigenvalues(const CovarianceMatrix& c);

// Logarithmic negativity from the partially transposed covariance:
// Dt = det A + det B - 2 det C, nu~_- = sqrt((Dt - sqrt(Dt^2 - 4 det s))/2),
// E_N = max(0, -ln 2 nu~_-).  Throws NumericalDomain if the discriminant is
// negative beyond tolerance.
double log_negativity_gaussian(const CovarianceMatrix& c);

// Smallest partially-transposed symplectic eigenvalue nu~_- (diagnostic).
double ptranspose_symplectic_min(const CovarianceMatrix& c);

// Von Neumann entropy S = sum f(nu), f(nu) = (nu + 1/2) ln(nu + 1/2)
// - (nu - 1/2) ln(nu - 1/2), f(1/2) = 0.
double von_neumann_entropy_gaussian(const CovarianceMatrix& c);

}  // namespace dimer

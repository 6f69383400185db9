#pragma once

#include <vector>

#include "dimer/gaussian.hpp"
#include "dimer/semiclassical.hpp"

namespace dimer {

// Exact finite-U tier: truncated two-site Fock space in the frame displaced
// by a mean-field steady state, so moderate cutoffs capture the fluctuation
// physics even when the mean occupations are large.
struct FockConfig {
    int cutoff = 10;  // max excitations per site; dim/site = cutoff + 1
    cplx alpha1, alpha2;  // displacement (a converged steady state)

    int site_dim() const { return cutoff + 1; }
    int dim() const { return site_dim() * site_dim(); }
};

struct FockOperators {
    SpMat d1, d2;      // annihilation, product basis |n1, n2>, index n1*d + n2
    SpMat n1op, n2op;  // number operators
    int dim = 0;
};

FockOperators build_operators(const FockConfig& cfg);

// Hamiltonian after a = alpha + d with the steady-state condition absorbing
// the linear terms; per site:
//   (-delta + 4U|a_i|^2) d+ d + U (a_i^2 d+ d+ + h.c.)
//   + 2U (a_i d+ d+ d + h.c.) + U d+ d+ d d
// plus hopping -J (d1+ d2 + h.c.).  The linear coefficient equals the
// mean-field residual and must vanish; ResidualDriveTooLarge above 1e-8.
SpMat displaced_hamiltonian(const DimerParams& p, const FockConfig& cfg);

// Column-stacking vectorization, vec(A X B) = (B^T kron A) vec(X):
//   L = -i (I kron H - H^T kron I)
//       + gamma/2 sum_j [2 conj(d_j) kron d_j - I kron d_j+ d_j
//                        - (d_j+ d_j)^T kron I].
SpMat build_liouvillian(const SpMat& H, const FockConfig& cfg, double gamma);

struct DensityMatrix {
    Mat rho;
    FockConfig config;
    double residual = 0.0;          // ||L vec(rho)||_2 after cleanup
    double herm_correction = 0.0;   // ||rho - rho+||_F / 2 removed
    double trace_correction = 0.0;  // |tr rho - 1| removed
    double min_eigenvalue = 0.0;
};

// Steady state from the kernel of L.  Default: direct sparse solve of the
// trace-augmented system (row 0 replaced by the trace constraint, weighted
// by the mean nonzero magnitude).  use_null_vector = true routes through the
// inverse-iteration kernel finder instead (slower; detects degeneracy).
// The result is Hermitized and trace-normalized, corrections recorded.
DensityMatrix steady_state(const SpMat& L, const FockConfig& cfg,
                           double tol_kernel = 1e-8,
                           bool use_null_vector = false);

struct FockObservables {
    cplx m1, m2;        // <d1>, <d2>
    double n1 = 0.0, n2 = 0.0;
    cplx t;             // <d1+ d2>
    cplx order_param_total;  // (alpha1 + alpha2) + <d1 + d2>
    double V = 0.0;     // n1 + n2 + 2 Re t - |<d1 + d2>|^2 (frame-invariant)
};

FockObservables observables(const DensityMatrix& dm);

// Partial transpose over site 2, full eigendecomposition,
// N = sum (|l| - l)/2, E_N = ln(2N + 1).
struct NegativityResult {
    double N = 0.0;
    double E_N = 0.0;
};
NegativityResult negativity_exact(const DensityMatrix& dm);

// S = -sum l ln l over eigenvalues l > 1e-14; eigenvalues below -1e-6 raise
// UnphysicalSpectrum, small truncation negatives are clamped.
double entropy_exact(const DensityMatrix& dm);

struct CutoffRow {
    int cutoff = 0;
    double V = 0.0, E_N = 0.0, S = 0.0;
    cplx order_param_total;
    double residual = 0.0;
    double rel_diff = 0.0;  // vs previous cutoff, max over V, E_N, S
    bool converged = false;
};

// Recompute the steady state at each cutoff and report successive relative
// differences; converged when the difference drops below `threshold`.
std::vector<CutoffRow> cutoff_convergence(const DimerParams& p,
                                          AmplitudePair displacement,
                                          const std::vector<int>& cutoffs,
                                          double threshold = 1e-2,
                                          double tol_kernel = 1e-8);

}  // namespace dimer

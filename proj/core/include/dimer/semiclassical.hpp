#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dimer/model.hpp"
#include "dimer/numerics.hpp"

namespace dimer {

// Mean-field equations of motion (one per site):
//   i da1/dt = (-delta - i gamma/2 + 2U|a1|^2) a1 - J a2 + F
//   i da2/dt = (-delta - i gamma/2 + 2U|a2|^2) a2 - J a1 - F
// A steady state is a root of the right-hand sides.

enum class Branch { symmetric, broken_plus, broken_minus };

const char* branch_name(Branch b);

struct SemiclassicalSolution {
    cplx alpha1, alpha2;
    Branch branch = Branch::symmetric;
    bool stable = false;
    DimerParams params;
    double residual_norm = 0.0;
    double max_re_lambda = 0.0;
    std::array<cplx, 4> spectrum{};  // linearization eigenvalues

    cplx order_param() const { return alpha1 + alpha2; }
    // |<a1 + a2>| sqrt(U / gamma): invariant under the U -> U/s^2, F -> sF
    // rescaling, so directly comparable across interaction strengths.
    double order_param_rescaled() const {
        return std::abs(order_param()) * std::sqrt(params.U / params.gamma);
    }
};

// Right-hand sides of the steady-state conditions (i da/dt = r, r = 0).
AmplitudePair residual(cplx alpha1, cplx alpha2, const DimerParams& p);

// Newton iteration on the four real components; converges when
// ||r|| < tol.  Branch label from the symmetry test on alpha1 + alpha2.
SemiclassicalSolution solve_steady(const DimerParams& p, AmplitudePair guess,
                                   int max_iter = 200, double tol = 1e-12);

// Fixed-step RK4 time integration of the mean-field equations.
// Throws StepOverflow when |alpha| exceeds 1e6.
AmplitudePair integrate_transient(const DimerParams& p, AmplitudePair a0,
                                  double t_end, double dt = 0.01);

struct Stability {
    bool stable = false;
    double max_re_lambda = 0.0;
    std::array<cplx, 4> spectrum{};
};

// Linearization of the mean-field flow around (alpha1, alpha2) acting on
// (d1, d1*, d2, d2*); stable iff all eigenvalue real parts are negative.
Stability stability(cplx alpha1, cplx alpha2, const DimerParams& p);

// All steady states at the given parameters: the symmetric solutions come
// from the reduced cubic  n [(J - delta + 2Un)^2 + gamma^2/4] = F^2  with
// alpha2 = -alpha1 enforced exactly; symmetry-broken pairs are grown from
// any unstable symmetric solution (unstable-eigenvector steps, with chunked
// relaxation as fallback) and completed by their mirror partners.
std::vector<SemiclassicalSolution> all_solutions(const DimerParams& p);

struct ScanPoint {
    double uf = 0.0;
    std::vector<SemiclassicalSolution> solutions;
    std::string error;  // empty when the point converged
};

// Continuation scan over an ascending uf grid at fixed J, delta, gamma, U:
// each point is seeded from the previous point's branches and re-checked
// against the cubic enumeration so branch birth/death is never missed.
std::vector<ScanPoint> scan_branches(const DimerParams& base,
                                     const std::vector<double>& uf_grid);

// Locate a stability crossing (max Re lambda = 0) of the symmetric branch by
// bisection in uf.  The bracket must contain exactly one sign change.
double bifurcation_bisect(const DimerParams& base, double uf_lo, double uf_hi,
                          double tol = 1e-8);

struct FitResult {
    double A_c = 0.0;      // fitted threshold
    double exponent = 0.0;
    double amplitude = 0.0;
    double rms = 0.0;      // log-space residual
    int n_points = 0;
};

// Power-law fit y = A (x - A_c)^e with the threshold free: linear least
// squares in log-log space nested inside a 1-d search over A_c.  Points must
// lie on one side of the threshold; pass uf_c_guess beyond the data range on
// the appropriate side.  Throws InsufficientPoints (< 6 points) and
// FitDiverged (non-positive ordinates or no bracketed minimum).
FitResult fit_exponent(const std::vector<std::pair<double, double>>& points,
                       double uf_c_guess);

}  // namespace dimer

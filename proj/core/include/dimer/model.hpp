#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "dimer/errors.hpp"

namespace dimer {

using cplx = std::complex<double>;
using AmplitudePair = std::pair<cplx, cplx>;

// Two coupled bosonic modes with hopping J, Kerr interaction U, single-photon
// loss gamma, and antisymmetric coherent drive (+F on site 1, -F on site 2)
// at detuning delta from the bare mode frequency.  All rates in units of
// gamma unless gamma != 1 is set explicitly.
struct DimerParams {
    double J = 2.5;
    double delta = -1.5;
    double gamma = 1.0;
    double U = 1.0;
    double F = 0.0;

    void validate() const {
        if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
        if (!(U >= 0.0)) throw InvalidArgument("U must be >= 0");
        if (!(J > 0.0)) throw InvalidArgument("J must be > 0");
        if (!(F >= 0.0)) throw InvalidArgument("F must be real and >= 0");
    }

    // Build params at a given scaled drive uf = sqrt(U) F / gamma^{3/2}.
    static DimerParams at_uf(double J, double delta, double gamma, double U,
                             double uf) {
        if (!(U > 0.0)) throw InvalidArgument("at_uf requires U > 0");
        if (!(uf >= 0.0)) throw InvalidArgument("uf must be >= 0");
        DimerParams p;
        p.J = J;
        p.delta = delta;
        p.gamma = gamma;
        p.U = U;
        p.F = uf * std::pow(gamma, 1.5) / std::sqrt(U);
        p.validate();
        return p;
    }
};

struct RescaledDrive {
    double uf = 0.0;
};

// The dimensionless drive sqrt(U) F / gamma^{3/2}; the steady-state physics at
// U -> 0 depends on the drive only through this combination.
inline RescaledDrive rescale(const DimerParams& p) {
    p.validate();
    return {std::sqrt(p.U) * p.F / std::pow(p.gamma, 1.5)};
}

struct DetuningWindow {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = true;
    bool contains(double delta) const {
        return !empty && delta > lo && delta < hi;
    }
};

// Open interval of detunings for which a pair of symmetry-breaking
// bifurcations can exist: -J + sqrt(3) gamma / 2 < delta < J.
inline DetuningWindow symmetry_window(const DimerParams& p) {
    if (!(p.J > 0.0)) throw InvalidArgument("symmetry_window requires J > 0");
    DetuningWindow w;
    w.lo = -p.J + std::sqrt(3.0) * p.gamma / 2.0;
    w.hi = p.J;
    w.empty = !(w.lo < w.hi);
    return w;
}

// Mirror symmetry of the driven dimer: (a1, a2) -> (-a2, -a1).  Involution.
inline AmplitudePair z2_transform(const AmplitudePair& a) {
    return {-a.second, -a.first};
}

}  // namespace dimer

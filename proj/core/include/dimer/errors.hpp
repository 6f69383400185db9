#pragma once

#include <stdexcept>
#include <string>

namespace dimer {

// Base class for every failure the solvers can report.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error { using Error::Error; };

// numerics
struct SingularMatrix : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct AmbiguousKernel : Error { using Error::Error; };

// semiclassical
struct StepOverflow : Error { using Error::Error; };
struct FitDiverged : Error { using Error::Error; };
struct InsufficientPoints : Error { using Error::Error; };

// gaussian
struct SingularAtCriticality : Error { using Error::Error; };
struct Unphysical : Error { using Error::Error; };
struct NumericalDomain : Error { using Error::Error; };

// fockspace
struct ResidualDriveTooLarge : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct UnphysicalSpectrum : Error { using Error::Error; };

}  // namespace dimer

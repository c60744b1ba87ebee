#pragma once

#include <stdexcept>
#include <string>

namespace mate {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct PointNotOnBoundary : Error { using Error::Error; };
struct CornerPoint : Error { using Error::Error; };

// model
struct EvaluationFailure : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };
struct InversionDiverged : Error { using Error::Error; };
struct SingularMixedHessian : Error { using Error::Error; };
struct SyntaxError : Error {
    SyntaxError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};
struct UnknownIdentifier : Error { using Error::Error; };

// conditions
struct JetFailure : Error { using Error::Error; };
struct NegativeDensity : Error { using Error::Error; };
struct NonpositiveGamma : Error { using Error::Error; };

// discretize
struct ResolutionTooCoarse : Error { using Error::Error; };

// solver
struct EllipticityLoss : Error { using Error::Error; };
struct NonpositiveB : Error { using Error::Error; };
struct SingularW : Error { using Error::Error; };
struct LinearSolveFailure : Error { using Error::Error; };
struct MaxIterations : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct NoEllipticSeed : Error { using Error::Error; };
struct ContinuationStalled : Error { using Error::Error; };

// verify
struct GridMismatch : Error { using Error::Error; };

// cli
struct ConfigError : Error { using Error::Error; };

}  // namespace mate

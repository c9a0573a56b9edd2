#ifndef ANISOSTABLE_ERRORS_HPP
#define ANISOSTABLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace astab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// model validation
struct DegenerateMeasure : Error { using Error::Error; };
struct NonUnitDirection : Error { using Error::Error; };
struct NegativeWeight : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// operation domains
struct DomainError : Error { using Error::Error; };
struct OriginSingularity : Error { using Error::Error; };
struct SupportHit : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };
struct NondegeneracyViolated : Error { using Error::Error; };

// numerics
struct GridTooCoarse : Error { using Error::Error; };
struct FitUnstable : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };

// simulation
struct BiasBudgetExceeded : Error { using Error::Error; };
struct StepLimitExceeded : Error { using Error::Error; };

} // namespace astab

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace stratwave {

// Base of every library error. name() is the stable identifier printed by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define STRATWAVE_ERROR(Cls)                                              \
    class Cls : public Error {                                            \
    public:                                                               \
        explicit Cls(const std::string& what) : Error(#Cls, what) {}      \
    };

STRATWAVE_ERROR(InvalidParameter)
STRATWAVE_ERROR(InvalidArgument)
STRATWAVE_ERROR(ShapeMismatch)
STRATWAVE_ERROR(Unsupported)
STRATWAVE_ERROR(ConnectednessViolation)
STRATWAVE_ERROR(NonFiniteMultiplier)
STRATWAVE_ERROR(SolverDivergence)
STRATWAVE_ERROR(NoRealRoots)
STRATWAVE_ERROR(OptimizationFailed)
STRATWAVE_ERROR(DegenerateAlpha)
STRATWAVE_ERROR(HyperbolicityLoss)
STRATWAVE_ERROR(CflViolation)
STRATWAVE_ERROR(SingularTimeOperator)
STRATWAVE_ERROR(CoefficientDegenerate)
STRATWAVE_ERROR(NoConvergence)
STRATWAVE_ERROR(StepTooLarge)

#undef STRATWAVE_ERROR

}  // namespace stratwave

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wscat {

// Every error names the operation it came from, so the CLI can report
// "<operation>: <message>" and pick the exit status from the category.
class Error : public std::runtime_error {
public:
    Error(std::string kind, std::string operation, const std::string& message);

    const std::string& kind() const noexcept { return kind_; }
    const std::string& operation() const noexcept { return operation_; }

private:
    std::string kind_;
    std::string operation_;
};

// Bad input: configuration, potential description, packet parameters.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A module could not produce a trustworthy number.
class NumericalError : public Error {
public:
    using Error::Error;
};

#define WSCAT_DEFINE_ERROR(Name, Base)                                        \
    class Name : public Base {                                                \
    public:                                                                   \
        Name(std::string operation, const std::string& message)              \
            : Base(#Name, std::move(operation), message) {}                   \
    }

WSCAT_DEFINE_ERROR(InvalidPotential, ValidationError);
WSCAT_DEFINE_ERROR(InvalidArgument, ValidationError);
WSCAT_DEFINE_ERROR(InvalidSlabWidth, ValidationError);
WSCAT_DEFINE_ERROR(InvalidPacketSpec, ValidationError);
WSCAT_DEFINE_ERROR(ConfigParseError, ValidationError);
WSCAT_DEFINE_ERROR(DegenerateEnergy, ValidationError);

WSCAT_DEFINE_ERROR(UnboundedTail, NumericalError);
WSCAT_DEFINE_ERROR(NodeAtOrigin, NumericalError);
WSCAT_DEFINE_ERROR(OdeStepFailure, NumericalError);
WSCAT_DEFINE_ERROR(ExtrapolationDivergence, NumericalError);
WSCAT_DEFINE_ERROR(ResonantDenominator, NumericalError);
WSCAT_DEFINE_ERROR(EvanescentOverflow, NumericalError);
WSCAT_DEFINE_ERROR(NotConverged, NumericalError);
WSCAT_DEFINE_ERROR(BoundaryLeak, NumericalError);
WSCAT_DEFINE_ERROR(SingularResolvent, NumericalError);

#undef WSCAT_DEFINE_ERROR

}  // namespace wscat

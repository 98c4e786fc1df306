#pragma once

#include <stdexcept>
#include <string>

namespace polling {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define POLLING_DEFINE_ERROR(NAME)                                 \
    struct NAME : Error {                                          \
        explicit NAME(const std::string& msg) : Error(msg) {}      \
    }

POLLING_DEFINE_ERROR(ParseError);
POLLING_DEFINE_ERROR(ParamError);
POLLING_DEFINE_ERROR(StabilityError);
POLLING_DEFINE_ERROR(DomainError);
POLLING_DEFINE_ERROR(MissingInputError);
POLLING_DEFINE_ERROR(ConvergenceError);
POLLING_DEFINE_ERROR(UnsupportedDiscipline);
POLLING_DEFINE_ERROR(SingularityError);
POLLING_DEFINE_ERROR(InversionError);
POLLING_DEFINE_ERROR(InsufficientSamples);
POLLING_DEFINE_ERROR(UnknownProbe);
POLLING_DEFINE_ERROR(DivergenceError);

#undef POLLING_DEFINE_ERROR

}  // namespace polling

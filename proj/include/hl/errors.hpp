#pragma once

#include <stdexcept>
#include <string>

namespace hl {

// Exit-code class used by the command line front end.
enum class ErrorClass { Domain = 1, Numerical = 2, RedFlag = 3 };

class Error : public std::runtime_error {
public:
    Error(const std::string& what, ErrorClass cls) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }

private:
    ErrorClass cls_;
};

#define HL_ERROR(Name, Cls)                                                   \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& w) : Error(#Name ": " + w, Cls) {}   \
    }

HL_ERROR(DomainError, ErrorClass::Domain);
HL_ERROR(ConfigError, ErrorClass::Domain);
HL_ERROR(GaugeMismatch, ErrorClass::Domain);
HL_ERROR(NegativeInput, ErrorClass::Domain);
HL_ERROR(MonotonicityViolation, ErrorClass::Domain);
HL_ERROR(GeometryError, ErrorClass::Domain);
HL_ERROR(IoError, ErrorClass::Domain);
HL_ERROR(NoHatR, ErrorClass::Numerical);
HL_ERROR(NoConvergence, ErrorClass::Numerical);
HL_ERROR(DivergentFactor, ErrorClass::Numerical);
HL_ERROR(BracketFailure, ErrorClass::Numerical);
HL_ERROR(RedFlag, ErrorClass::RedFlag);

#undef HL_ERROR

}  // namespace hl

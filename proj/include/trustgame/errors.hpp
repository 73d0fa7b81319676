#pragma once

#include <stdexcept>
#include <string>

namespace trustgame {

// Parameter validation failures. `field` names the offending primitive.
class ValidationError : public std::runtime_error {
public:
    enum class Code { NonPositiveParam, EffortNeverWorthwhile, BadField };

    ValidationError(Code code, std::string field, const std::string& what)
        : std::runtime_error(what), code_(code), field_(std::move(field)) {}

    Code code() const { return code_; }
    const std::string& field() const { return field_; }

private:
    Code code_;
    std::string field_;
};

class WrongDirection : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Travel to an absorbing endpoint never terminates; callers must handle
// absorbing states explicitly instead of receiving +inf.
class InfiniteTravel : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DegenerateSpread : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class BadBracket : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class StepTooCoarse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class HorizonTooShort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace trustgame

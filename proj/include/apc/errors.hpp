#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace apc {

/// Input breaks a structural invariant (non-bijective image array, mixed
/// alphabet sizes, malformed file, ...). Carries the first offending value
/// when there is a natural one.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
    validation_error(const std::string& msg, long long offending)
        : std::invalid_argument(msg), offending_(offending) {}

    std::optional<long long> offending() const { return offending_; }

private:
    std::optional<long long> offending_;
};

/// Request exceeds a hard size cap; the message names the bound.
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters admit no positive-rate code. Carries the rate deficit.
class infeasible_error : public std::runtime_error {
public:
    infeasible_error(const std::string& msg, double deficit)
        : std::runtime_error(msg), deficit_(deficit) {}

    double deficit() const { return deficit_; }

private:
    double deficit_;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace apc

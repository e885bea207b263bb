#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subsync {

enum class Errc {
    InvalidEdit,
    InvalidDensityConfig,
    BallTooLarge,
    OracleTooLarge,
    NotDense,
    NotSeparable,
    LabelingUnsound,
    NoCandidate,
    Ambiguous,
    FormatError,
    ConfigError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every library failure is reported through this exception; code() names the condition.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace subsync

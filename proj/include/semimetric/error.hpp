#pragma once

#include <stdexcept>
#include <string>

namespace semimetric {

enum class Errc {
    empty_input,
    contract_violation,
    invalid_sigma,
    out_of_range,
    not_metric,
    invalid_argument,
    config,
    io,
};

inline const char* to_string(Errc code)
{
    switch (code) {
    case Errc::empty_input: return "empty input";
    case Errc::contract_violation: return "contract violation";
    case Errc::invalid_sigma: return "invalid sigma";
    case Errc::out_of_range: return "out of range";
    case Errc::not_metric: return "not a metric";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::config: return "configuration error";
    case Errc::io: return "i/o error";
    }
    return "unknown error";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace semimetric

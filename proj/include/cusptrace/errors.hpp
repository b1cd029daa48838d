#pragma once

#include <stdexcept>
#include <string>

namespace cusptrace {

// Exit-code taxonomy used by the CLI: parse errors exit 2, numerical
// failures exit 3, invariant/admission failures exit 4.

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct AdmissionError : std::runtime_error {
    explicit AdmissionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cusptrace

// error.hpp — Error types and warning sink shared by every module

#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace usqed {

// Numerical failure with a machine-readable payload; the CLI maps it to exit 3.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string kind, const std::string& message,
                   std::map<std::string, std::string> details = {})
        : std::runtime_error(message), kind_(std::move(kind)), details_(std::move(details)) {}

    const std::string& kind() const noexcept { return kind_; }
    const std::map<std::string, std::string>& details() const noexcept { return details_; }

private:
    std::string kind_;
    std::map<std::string, std::string> details_;
};

// Writes "[usqed] warning: <msg>" to stderr.
void warn(const std::string& message);

// Fixed "%.12e" rendering used in error payloads and CSV output.
std::string format_double(double value);

} // namespace usqed

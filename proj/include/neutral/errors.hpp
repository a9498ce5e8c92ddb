#ifndef NEUTRAL_ERRORS_HPP
#define NEUTRAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace neutral {

// Validation problems (bad scenario / bad arguments) map to CLI exit code 2,
// numerical failures (singular systems, under-resolved quadrature, failed
// brackets) to exit code 3.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }
private:
    std::string code_;
};

class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }
private:
    std::string code_;
};

} // namespace neutral

#endif

#ifndef QOSC_ERRORS_HPP
#define QOSC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qosc {

// Exit codes used by the command-line driver. Library code throws; the driver maps.
enum ExitCode {
    kExitOk = 0,
    kExitConfigParse = 2,
    kExitValidation = 3,
    kExitNumerical = 4,
    kExitIo = 5,
};

// Bad value in a config file (syntax, unknown key, malformed sweep).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Physically or structurally invalid parameters.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Lasing behavior requested below threshold.
struct NotLasingError : ValidationError {
    explicit NotLasingError(const std::string& msg) : ValidationError(msg) {}
};

// Numerical failure: evaluation on a pole, missing bracket, non-convergence, ...
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PoleError : NumericalError {
    explicit PoleError(const std::string& msg) : NumericalError(msg) {}
};

struct NoCutoffError : NumericalError {
    explicit NoCutoffError(const std::string& msg) : NumericalError(msg) {}
};

// Group delay came out non-positive for a profile peaked at the carrier.
struct CausalityError : NumericalError {
    explicit CausalityError(const std::string& msg) : NumericalError(msg) {}
};

// Grid too coarse for the requested transform.
struct ResolutionError : NumericalError {
    explicit ResolutionError(const std::string& msg) : NumericalError(msg) {}
};

// Spectrum shape does not match the assumption baked into the chosen method.
struct MethodMismatchError : NumericalError {
    explicit MethodMismatchError(const std::string& msg) : NumericalError(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qosc

#endif

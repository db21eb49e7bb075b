#ifndef JOINTSEG_ERRORS_HPP
#define JOINTSEG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jointseg {

/// A precondition on an argument value does not hold (infeasible K, bad k_max, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Shapes of the inputs disagree (lengths, series counts, breakpoint layouts).
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed user input: dataset rows or config entries. Carries the offending
/// line (1-based, header is line 1) when one applies, 0 otherwise.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Non-finite data reached a numerical routine, or a fit could not be produced.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace jointseg

#endif  // JOINTSEG_ERRORS_HPP

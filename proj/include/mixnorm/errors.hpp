#pragma once

#include <stdexcept>
#include <string>

namespace mixnorm {

/// Bad arguments or inputs that violate an operation's preconditions.
struct InvalidInput : std::invalid_argument {
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed field file; carries the byte offset at which parsing failed.
struct FormatError : std::runtime_error {
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (byte offset " + std::to_string(offset) + ")"),
          byte_offset(offset) {}
    std::size_t byte_offset;
};

/// A scale too small to contain any voxel centers.
struct DegenerateScale : std::invalid_argument {
    explicit DegenerateScale(const std::string& what) : std::invalid_argument(what) {}
};

/// Test function with vanishing norm in a duality quotient.
struct DegenerateTestFunction : std::invalid_argument {
    explicit DegenerateTestFunction(const std::string& what) : std::invalid_argument(what) {}
};

/// Time step rejected by the CFL bounds; carries the admissible step.
struct StepRejected : std::runtime_error {
    StepRejected(const std::string& what, double admissible)
        : std::runtime_error(what), admissible_dt(admissible) {}
    double admissible_dt;
};

/// Calibration could not be performed (degenerate trial family, etc.).
struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mixnorm

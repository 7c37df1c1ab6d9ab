#pragma once

#include <optional>
#include <string>
#include <variant>

#include "mixnorm/field.hpp"

namespace mixnorm {

/// BSF1 field file:
///   bytes 0-3   magic "BSF1"
///   byte  4     version = 1
///   byte  5     ncomp in {1,3}
///   bytes 6-7   reserved, zero
///   3 x u32 LE  nx, ny, nz (all equal)
///   f64 LE      box length L
///   ncomp*n^3 f64 LE samples, x-fastest, components consecutive.
void write_field(const ScalarField& f, const std::string& path);
void write_field(const VectorField& u, const std::string& path);

using AnyField = std::variant<ScalarField, VectorField>;

AnyField read_field(const std::string& path);

ScalarField read_scalar_field(const std::string& path);
VectorField read_vector_field(const std::string& path);

}  // namespace mixnorm

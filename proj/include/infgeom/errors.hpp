#pragma once

#include <stdexcept>
#include <string>

namespace infgeom {

// Malformed input: unparsable expressions, bad JSON, out-of-range parameters,
// analytic primitives requested in exact mode.
class input_error : public std::invalid_argument {
 public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A mathematical precondition does not hold at the requested point:
// singular metric, improper tangent, division by zero at the base point,
// primitive evaluated outside its domain, singular Jacobian.
class precondition_error : public std::domain_error {
 public:
  explicit precondition_error(const std::string& what) : std::domain_error(what) {}
};

// Operands belong to different Weil algebras.
class algebra_mismatch : public std::logic_error {
 public:
  explicit algebra_mismatch(const std::string& what) : std::logic_error(what) {}
};

}  // namespace infgeom

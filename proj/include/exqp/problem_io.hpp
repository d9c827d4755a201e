#pragma once

#include <string>

#include "exqp/model.hpp"

namespace exqp {

/// Parses the JSON problem format. Throws Error with a description for
/// malformed input (bad JSON, asymmetric matrices, dimension mismatches,
/// cpp with n > 4).
Problem parse_problem(const std::string& text);

/// Serializes to the same format; parse(serialize(p)) reproduces p.
std::string serialize_problem(const Problem& prob, int indent = 2);

/// Loose equality on the canonical form (entrywise exact by default).
bool problems_equal(const Problem& a, const Problem& b, double tol = 0.0);

}  // namespace exqp

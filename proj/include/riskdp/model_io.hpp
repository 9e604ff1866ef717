#pragma once

#include <iosfwd>
#include <string>

#include "riskdp/mdp.hpp"

namespace riskdp {

/**
 * JSON model document:
 *   {
 *     "states": int, "actions": int,
 *     "admissible": [[int...] per state],
 *     "transitions": [{"x": int, "a": int, "x2": int, "p": number}...],
 *     "costs": [{"x": int, "a": int, "c": number}...],
 *     "absorbing": [int...]            // optional
 *   }
 * Structural problems raise std::runtime_error naming the source and the
 * offending record index; the returned model additionally passes
 * validate_model (violations are reported the same way).
 */
FiniteMdp load_model_json(std::istream& in, const std::string& source_name = "<stream>");
FiniteMdp load_model_file(const std::string& path);

/// Inverse of load_model_json; rows are emitted in (x, a, x2) order so equal
/// models serialize identically.
void write_model_json(std::ostream& out, const FiniteMdp& mdp);

}  // namespace riskdp

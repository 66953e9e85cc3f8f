#pragma once

#include <string>

#include "cavsat/formula.hpp"

namespace cavsat {

/// Parses DIMACS CNF text. Comment lines ("c ...") are ignored; variables
/// are converted to 0-based indices. Throws ParseError on a malformed
/// header, an out-of-range literal, or a clause missing its terminating 0.
Formula parse_dimacs(const std::string& text);

/// Serializes a formula as DIMACS CNF (1-based, sign encodes negation).
/// parse_dimacs(write_dimacs(f)) == f.
std::string write_dimacs(const Formula& f, const std::string& comment = "");

Formula read_dimacs_file(const std::string& path);
void write_dimacs_file(const Formula& f, const std::string& path, const std::string& comment = "");

}  // namespace cavsat

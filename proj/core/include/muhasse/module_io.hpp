#pragma once

// Plain-text module format:
//
//   # comment
//   ell=3
//   a=1
//   b=2
//   r=1
//   k=1
//   N=13          (optional, defaults to the precision bound)
//   A:
//   <(a+b)r rows of (a+b)r elements>
//   B:            (optional, otherwise derived from the pairing)
//   <rows>
//
// An element is its 2k polynomial coefficients in [0, ell^N), comma-separated
// without spaces. Tokens are separated by arbitrary whitespace.

#include <optional>
#include <string>
#include <string_view>

#include "muhasse/dieudonne.hpp"

namespace muhasse {

struct ModuleFile {
  PelParams params;
  Matrix<RingElement> a;
  std::optional<Matrix<RingElement>> b;
};

/// Throws ParseError (with line and column) on malformed input and
/// InvalidParameters on an unsupported header.
ModuleFile parse_module_file(std::string_view text, bool allow_degenerate = false);

DieudonneModule build_module(const ModuleFile& file);
DieudonneModule read_module(std::string_view text, bool allow_degenerate = false);

std::string write_module(const DieudonneModule& module);
/// N = 1 file carrying only Ā; it rebuilds to the same BT₁ module.
std::string write_bt1_module(const PelParams& params, const FiniteField& field, const Matrix<Residue>& a);

}  // namespace muhasse

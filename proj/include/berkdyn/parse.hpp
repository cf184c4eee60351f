#pragma once

#include <map>
#include <string>

#include "berkdyn/rational_map.hpp"

namespace berkdyn {

// Expression grammar shared by map, scalar, and point text:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | factor
//   factor := atom ('^' exponent)?
//   atom   := NUMBER | 'z' | 'Id' | 'i' | 'p' | 't' | '(' expr ')' | list
//   list   := '[' expr (',' expr)* ']'        (coefficients, ascending)
// 'z' and 'Id' are the coordinate; 'i' the imaginary unit (complex backend);
// 'p' and 't' the uniformizer (non-archimedean backends). A list [c0,c1,...]
// denotes the polynomial sum c_k z^k. Division builds a rational function;
// the numerator/denominator pair is handed to the map constructor untouched,
// so common factors surface as a degenerate-lift error rather than being
// cancelled silently.

// Full expression as a rational map (constants allowed).
RationalMap parse_map(const Backend& be, const std::string& text,
                      std::int64_t degree_budget = kDefaultDegreeBudget);

// Expression that must evaluate to a constant.
Scalar parse_scalar(const Backend& be, const std::string& text);

// "inf" or a scalar expression (affine coordinate).
ProjectivePoint parse_point(const Backend& be, const std::string& text);

// "pt(<scalar>)", "disk(<scalar>,<vlog-radius>)", "gauss", "inf", or a bare
// scalar expression meaning the classical point.
BerkPoint parse_berk_point(const Backend& be, const std::string& text);

// Flat key-value configuration with [section] headers, '#' comments, and
// 'key = value' lines; keys are stored as "section.key".
struct Config {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
};

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

}  // namespace berkdyn

#pragma once

#include <string>

#include "swanlab/datum_rules.hpp"
#include "swanlab/local_field.hpp"

namespace swanlab {

// Rendering of residue-field data. Coefficients print as integers when
// f = 1 and as powers of the multiplicative generator ("g", "g^5")
// otherwise; polynomials print low to high ("1+2*s+s^3"); a rational
// function with nontrivial denominator prints as "(num)/(den)". The
// expression parsers below read every rendering back.
std::string fq_str(const FqPtr& F, Fq::Elem a);
std::string poly_str(const FqPoly& a);
std::string ratfun_str(const RatFun& a);

// A form prints as its ds/s coefficient ("0" for the zero form).
std::string diff_str(const DiffForm& w);

// Expression grammar shared by both element domains:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := atom ('^' ['-'] integer)?
//   atom   := integer | symbol | '(' expr ')' | '-' factor
// Residue expressions know the symbols s and g; local-field expressions
// additionally know pi[t] (t a rational literal), zeta_p, and zeta_p2.
// Whitespace is ignored. Failures throw InvalidInput with the offending
// position; zeta_p2 over a depth-1 constant field is rejected the same way.
RatFun parse_ratfun(const FqPtr& F, const std::string& text);
DiffForm parse_diff(const FqPtr& F, const std::string& text);
LocElem parse_loc_expr(const ConstFieldPtr& k, const std::string& text);

// Datum serialization:
//   {"p":3,"pairs":[{"delta":"3/2","omega":"s"},...]}
// with omega encoded by its ds/s coefficient. parse_ram_datum inverts
// ram_datum_json exactly on valid data.
std::string ram_datum_json(const RamDatum& d);
RamDatum parse_ram_datum(const FqPtr& F, const std::string& text);

// {"pass":bool,"conditions":[{"clause":"iii.d","pass":bool,"witness":...}]}
std::string report_json(const ValidationReport& r);

}  // namespace swanlab

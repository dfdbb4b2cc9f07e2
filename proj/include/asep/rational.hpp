#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace asep {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a finite decimal ("0.125", "-3e-2") exactly.
Rational parse_rational(std::string_view text);

/// True when `text` looks like a fraction "p/q" rather than a decimal.
bool is_fraction_literal(std::string_view text);

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

Rational pow_int(const Rational& base, int exponent);

std::string to_string(const Rational& x);

}  // namespace asep

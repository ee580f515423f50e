#ifndef METASTAB_RATIONAL_HPP
#define METASTAB_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace metastab {

// Exact rational scalar used throughout the leading-order calculus and the
// rational linear algebra. GMP keeps coefficients canonical and unbounded.
using Rational = mpq_class;

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Parses "p/q", "p", "a.b" or "a.b/c.d" into an exact rational.
// Decimal literals convert exactly (no binary rounding).
Rational rational_from_string(const std::string& text);

// Canonical "p/q" form; integers print without the "/1".
std::string rational_to_string(const Rational& q);

}  // namespace metastab

#endif

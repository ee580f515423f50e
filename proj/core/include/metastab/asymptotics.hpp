#ifndef METASTAB_ASYMPTOTICS_HPP
#define METASTAB_ASYMPTOTICS_HPP

#include <map>
#include <string>
#include <vector>

#include "metastab/rational.hpp"

namespace metastab {

// Growth law of a scale generator, used only for numeric evaluation.
//   ExpPow: exp(scale * eps^-power)
//   Pow:    eps^-power
//   Log:    ln(1/eps)
enum class GrowthKind { ExpPow, Pow, Log };

struct ScaleGenerator {
  std::string name;
  GrowthKind kind = GrowthKind::Pow;
  Rational scale = 1;  // ExpPow only
  Rational power = 1;  // ExpPow, Pow
  // Largest eps for which growth(eps) > 1 is guaranteed.
  double eps_max() const;
  // ln(growth(eps)); evaluation works in log space throughout.
  double log_growth(double eps) const;
};

// Ordered list of generators. Declaration order is the strict domination
// order: any positive power of an earlier generator dominates any power of
// later ones. Names must be unique.
class ScaleBasis {
 public:
  // exp_inv_eps_sq > exp_inv_eps > inv_eps > log_inv_eps
  static ScaleBasis standard();

  explicit ScaleBasis(std::vector<ScaleGenerator> generators);

  int size() const { return static_cast<int>(generators_.size()); }
  const ScaleGenerator& generator(int index) const { return generators_[index]; }
  // -1 when the name is unknown.
  int index_of(const std::string& name) const;

 private:
  std::vector<ScaleGenerator> generators_;
};

// Direction of the ratio limit a/b as eps -> 0.
enum class Comparison { MuchSmaller, Commensurate, MuchLarger };

// lim a/b in [0, infinity]: Zero, a positive rational, or Infinite.
class RatioLimit {
 public:
  enum class Kind { Zero, Finite, Infinite };

  static RatioLimit zero() { return RatioLimit(Kind::Zero, 0); }
  static RatioLimit finite(Rational value);
  static RatioLimit infinite() { return RatioLimit(Kind::Infinite, 0); }

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  // Finite only.
  const Rational& value() const;

 private:
  RatioLimit(Kind kind, Rational value) : kind_(kind), value_(std::move(value)) {}
  Kind kind_;
  Rational value_;
};

// A positive leading-order monomial coeff * prod_k g_k(eps)^e_k over an
// ordered basis, or the absorbing Zero. Exponents are exact rationals keyed by
// generator index; zero exponents are never stored. Two scalars with equal
// exponent maps are commensurate by definition.
class AsymptoticScalar {
 public:
  // Zero element.
  AsymptoticScalar() : zero_(true), coeff_(0) {}
  // Constant c > 0 (empty exponent map).
  explicit AsymptoticScalar(Rational coeff);
  AsymptoticScalar(Rational coeff, std::map<int, Rational> exponents);

  static AsymptoticScalar zero() { return AsymptoticScalar(); }
  static AsymptoticScalar one() { return AsymptoticScalar(Rational(1)); }

  bool is_zero() const { return zero_; }
  const Rational& coeff() const { return coeff_; }
  const std::map<int, Rational>& exponents() const { return exponents_; }

  bool operator==(const AsymptoticScalar& other) const;
  bool operator!=(const AsymptoticScalar& other) const { return !(*this == other); }

 private:
  bool zero_;
  Rational coeff_;
  std::map<int, Rational> exponents_;
};

// Surface grammar:
//   expr     := rational ( '*' factor )* | factor ( '*' factor )*
//   factor   := ident ( '^' rational )?
//   rational := p | p/q | decimal (exact), exponents may be negative
// "eps" is sugar for inv_eps^-1; "0" parses to Zero.
AsymptoticScalar parse_scale(const ScaleBasis& basis, const std::string& text);

// Canonical text in the same grammar; round-trips through parse_scale.
std::string to_string(const ScaleBasis& basis, const AsymptoticScalar& a);

AsymptoticScalar mul(const AsymptoticScalar& a, const AsymptoticScalar& b);
// b must be nonzero.
AsymptoticScalar div(const AsymptoticScalar& a, const AsymptoticScalar& b);

// Leading-order sum: the dominant exponent map wins; coefficients of all
// terms sharing it add exactly. Zero is the identity.
AsymptoticScalar add(const std::vector<AsymptoticScalar>& terms);
AsymptoticScalar add(const AsymptoticScalar& a, const AsymptoticScalar& b);

Comparison compare(const AsymptoticScalar& a, const AsymptoticScalar& b);
// b must be nonzero.
RatioLimit limit_ratio(const AsymptoticScalar& a, const AsymptoticScalar& b);

bool much_smaller(const AsymptoticScalar& a, const AsymptoticScalar& b);
bool commensurate(const AsymptoticScalar& a, const AsymptoticScalar& b);

// coeff * prod growth(g_k, eps)^e_k computed in log space. Requires
// 0 < eps < eps_max of every generator with nonzero exponent and a result
// within double range.
double evaluate(const ScaleBasis& basis, const AsymptoticScalar& a, double eps);

class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace metastab

#endif

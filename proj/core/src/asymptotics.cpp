#include "metastab/asymptotics.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace metastab {

namespace {

bool is_integer_string(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

// Exact conversion of an integer or decimal literal; "1.25" -> 5/4.
Rational decimal_to_rational(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    if (!is_integer_string(s)) throw ParseError("malformed rational: '" + s + "'");
    return Rational(mpz_class(s));
  }
  std::string head = s.substr(0, dot);
  std::string frac = s.substr(dot + 1);
  bool negative = !head.empty() && head[0] == '-';
  if (negative || (!head.empty() && head[0] == '+')) head = head.substr(1);
  if (head.empty()) head = "0";
  if (frac.empty() || !is_integer_string(head) || !is_integer_string(frac))
    throw ParseError("malformed rational: '" + s + "'");
  mpz_class scale = 1;
  for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
  mpz_class num = mpz_class(head) * scale + mpz_class(frac);
  Rational q(num, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational rational_from_string(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return decimal_to_rational(text);
  Rational num = decimal_to_rational(text.substr(0, slash));
  Rational den = decimal_to_rational(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + text + "'");
  Rational q = num / den;
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) {
  return q.get_str();
}

double ScaleGenerator::eps_max() const {
  switch (kind) {
    case GrowthKind::ExpPow:
    case GrowthKind::Pow:
      return 1.0;
    case GrowthKind::Log:
      return 1.0 / std::exp(1.0);
  }
  return 1.0;
}

double ScaleGenerator::log_growth(double eps) const {
  switch (kind) {
    case GrowthKind::ExpPow:
      return scale.get_d() * std::pow(eps, -power.get_d());
    case GrowthKind::Pow:
      return power.get_d() * std::log(1.0 / eps);
    case GrowthKind::Log:
      return std::log(std::log(1.0 / eps));
  }
  return 0.0;
}

ScaleBasis ScaleBasis::standard() {
  return ScaleBasis({
      {"exp_inv_eps_sq", GrowthKind::ExpPow, Rational(1), Rational(2)},
      {"exp_inv_eps", GrowthKind::ExpPow, Rational(1), Rational(1)},
      {"inv_eps", GrowthKind::Pow, Rational(1), Rational(1)},
      {"log_inv_eps", GrowthKind::Log, Rational(1), Rational(1)},
  });
}

ScaleBasis::ScaleBasis(std::vector<ScaleGenerator> generators)
    : generators_(std::move(generators)) {
  std::set<std::string> seen;
  for (const auto& g : generators_) {
    if (g.name.empty()) throw ParseError("basis generator with empty name");
    if (!seen.insert(g.name).second)
      throw ParseError("duplicate basis generator '" + g.name + "'");
    if (g.kind == GrowthKind::ExpPow && (g.scale <= 0 || g.power <= 0))
      throw ParseError("exp_pow generator '" + g.name + "' needs positive scale and power");
    if (g.kind == GrowthKind::Pow && g.power <= 0)
      throw ParseError("pow generator '" + g.name + "' needs positive power");
  }
}

int ScaleBasis::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (generators_[i].name == name) return i;
  return -1;
}

RatioLimit RatioLimit::finite(Rational value) {
  if (value <= 0) throw std::invalid_argument("finite ratio limit must be positive");
  return RatioLimit(Kind::Finite, std::move(value));
}

const Rational& RatioLimit::value() const {
  if (kind_ != Kind::Finite)
    throw std::logic_error("RatioLimit::value on a non-finite limit");
  return value_;
}

AsymptoticScalar::AsymptoticScalar(Rational coeff) : zero_(false), coeff_(std::move(coeff)) {
  if (coeff_ <= 0) throw std::invalid_argument("scale coefficient must be positive");
}

AsymptoticScalar::AsymptoticScalar(Rational coeff, std::map<int, Rational> exponents)
    : zero_(false), coeff_(std::move(coeff)), exponents_(std::move(exponents)) {
  if (coeff_ <= 0) throw std::invalid_argument("scale coefficient must be positive");
  for (auto it = exponents_.begin(); it != exponents_.end();) {
    if (it->second == 0)
      it = exponents_.erase(it);
    else
      ++it;
  }
}

bool AsymptoticScalar::operator==(const AsymptoticScalar& other) const {
  if (zero_ != other.zero_) return false;
  if (zero_) return true;
  return coeff_ == other.coeff_ && exponents_ == other.exponents_;
}

namespace {

// Lexicographic comparison of exponent maps in basis order (missing = 0).
// Positive result means a dominates b as eps -> 0.
int lex_compare(const std::map<int, Rational>& a, const std::map<int, Rational>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    int key;
    if (ia == a.end())
      key = ib->first;
    else if (ib == b.end())
      key = ia->first;
    else
      key = std::min(ia->first, ib->first);
    Rational ea = (ia != a.end() && ia->first == key) ? ia->second : Rational(0);
    Rational eb = (ib != b.end() && ib->first == key) ? ib->second : Rational(0);
    if (ea != eb) return ea > eb ? 1 : -1;
    if (ia != a.end() && ia->first == key) ++ia;
    if (ib != b.end() && ib->first == key) ++ib;
  }
  return 0;
}

struct Token {
  enum Kind { Number, Ident, Star, Caret, End } kind;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(const std::string& input) : input_(input) {}

  Token next() {
    while (pos_ < input_.size() && std::isspace(static_cast<unsigned char>(input_[pos_]))) ++pos_;
    if (pos_ >= input_.size()) return {Token::End, ""};
    char c = input_[pos_];
    if (c == '*') {
      ++pos_;
      return {Token::Star, "*"};
    }
    if (c == '^') {
      ++pos_;
      return {Token::Caret, "^"};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < input_.size() &&
             (std::isalnum(static_cast<unsigned char>(input_[pos_])) || input_[pos_] == '_'))
        ++pos_;
      return {Token::Ident, input_.substr(start, pos_ - start)};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
      size_t start = pos_;
      if (c == '-') ++pos_;
      bool any = false;
      auto eat_decimal = [&] {
        while (pos_ < input_.size() &&
               (std::isdigit(static_cast<unsigned char>(input_[pos_])) || input_[pos_] == '.')) {
          any = true;
          ++pos_;
        }
      };
      eat_decimal();
      if (pos_ < input_.size() && input_[pos_] == '/') {
        ++pos_;
        eat_decimal();
      }
      if (!any) throw ParseError("malformed rational in scale expression");
      return {Token::Number, input_.substr(start, pos_ - start)};
    }
    throw ParseError(std::string("unexpected character '") + c + "' in scale expression");
  }

 private:
  const std::string& input_;
  size_t pos_ = 0;
};

}  // namespace

AsymptoticScalar parse_scale(const ScaleBasis& basis, const std::string& text) {
  Lexer lexer(text);
  Token tok = lexer.next();
  if (tok.kind == Token::End) throw ParseError("empty scale expression");

  Rational coeff = 1;
  std::map<int, Rational> exps;
  bool saw_zero = false;

  auto apply_factor = [&](const std::string& ident, const Rational& power) {
    int idx;
    Rational p = power;
    if (ident == "eps") {
      idx = basis.index_of("inv_eps");
      if (idx < 0) throw ParseError("'eps' sugar needs an inv_eps generator in the basis");
      p = -p;
    } else {
      idx = basis.index_of(ident);
      if (idx < 0) throw ParseError("unknown identifier '" + ident + "'");
    }
    exps[idx] += p;
  };

  bool expect_factor = false;
  bool after_factor = false;
  if (tok.kind == Token::Number) {
    Rational c = rational_from_string(tok.text);
    if (c == 0)
      saw_zero = true;
    else if (c < 0)
      throw ParseError("non-positive coefficient in '" + text + "'");
    else
      coeff = c;
    tok = lexer.next();
    after_factor = true;
  }
  while (tok.kind != Token::End) {
    if (tok.kind == Token::Star) {
      if (expect_factor) throw ParseError("doubled '*' in scale expression '" + text + "'");
      tok = lexer.next();
      expect_factor = true;
      continue;
    }
    if (tok.kind != Token::Ident)
      throw ParseError("expected identifier in scale expression '" + text + "'");
    if (after_factor && !expect_factor)
      throw ParseError("missing '*' between factors in '" + text + "'");
    std::string ident = tok.text;
    Rational power = 1;
    tok = lexer.next();
    if (tok.kind == Token::Caret) {
      tok = lexer.next();
      if (tok.kind != Token::Number)
        throw ParseError("expected rational exponent after '^' in '" + text + "'");
      power = rational_from_string(tok.text);
      tok = lexer.next();
    }
    apply_factor(ident, power);
    expect_factor = false;
    after_factor = true;
  }
  if (expect_factor) throw ParseError("dangling '*' in scale expression '" + text + "'");
  if (saw_zero) {
    if (!exps.empty()) throw ParseError("zero coefficient in '" + text + "'");
    return AsymptoticScalar::zero();
  }
  return AsymptoticScalar(coeff, std::move(exps));
}

std::string to_string(const ScaleBasis& basis, const AsymptoticScalar& a) {
  if (a.is_zero()) return "0";
  std::ostringstream out;
  bool printed = false;
  if (a.coeff() != 1 || a.exponents().empty()) {
    out << rational_to_string(a.coeff());
    printed = true;
  }
  for (const auto& [index, power] : a.exponents()) {
    if (printed) out << "*";
    out << basis.generator(index).name;
    if (power != 1) out << "^" << rational_to_string(power);
    printed = true;
  }
  return out.str();
}

AsymptoticScalar mul(const AsymptoticScalar& a, const AsymptoticScalar& b) {
  if (a.is_zero() || b.is_zero()) return AsymptoticScalar::zero();
  std::map<int, Rational> exps = a.exponents();
  for (const auto& [index, power] : b.exponents()) exps[index] += power;
  return AsymptoticScalar(a.coeff() * b.coeff(), std::move(exps));
}

AsymptoticScalar div(const AsymptoticScalar& a, const AsymptoticScalar& b) {
  if (b.is_zero()) throw std::domain_error("division by the Zero scale");
  if (a.is_zero()) return AsymptoticScalar::zero();
  std::map<int, Rational> exps = a.exponents();
  for (const auto& [index, power] : b.exponents()) exps[index] -= power;
  return AsymptoticScalar(a.coeff() / b.coeff(), std::move(exps));
}

AsymptoticScalar add(const std::vector<AsymptoticScalar>& terms) {
  const AsymptoticScalar* leader = nullptr;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    if (leader == nullptr || lex_compare(t.exponents(), leader->exponents()) > 0) leader = &t;
  }
  if (leader == nullptr) return AsymptoticScalar::zero();
  Rational coeff = 0;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    if (lex_compare(t.exponents(), leader->exponents()) == 0) coeff += t.coeff();
  }
  return AsymptoticScalar(coeff, leader->exponents());
}

AsymptoticScalar add(const AsymptoticScalar& a, const AsymptoticScalar& b) {
  return add(std::vector<AsymptoticScalar>{a, b});
}

Comparison compare(const AsymptoticScalar& a, const AsymptoticScalar& b) {
  if (a.is_zero() && b.is_zero()) return Comparison::Commensurate;
  if (a.is_zero()) return Comparison::MuchSmaller;
  if (b.is_zero()) return Comparison::MuchLarger;
  int c = lex_compare(a.exponents(), b.exponents());
  if (c < 0) return Comparison::MuchSmaller;
  if (c > 0) return Comparison::MuchLarger;
  return Comparison::Commensurate;
}

RatioLimit limit_ratio(const AsymptoticScalar& a, const AsymptoticScalar& b) {
  if (b.is_zero()) throw std::domain_error("limit_ratio with Zero denominator");
  if (a.is_zero()) return RatioLimit::zero();
  switch (compare(a, b)) {
    case Comparison::MuchSmaller:
      return RatioLimit::zero();
    case Comparison::MuchLarger:
      return RatioLimit::infinite();
    case Comparison::Commensurate:
      return RatioLimit::finite(a.coeff() / b.coeff());
  }
  return RatioLimit::zero();
}

bool much_smaller(const AsymptoticScalar& a, const AsymptoticScalar& b) {
  return compare(a, b) == Comparison::MuchSmaller;
}

bool commensurate(const AsymptoticScalar& a, const AsymptoticScalar& b) {
  return compare(a, b) == Comparison::Commensurate;
}

double evaluate(const ScaleBasis& basis, const AsymptoticScalar& a, double eps) {
  if (a.is_zero()) return 0.0;
  if (!(eps > 0)) throw EvaluationError("eps must be positive");
  if (a.exponents().empty()) return a.coeff().get_d();
  double log_value = std::log(a.coeff().get_d());
  for (const auto& [index, power] : a.exponents()) {
    const ScaleGenerator& g = basis.generator(index);
    if (eps >= g.eps_max())
      throw EvaluationError("eps=" + std::to_string(eps) + " outside the domain of generator '" +
                            g.name + "'");
    log_value += power.get_d() * g.log_growth(eps);
  }
  if (log_value > 700.0 || log_value < -700.0)
    throw EvaluationError("scale evaluation outside representable double range");
  return std::exp(log_value);
}

}  // namespace metastab

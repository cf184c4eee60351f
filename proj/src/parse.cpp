#include "berkdyn/parse.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace berkdyn {

namespace {

// Rational function held as an unreduced numerator/denominator pair.
struct RatFunc {
  Poly num;
  Poly den;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char get() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression");
    return s_[pos_++];
  }
  void expect(char c) {
    const char g = get();
    if (g != c)
      throw ParseError(std::string("expected '") + c + "' but found '" + g + "' at offset " +
                       std::to_string(pos_ - 1));
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // NUMBER := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
  std::string number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    bool fractional = false;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      fractional = true;
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t mark = pos_ceil();
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        fractional = true;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // not an exponent suffix
      }
    }
    if (pos_ == start) throw ParseError("expected a number at offset " + std::to_string(pos_));
    last_fractional_ = fractional;
    return s_.substr(start, pos_ - start);
  }
  bool last_fractional() const { return last_fractional_; }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) throw ParseError("expected an identifier at offset " + std::to_string(pos_));
    return s_.substr(start, pos_ - start);
  }

  std::size_t pos_ceil() const { return pos_; }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
  bool last_fractional_ = false;
};

class ExprParser {
 public:
  ExprParser(const Backend& be, const std::string& text, std::int64_t budget)
      : be_(be), lex_(text), budget_(budget) {}

  RatFunc parse() {
    RatFunc r = expr();
    if (!lex_.eof()) throw ParseError("trailing input at offset " + std::to_string(lex_.pos_ceil()));
    return r;
  }

 private:
  Backend be_;
  Lexer lex_;
  std::int64_t budget_;

  RatFunc constant(Scalar c) { return RatFunc{Poly::constant(c), Poly::constant(Scalar::one(be_))}; }

  void check_budget(const Poly& p) {
    if (!p.is_zero() && p.degree() > budget_)
      throw BudgetExceeded("expression degree exceeds the budget");
  }

  RatFunc add(const RatFunc& a, const RatFunc& b, bool negate) {
    Poly rb = negate ? b.num.scaled(Scalar::from_int(be_, -1)) : b.num;
    Poly num = a.num * b.den + rb * a.den;
    Poly den = a.den * b.den;
    check_budget(num);
    check_budget(den);
    return RatFunc{std::move(num), std::move(den)};
  }
  RatFunc mul(const RatFunc& a, const RatFunc& b) {
    Poly num = a.num * b.num;
    Poly den = a.den * b.den;
    check_budget(num);
    check_budget(den);
    return RatFunc{std::move(num), std::move(den)};
  }
  RatFunc div(const RatFunc& a, const RatFunc& b) {
    if (b.num.is_zero()) throw ParseError("division by zero");
    Poly num = a.num * b.den;
    Poly den = a.den * b.num;
    check_budget(num);
    check_budget(den);
    return RatFunc{std::move(num), std::move(den)};
  }

  RatFunc expr() {
    RatFunc acc = term();
    while (true) {
      if (lex_.accept('+')) acc = add(acc, term(), false);
      else if (lex_.accept('-')) acc = add(acc, term(), true);
      else return acc;
    }
  }

  RatFunc term() {
    RatFunc acc = unary();
    while (true) {
      if (lex_.accept('*')) acc = mul(acc, unary());
      else if (lex_.accept('/')) acc = div(acc, unary());
      else return acc;
    }
  }

  RatFunc unary() {
    if (lex_.accept('-')) {
      RatFunc v = unary();
      return RatFunc{v.num.scaled(Scalar::from_int(be_, -1)), v.den};
    }
    return factor();
  }

  RatFunc factor() {
    RatFunc base = atom();
    if (!lex_.accept('^')) return base;
    const std::int64_t e = exponent();
    if (e == 0) return constant(Scalar::one(be_));
    RatFunc b = e < 0 ? RatFunc{base.den, base.num} : base;
    if (e < 0 && b.den.is_zero()) throw ParseError("zero to a negative power");
    const std::int64_t k = e < 0 ? -e : e;
    return RatFunc{b.num.pow(k, budget_), b.den.pow(k, budget_)};
  }

  std::int64_t exponent() {
    bool neg = false;
    bool paren = lex_.accept('(');
    if (lex_.accept('-')) neg = true;
    const std::string n = lex_.number();
    if (lex_.last_fractional()) throw ParseError("exponents must be integers");
    if (paren) lex_.expect(')');
    std::int64_t v = 0;
    for (char c : n) {
      v = v * 10 + (c - '0');
      if (v > (std::int64_t(1) << 40)) throw ParseError("exponent out of range");
    }
    return neg ? -v : v;
  }

  RatFunc atom() {
    const char c = lex_.peek();
    if (c == '(') {
      lex_.expect('(');
      RatFunc v = expr();
      lex_.expect(')');
      return v;
    }
    if (c == '[') return list();
    if (std::isdigit(static_cast<unsigned char>(c))) return number_atom();
    const std::string id = lex_.ident();
    if (id == "z" || id == "Id") {
      return RatFunc{Poly::monomial(1, Scalar::one(be_)), Poly::constant(Scalar::one(be_))};
    }
    if (id == "i") {
      if (!be_.archimedean()) throw ParseError("'i' needs the complex backend");
      return constant(Scalar::complex_value({0.0, 1.0}));
    }
    if (id == "p" || id == "t") {
      if (be_.archimedean()) throw ParseError("'" + id + "' needs a non-archimedean backend");
      return constant(Scalar::uniformizer(be_));
    }
    throw ParseError("unknown identifier '" + id + "'");
  }

  RatFunc number_atom() {
    const std::string n = lex_.number();
    if (lex_.last_fractional()) {
      if (!be_.archimedean())
        throw ParseError("decimal literals need the complex backend; use p^k/t^k forms");
      return constant(Scalar::complex_value({std::stod(n), 0.0}));
    }
    std::int64_t v = 0;
    for (char ch : n) {
      if (v > ((std::int64_t(1) << 62) - 9) / 10) throw ParseError("integer literal out of range");
      v = v * 10 + (ch - '0');
    }
    return constant(Scalar::from_int(be_, v));
  }

  RatFunc list() {
    lex_.expect('[');
    std::vector<Poly::Term> terms;
    std::int64_t k = 0;
    while (true) {
      RatFunc ck = expr();
      Scalar c = as_constant(ck, be_);
      if (!c.is_zero()) terms.push_back(Poly::Term{k, c});
      ++k;
      if (lex_.accept(',')) continue;
      lex_.expect(']');
      break;
    }
    return RatFunc{Poly::from_terms(be_, std::move(terms)),
                   Poly::constant(Scalar::one(be_))};
  }

 public:
  static Scalar as_constant(const RatFunc& r, const Backend& be) {
    if ((!r.num.is_zero() && r.num.degree() > 0) || (!r.den.is_zero() && r.den.degree() > 0))
      throw ParseError("expected a constant expression");
    const Scalar n = r.num.is_zero() ? Scalar::zero(be) : r.num.coeff(0);
    const Scalar d = r.den.is_zero() ? Scalar::zero(be) : r.den.coeff(0);
    if (d.is_zero()) throw ParseError("division by zero");
    return n / d;
  }
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

RationalMap parse_map(const Backend& be, const std::string& text, std::int64_t degree_budget) {
  const std::string t = trim(text);
  if (t == "inf") throw ParseError("'inf' is a point, not a map");
  ExprParser p(be, t, degree_budget);
  RatFunc r = p.parse();
  return RationalMap::from_fraction(r.num, r.den, degree_budget);
}

Scalar parse_scalar(const Backend& be, const std::string& text) {
  ExprParser p(be, text, 0);
  return ExprParser::as_constant(p.parse(), be);
}

ProjectivePoint parse_point(const Backend& be, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf") return ProjectivePoint::infinity(be);
  std::string body = t;
  if (t.rfind("z=", 0) == 0) body = t.substr(2);
  return ProjectivePoint::from_affine(parse_scalar(be, body));
}

BerkPoint parse_berk_point(const Backend& be, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf") return BerkPoint::infinity(be);
  if (t == "gauss") {
    if (be.archimedean()) throw ParseError("the Gauss point needs a non-archimedean backend");
    return BerkPoint::gauss(be);
  }
  if (t.rfind("pt(", 0) == 0 && t.back() == ')') {
    return BerkPoint::classical(parse_point(be, t.substr(3, t.size() - 4)));
  }
  if (t.rfind("disk(", 0) == 0 && t.back() == ')') {
    const std::string body = t.substr(5, t.size() - 6);
    const std::size_t comma = body.rfind(',');
    if (comma == std::string::npos) throw ParseError("disk(center,log-radius) expected");
    const Scalar center = parse_scalar(be, body.substr(0, comma));
    const std::string rad = trim(body.substr(comma + 1));
    try {
      return BerkPoint::disk(center, std::stod(rad));
    } catch (const std::invalid_argument&) {
      throw ParseError("disk radius must be a number (vlog form): '" + rad + "'");
    }
  }
  return BerkPoint::classical(parse_point(be, t));
}

const std::string& Config::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw ParseError("missing config key '" + key + "'");
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "' is not an integer: '" + it->second + "'");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "' is not a number: '" + it->second + "'");
  }
}

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ParseError("config line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    cfg.values[section.empty() ? key : section + "." + key] = val;
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace berkdyn

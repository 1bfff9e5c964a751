#include "cch/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "cch/errors.hpp"

namespace cch {

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(c, std::vector<int>(nvars, 0));
  p.normalize();
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  std::vector<int> e(nvars, 0);
  e.at(index) = 1;
  return monomial(nvars, 1.0, std::move(e));
}

Polynomial Polynomial::monomial(int nvars, double c, std::vector<int> exps) {
  Polynomial p(nvars);
  p.add_term(c, exps);
  p.normalize();
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.exps) s += e;
    d = std::max(d, s);
  }
  return d;
}

double Polynomial::eval(const Point& x) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (int v = 0; v < nvars_; ++v) {
      const int e = t.exps[v];
      if (e == 0) continue;
      double b = x[v], pw = 1.0;
      int k = e;
      while (k > 0) {
        if (k & 1) pw *= b;
        b *= b;
        k >>= 1;
      }
      m *= pw;
    }
    acc += m;
  }
  return acc;
}

void Polynomial::add_term(double c, const std::vector<int>& e) {
  Term t;
  t.coeff = c;
  t.exps = e;
  terms_.push_back(std::move(t));
}

void Polynomial::normalize() {
  std::map<std::vector<int>, double> acc;
  for (auto& t : terms_) acc[t.exps] += t.coeff;
  terms_.clear();
  for (auto& [e, c] : acc) {
    if (c == 0.0) continue;
    add_term(c, e);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r(nvars_);
  r.terms_ = terms_;
  for (const auto& t : o.terms_) r.add_term(t.coeff, t.exps);
  r.normalize();
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (o * -1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(nvars_);
  std::vector<int> e(nvars_);
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      for (int v = 0; v < nvars_; ++v) e[v] = a.exps[v] + b.exps[v];
      r.add_term(a.coeff * b.coeff, e);
    }
  r.normalize();
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(nvars_);
  for (const auto& t : terms_) r.add_term(t.coeff * s, t.exps);
  r.normalize();
  return r;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r(nvars_);
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    auto e = t.exps;
    const double c = t.coeff * e[var];
    e[var] -= 1;
    r.add_term(c, e);
  }
  r.normalize();
  return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].exps != o.terms_[i].exps || terms_[i].coeff != o.terms_[i].coeff) return false;
  return true;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << (t.coeff >= 0 ? " + " : " - ");
    else if (t.coeff < 0) os << "-";
    first = false;
    os << std::abs(t.coeff);
    for (int v = 0; v < nvars_; ++v) {
      if (t.exps[v] == 0) continue;
      os << "*x" << (v + 1);
      if (t.exps[v] > 1) os << "^" << t.exps[v];
    }
  }
  return os.str();
}

namespace {

// Recursive-descent parser for +, -, *, ^ with optional parentheses.
struct Parser {
  const std::string& s;
  int nvars;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ConfigError("polynomial parse error at position " + std::to_string(pos) + ": " + what +
                      " in '" + s + "'");
  }

  Polynomial expr() {
    Polynomial r = eat('-') ? -term() : term();
    for (;;) {
      if (eat('+')) r = r + term();
      else if (eat('-')) r = r - term();
      else break;
    }
    return r;
  }

  Polynomial term() {
    Polynomial r = factor();
    while (eat('*')) r = r * factor();
    return r;
  }

  Polynomial factor() {
    skip_ws();
    if (eat('-')) return -factor();
    if (eat('(')) {
      Polynomial inner = expr();
      if (!eat(')')) fail("expected ')'");
      return power_suffix(inner);
    }
    if (pos >= s.size()) fail("unexpected end of input");
    const char c = s[pos];
    if (c == 'x' || c == 'X') {
      ++pos;
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) fail("expected variable index after 'x'");
      const int idx = std::stoi(s.substr(start, pos - start));
      if (idx < 1 || idx > nvars) fail("variable x" + std::to_string(idx) + " out of range");
      return power_suffix(Polynomial::variable(nvars, idx - 1));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos;
      while (pos < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' || s[pos] == 'e' ||
              s[pos] == 'E' ||
              ((s[pos] == '+' || s[pos] == '-') && (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
        ++pos;
      double v = 0;
      try {
        v = std::stod(s.substr(start, pos - start));
      } catch (const std::exception&) {
        fail("bad numeric literal");
      }
      return power_suffix(Polynomial::constant(nvars, v));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Polynomial power_suffix(Polynomial base) {
    if (!eat('^')) return base;
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected integer exponent after '^'");
    int e = std::stoi(s.substr(start, pos - start));
    Polynomial r = Polynomial::constant(nvars, 1.0);
    for (int i = 0; i < e; ++i) r = r * base;
    return r;
  }
};

}  // namespace

Polynomial Polynomial::parse(const std::string& expr, int nvars) {
  Parser p{expr, nvars};
  Polynomial r = p.expr();
  p.skip_ws();
  if (p.pos != expr.size()) p.fail("trailing input");
  return r;
}

}  // namespace cch

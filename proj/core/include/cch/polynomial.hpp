#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace cch {

using Point = Eigen::VectorXd;

inline Point make_point(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

// Sparse multivariate polynomial in x1..x_nvars with double coefficients.
// Terms are kept in lexicographic monomial order with exactly-zero
// coefficients pruned, so equal polynomials compare equal term by term.
// Products, sums and partial derivatives of small-integer-coefficient inputs
// stay exact in binary floating point, which keeps the bracket ladder free of
// truncation error.
class Polynomial {
 public:
  struct Term {
    double coeff = 0.0;
    std::vector<int> exps;  // length nvars
  };

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int index);  // x_{index+1}, 0-based
  static Polynomial monomial(int nvars, double c, std::vector<int> exps);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  int degree() const;

  double eval(const Point& x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const { return *this * -1.0; }

  Polynomial derivative(int var) const;

  bool operator==(const Polynomial& o) const;

  std::string to_string() const;

  // Parses an expression over x1..x_nvars with +, -, *, ^, numeric literals
  // and optional parentheses. Throws ConfigError on malformed input.
  static Polynomial parse(const std::string& expr, int nvars);

 private:
  void add_term(double c, const std::vector<int>& e);
  void normalize();
  int nvars_ = 0;
  std::vector<Term> terms_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

}  // namespace cch

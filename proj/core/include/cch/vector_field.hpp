#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cch/polynomial.hpp"

namespace cch {

// One smooth vector field X = sum_k b_k(x) d/dx_k with polynomial b_k.
struct VectorField {
  std::vector<Polynomial> comps;  // length n

  int dim() const { return static_cast<int>(comps.size()); }
  bool is_zero() const;
  Eigen::VectorXd eval(const Point& x) const;
  bool operator==(const VectorField& o) const { return comps == o.comps; }
};

// The system X = {X_1,...,X_m} on R^n. m <= n is not required.
class VectorFieldSystem {
 public:
  VectorFieldSystem() = default;
  VectorFieldSystem(int ambient_dim, std::vector<VectorField> fields);

  int ambient_dim() const { return n_; }
  int num_fields() const { return static_cast<int>(fields_.size()); }
  const VectorField& field(int i) const { return fields_.at(i); }
  const std::vector<VectorField>& fields() const { return fields_; }

  // n x m matrix whose column i is X_i(x); exact polynomial evaluation.
  Eigen::MatrixXd eval_frame(const Point& x) const;

  // True when every field is constant (coordinate-independent).
  bool is_constant() const;
  // True for a constant frame with orthonormal columns spanning R^n; the CC
  // metric is then the Euclidean one and exact distances short-circuit.
  bool is_euclidean() const;

  // Largest row norm of the frame over the box [lo,hi] estimated on a sample
  // grid; used as sub-unit speed bound / eikonal viscosity.
  Eigen::VectorXd row_norm_bound(const Point& lo, const Point& hi, int samples_per_axis = 5) const;
  // Operator-norm bound of the frame over the box (Euclidean speed of
  // sub-unit paths), same sampling.
  double op_norm_bound(const Point& lo, const Point& hi, int samples_per_axis = 5) const;

 private:
  int n_ = 0;
  std::vector<VectorField> fields_;
};

// Plain-text system format: one line per field, n comma-separated polynomial
// expressions in x1..xn; '#' starts a comment. The first non-comment line
// must be "dim <n>".
VectorFieldSystem parse_system(const std::string& text);
VectorFieldSystem load_system_file(const std::string& path);

// Built-in systems: "euclidean3", "grushin-paper-example", "heisenberg1",
// "htype(k,q)".
VectorFieldSystem builtin_system(const std::string& name);
std::vector<std::string> builtin_system_names();

// Lie bracket [X,Y](x) by the Jacobian formula on polynomial coefficients;
// exact, no finite differences.
VectorField lie_bracket(const VectorField& X, const VectorField& Y);

// [X_i, X_j](sys) evaluated at x; antisymmetric in (i,j).
Eigen::VectorXd lie_bracket(const VectorFieldSystem& sys, int i, int j, const Point& x);

}  // namespace cch

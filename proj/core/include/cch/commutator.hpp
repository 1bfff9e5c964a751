#pragma once

#include <utility>
#include <vector>

#include "cch/vector_field.hpp"

namespace cch {

// The generated family Y_1,...,Y_l: the original fields with degree 1, plus
// the iterated brackets needed to span R^n at every sample point. Entries of
// degree d > 1 are left-normed brackets [X_i, Y_j] (degree-2 ones are
// [X_i, X_j], i < j); identically-zero brackets are dropped since they cannot
// contribute to any frame determinant.
class CommutatorBasis {
 public:
  int ambient_dim() const { return n_; }
  int num_generators() const { return m_; }
  int size() const { return static_cast<int>(fields_.size()); }
  const VectorField& field(int i) const { return fields_.at(i); }
  int degree(int i) const { return degrees_.at(i); }
  const std::vector<int>& degrees() const { return degrees_; }
  // (-1,-1) for generators, else indices of the two parents whose degrees sum
  // to this entry's degree.
  std::pair<int, int> parents(int i) const { return parents_.at(i); }
  int max_step() const { return max_step_; }
  const std::vector<Point>& hoermander_verified_on() const { return samples_; }

  // n x l matrix with column i = Y_i(x).
  Eigen::MatrixXd eval(const Point& x) const;
  // Rank with singular values below 1e-9 * sigma_max treated as zero.
  int rank_at(const Point& x) const;

  friend CommutatorBasis build_commutator_basis(const VectorFieldSystem& sys,
                                                const std::vector<Point>& samples, int max_step);

 private:
  int n_ = 0, m_ = 0, max_step_ = 0;
  std::vector<VectorField> fields_;
  std::vector<int> degrees_;
  std::vector<std::pair<int, int>> parents_;
  std::vector<Point> samples_;
};

// Breadth-first by degree, candidates ordered lexicographically by parent
// indices. Stops at the first degree where the family spans R^n at every
// sample; throws HoermanderFailure (naming the offending sample) if rank < n
// somewhere even at max_step.
CommutatorBasis build_commutator_basis(const VectorFieldSystem& sys,
                                       const std::vector<Point>& samples, int max_step);

int matrix_rank(const Eigen::MatrixXd& A, double rel_threshold = 1e-9);

}  // namespace cch

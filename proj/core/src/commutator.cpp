#include "cch/commutator.hpp"

#include <sstream>

#include <Eigen/Dense>

#include "cch/errors.hpp"

namespace cch {

int matrix_rank(const Eigen::MatrixXd& A, double rel_threshold) {
  if (A.cols() == 0 || A.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  const double thr = rel_threshold * sv[0];
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > thr) ++r;
  return r;
}

Eigen::MatrixXd CommutatorBasis::eval(const Point& x) const {
  Eigen::MatrixXd Y(n_, size());
  for (int i = 0; i < size(); ++i) Y.col(i) = fields_[i].eval(x);
  return Y;
}

int CommutatorBasis::rank_at(const Point& x) const { return matrix_rank(eval(x)); }

CommutatorBasis build_commutator_basis(const VectorFieldSystem& sys,
                                       const std::vector<Point>& samples, int max_step) {
  if (max_step < 1) throw ConfigError("build_commutator_basis: max_step must be >= 1");
  if (samples.empty()) throw ConfigError("build_commutator_basis: need at least one sample");

  CommutatorBasis basis;
  basis.n_ = sys.ambient_dim();
  basis.m_ = sys.num_fields();
  for (int i = 0; i < sys.num_fields(); ++i) {
    basis.fields_.push_back(sys.field(i));
    basis.degrees_.push_back(1);
    basis.parents_.emplace_back(-1, -1);
  }
  basis.max_step_ = 1;

  auto spans_everywhere = [&]() {
    for (const auto& x : samples)
      if (basis.rank_at(x) < basis.n_) return false;
    return true;
  };

  int degree = 1;
  while (!spans_everywhere()) {
    if (degree == max_step) {
      for (const auto& x : samples) {
        if (basis.rank_at(x) < basis.n_) {
          std::ostringstream os;
          os << "Hoermander condition not verified: rank " << basis.rank_at(x) << " < "
             << basis.n_ << " at sample (";
          for (int k = 0; k < x.size(); ++k) os << (k ? "," : "") << x[k];
          os << ") with commutators up to step " << max_step;
          throw HoermanderFailure(os.str());
        }
      }
    }
    ++degree;
    const int before = basis.size();
    if (degree == 2) {
      for (int i = 0; i < basis.m_; ++i)
        for (int j = i + 1; j < basis.m_; ++j) {
          VectorField br = lie_bracket(basis.fields_[i], basis.fields_[j]);
          if (br.is_zero()) continue;
          basis.fields_.push_back(std::move(br));
          basis.degrees_.push_back(2);
          basis.parents_.emplace_back(i, j);
        }
    } else {
      // Left-normed ladder: [X_i, Y_j] over previous-degree entries.
      for (int i = 0; i < basis.m_; ++i)
        for (int j = 0; j < before; ++j) {
          if (basis.degrees_[j] != degree - 1) continue;
          VectorField br = lie_bracket(basis.fields_[i], basis.fields_[j]);
          if (br.is_zero()) continue;
          basis.fields_.push_back(std::move(br));
          basis.degrees_.push_back(degree);
          basis.parents_.emplace_back(i, j);
        }
    }
    basis.max_step_ = degree;
    if (basis.size() == before && degree >= max_step) {
      // no new fields can ever appear; force the failure check above
      continue;
    }
  }
  basis.samples_ = samples;
  return basis;
}

}  // namespace cch

#include "cch/vector_field.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "cch/errors.hpp"
#include "cch/htype.hpp"

namespace cch {

bool VectorField::is_zero() const {
  for (const auto& c : comps)
    if (!c.is_zero()) return false;
  return true;
}

Eigen::VectorXd VectorField::eval(const Point& x) const {
  Eigen::VectorXd v(dim());
  for (int k = 0; k < dim(); ++k) v[k] = comps[k].eval(x);
  return v;
}

VectorFieldSystem::VectorFieldSystem(int ambient_dim, std::vector<VectorField> fields)
    : n_(ambient_dim), fields_(std::move(fields)) {
  if (n_ < 1) throw ConfigError("VectorFieldSystem: ambient dimension must be positive");
  for (const auto& f : fields_)
    if (f.dim() != n_) throw ConfigError("VectorFieldSystem: field dimension mismatch");
}

Eigen::MatrixXd VectorFieldSystem::eval_frame(const Point& x) const {
  if (x.size() != n_) throw ConfigError("eval_frame: point dimension mismatch");
  for (int k = 0; k < n_; ++k)
    if (!std::isfinite(x[k])) throw ConfigError("eval_frame: non-finite point");
  Eigen::MatrixXd B(n_, num_fields());
  for (int i = 0; i < num_fields(); ++i) B.col(i) = fields_[i].eval(x);
  return B;
}

bool VectorFieldSystem::is_constant() const {
  for (const auto& f : fields_)
    for (const auto& c : f.comps)
      if (c.degree() > 0) return false;
  return true;
}

bool VectorFieldSystem::is_euclidean() const {
  if (!is_constant() || num_fields() != n_) return false;
  const Eigen::MatrixXd B = eval_frame(Eigen::VectorXd::Zero(n_));
  return (B * B.transpose() - Eigen::MatrixXd::Identity(n_, n_)).norm() < 1e-14;
}

Eigen::VectorXd VectorFieldSystem::row_norm_bound(const Point& lo, const Point& hi,
                                                  int samples_per_axis) const {
  Eigen::VectorXd best = Eigen::VectorXd::Zero(n_);
  const long total = static_cast<long>(std::pow(samples_per_axis, n_));
  Point x(n_);
  for (long s = 0; s < total; ++s) {
    long rem = s;
    for (int k = 0; k < n_; ++k) {
      const int idx = static_cast<int>(rem % samples_per_axis);
      rem /= samples_per_axis;
      x[k] = samples_per_axis == 1 ? 0.5 * (lo[k] + hi[k])
                                   : lo[k] + (hi[k] - lo[k]) * idx / (samples_per_axis - 1);
    }
    const Eigen::MatrixXd B = eval_frame(x);
    for (int k = 0; k < n_; ++k) best[k] = std::max(best[k], B.row(k).norm());
  }
  return best;
}

double VectorFieldSystem::op_norm_bound(const Point& lo, const Point& hi,
                                        int samples_per_axis) const {
  // Row-norm 2-vector bound dominates the spectral norm and is monotone under
  // box growth at corners for polynomial entries, good enough as a speed cap.
  return row_norm_bound(lo, hi, samples_per_axis).norm();
}

VectorFieldSystem parse_system(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  std::vector<VectorField> fields;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);
    if (n < 0) {
      std::istringstream hdr(line);
      std::string kw;
      hdr >> kw >> n;
      if (kw != "dim" || n < 1)
        throw ConfigError("system spec line " + std::to_string(lineno) +
                          ": expected header 'dim <n>'");
      continue;
    }
    VectorField f;
    std::stringstream comps(line);
    std::string expr;
    while (std::getline(comps, expr, ','))
      f.comps.push_back(Polynomial::parse(expr, n));
    if (f.dim() != n)
      throw ConfigError("system spec line " + std::to_string(lineno) + ": expected " +
                        std::to_string(n) + " comma-separated components, got " +
                        std::to_string(f.dim()));
    fields.push_back(std::move(f));
  }
  if (n < 0) throw ConfigError("system spec: missing 'dim <n>' header");
  if (fields.empty()) throw ConfigError("system spec: no fields");
  return VectorFieldSystem(n, std::move(fields));
}

VectorFieldSystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open system spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

namespace {

VectorField coordinate_field(int n, int k) {
  VectorField f;
  for (int j = 0; j < n; ++j) f.comps.push_back(Polynomial::constant(n, j == k ? 1.0 : 0.0));
  return f;
}

}  // namespace

VectorFieldSystem builtin_system(const std::string& name) {
  if (name == "euclidean3") {
    std::vector<VectorField> fs;
    for (int k = 0; k < 3; ++k) fs.push_back(coordinate_field(3, k));
    return VectorFieldSystem(3, std::move(fs));
  }
  if (name == "grushin-paper-example") {
    // { d/dx1, d/dx2, x1 d/dx3 } on R^3.
    std::vector<VectorField> fs;
    fs.push_back(coordinate_field(3, 0));
    fs.push_back(coordinate_field(3, 1));
    VectorField x1d3;
    x1d3.comps.push_back(Polynomial::constant(3, 0.0));
    x1d3.comps.push_back(Polynomial::constant(3, 0.0));
    x1d3.comps.push_back(Polynomial::variable(3, 0));
    fs.push_back(std::move(x1d3));
    return VectorFieldSystem(3, std::move(fs));
  }
  if (name == "heisenberg1") return HTypeGroup(1, 1).frame();
  if (name.rfind("htype(", 0) == 0 && name.back() == ')') {
    const std::string args = name.substr(6, name.size() - 7);
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw ConfigError("expected htype(k,q)");
    const int k = std::stoi(args.substr(0, comma));
    const int q = std::stoi(args.substr(comma + 1));
    return HTypeGroup(k, q).frame();
  }
  throw ConfigError("unknown built-in system '" + name + "'");
}

std::vector<std::string> builtin_system_names() {
  return {"euclidean3", "grushin-paper-example", "heisenberg1", "htype(k,q)"};
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  const int n = X.dim();
  VectorField r;
  r.comps.reserve(n);
  for (int k = 0; k < n; ++k) {
    Polynomial acc(n);
    for (int j = 0; j < n; ++j) {
      acc = acc + X.comps[j] * Y.comps[k].derivative(j) - Y.comps[j] * X.comps[k].derivative(j);
    }
    r.comps.push_back(std::move(acc));
  }
  return r;
}

Eigen::VectorXd lie_bracket(const VectorFieldSystem& sys, int i, int j, const Point& x) {
  return lie_bracket(sys.field(i), sys.field(j)).eval(x);
}

}  // namespace cch

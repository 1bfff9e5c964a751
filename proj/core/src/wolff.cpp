#include <cmath>

#include "cch/capacity.hpp"
#include "cch/errors.hpp"

namespace cch {

double wolff_potential(const DiscreteMeasure& mu, const PointDistanceOracle& dist, double R,
                       double p, const std::function<double(double)>& ball_volume_of,
                       const WolffOptions& opts) {
  if (R <= 0.0 || p <= 1.0) throw ConfigError("wolff_potential: need R > 0 and p > 1");
  if (mu.atoms.size() != mu.weights.size())
    throw ConfigError("wolff_potential: atom/weight size mismatch");
  if (mu.atoms.empty()) return 0.0;

  // atom distances once; the measure of B(x,t) is then a step function of t
  std::vector<double> d(mu.atoms.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = dist.bracket(mu.atoms[i]).mid();

  const double t_min = opts.t_min > 0.0 ? opts.t_min : 1e-4 * R;
  if (t_min >= R) return 0.0;
  const double decades = std::log10(R / t_min);
  const int nodes = std::max(8, static_cast<int>(std::ceil(decades * opts.nodes_per_decade)));
  const double dlog = std::log(R / t_min) / nodes;
  const double expo = 1.0 / (p - 1.0);

  double acc = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double t = t_min * std::exp((j + 0.5) * dlog);  // log-midpoint
    double mass = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] < t) mass += mu.weights[i];
    if (mass <= 0.0) continue;
    const double vol = ball_volume_of(t);
    if (vol <= 0.0) continue;
    acc += std::pow(mass * std::pow(t, p) / vol, expo) * dlog;
  }
  return acc;
}

}  // namespace cch

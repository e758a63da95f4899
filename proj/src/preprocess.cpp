#include "preprocess.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "error.hpp"

namespace moep {

Scaling Scaling::identity(std::size_t d) {
  return Scaling{std::vector<double>(d, 1.0), std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
}

std::vector<double> Scaling::apply(std::span<const double> y) const {
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= multipliers[i];
  return out;
}

std::vector<double> Scaling::unapply(std::span<const double> y) const {
  std::vector<double> out(y.begin(), y.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= multipliers[i];
  return out;
}

std::vector<double> Scaling::unapply_weight(std::span<const double> w) const {
  std::vector<double> out(w.begin(), w.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= multipliers[i];
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  if (sum > 0.0)
    for (double& v : out) v /= sum;
  return out;
}

IdealPoint compute_ideal_point(const Problem& p, WeightedSumOracle& oracle) {
  const std::size_t d = p.num_objectives();
  IdealPoint ideal;
  for (std::size_t i = 0; i < d; ++i) {
    OracleResult r = oracle.solve_weighted_sum_lex(p, WeightVector::unit(d, i));
    if (r.status == OracleStatus::Infeasible) throw Error(ErrorCode::Infeasible, "problem is infeasible");
    if (r.status == OracleStatus::Unbounded)
      throw Error(ErrorCode::NoIdealPoint, "objective " + std::to_string(i + 1) + " '" + p.objectives[i].name +
                                               "' is unbounded below; no ideal point exists");
    ideal.values.push_back(r.point->y[i]);
    ideal.minimizers.push_back(std::move(*r.point));
  }
  return ideal;
}

Problem scale_objectives(const Problem& p, std::span<const double> multipliers) {
  Problem out = p;
  for (std::size_t i = 0; i < out.objectives.size(); ++i) {
    auto& o = out.objectives[i];
    const double s = multipliers[i];
    if (s == 1.0) continue;
    for (double& c : o.coeffs) c *= s;
    if (o.quad)
      for (double& v : o.quad->data) v *= s;
    o.constant *= s;
  }
  return out;
}

Normalized normalize(const Problem& p, const IdealPoint& ideal) {
  const std::size_t d = p.num_objectives();
  Scaling scaling = Scaling::identity(d);
  scaling.ideal_point = ideal.values;
  scaling.offsets = ideal.values;
  for (std::size_t i = 0; i < d; ++i) {
    double worst = ideal.values[i];
    for (std::size_t j = 0; j < d; ++j)
      if (j != i) worst = std::max(worst, ideal.minimizers[j].y[i]);
    const double range = worst - ideal.values[i];
    if (range > 1e-9) scaling.multipliers[i] = 1.0 / range;
  }
  return Normalized{scale_objectives(p, scaling.multipliers), std::move(scaling)};
}

Normalized normalize(const Problem& p, WeightedSumOracle& oracle) {
  return normalize(p, compute_ideal_point(p, oracle));
}

}  // namespace moep

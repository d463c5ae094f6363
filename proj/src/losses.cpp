#include "tsgd/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsgd/error.hpp"

namespace tsgd {

namespace {

void check_level(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("quantile level must lie in (0, 1), got " + std::to_string(q));
  }
}

}  // namespace

QuantileSet::QuantileSet(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw DomainError("quantile set must be nonempty");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    check_level(levels_[i]);
    if (i > 0 && !(levels_[i] > levels_[i - 1])) {
      throw DomainError("quantile levels must be strictly increasing");
    }
  }
}

double quantile_loss(double y, double y_hat, double q) {
  check_level(q);
  const double diff = y - y_hat;
  if (std::isnan(diff)) return diff;
  return diff >= 0.0 ? q * diff : (q - 1.0) * diff;
}

double quantile_loss_subgrad(double y, double y_hat, double q) {
  check_level(q);
  if (y_hat < y) return -q;
  if (y_hat > y) return 1.0 - q;
  return 0.0;
}

double total_quantile_loss(std::span<const double> targets, const QuantileForecast& forecast,
                           const QuantileSet& qs) {
  if (targets.size() != forecast.horizons()) {
    throw DimensionError("total_quantile_loss: " + std::to_string(targets.size()) +
                         " targets for " + std::to_string(forecast.horizons()) + " horizons");
  }
  if (qs.size() != forecast.quantiles()) {
    throw DimensionError("total_quantile_loss: quantile set does not match forecast");
  }
  double total = 0.0;
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    for (std::size_t k = 1; k <= targets.size(); ++k) {
      total += quantile_loss(targets[k - 1], forecast.at(k, qi), qs[qi]);
    }
  }
  return total;
}

MseLoss mse_loss(double y, double y_hat) noexcept {
  const double r = y_hat - y;
  return {r * r, 2.0 * r};
}

}  // namespace tsgd

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsgd {

// Strictly increasing, nonempty set of quantile levels in (0, 1).
class QuantileSet {
 public:
  // Throws DomainError when the invariants are violated.
  explicit QuantileSet(std::vector<double> levels);

  std::size_t size() const noexcept { return levels_.size(); }
  double operator[](std::size_t i) const noexcept { return levels_[i]; }
  const std::vector<double>& levels() const noexcept { return levels_; }

  friend bool operator==(const QuantileSet&, const QuantileSet&) = default;

 private:
  std::vector<double> levels_;
};

// Predictions over the horizon x quantile grid. Horizon k runs 1..horizons;
// quantiles are addressed by their index into the owning QuantileSet.
class QuantileForecast {
 public:
  QuantileForecast(std::size_t horizons, std::size_t quantiles)
      : horizons_(horizons), quantiles_(quantiles), values_(horizons * quantiles, 0.0) {}

  std::size_t horizons() const noexcept { return horizons_; }
  std::size_t quantiles() const noexcept { return quantiles_; }

  double& at(std::size_t k, std::size_t qi) noexcept { return values_[index(k, qi)]; }
  double at(std::size_t k, std::size_t qi) const noexcept { return values_[index(k, qi)]; }

  // Quantile-major layout: head qi occupies [qi*horizons, (qi+1)*horizons).
  std::span<double> head(std::size_t qi) noexcept {
    return {values_.data() + qi * horizons_, horizons_};
  }
  std::span<const double> head(std::size_t qi) const noexcept {
    return {values_.data() + qi * horizons_, horizons_};
  }

  std::span<const double> flat() const noexcept { return values_; }

 private:
  std::size_t index(std::size_t k, std::size_t qi) const noexcept {
    return qi * horizons_ + (k - 1);
  }

  std::size_t horizons_;
  std::size_t quantiles_;
  std::vector<double> values_;
};

// Pinball loss q*max(y - y_hat, 0) + (1 - q)*max(y_hat - y, 0).
double quantile_loss(double y, double y_hat, double q);

// d/dy_hat of the pinball loss: -q below the target, 1 - q above, 0 at a tie.
double quantile_loss_subgrad(double y, double y_hat, double q);

// Sum over horizons and quantiles of the pinball loss for one forecast
// origin. targets[k-1] is the realized value at horizon k. No averaging.
double total_quantile_loss(std::span<const double> targets, const QuantileForecast& forecast,
                           const QuantileSet& qs);

struct MseLoss {
  double value;
  double grad;  // d/dy_hat
};

MseLoss mse_loss(double y, double y_hat) noexcept;

}  // namespace tsgd

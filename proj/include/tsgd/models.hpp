#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsgd/losses.hpp"
#include "tsgd/numeric.hpp"
#include "tsgd/rng.hpp"

namespace tsgd {

enum class ModelKind { linear, mlp, lstm };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);  // throws DomainError

struct ModelSpec {
  ModelKind kind = ModelKind::linear;
  std::size_t input_window = 1;  // time steps fed to the model
  std::size_t feature_dim = 1;   // features per time step
  std::size_t hidden_dim = 1;    // ignored by the linear kind
  std::size_t horizons = 1;
  std::size_t quantile_count = 1;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Throws DomainError when a required dimension is zero.
void validate(const ModelSpec& spec);

// One contiguous slice of the flat parameter vector.
struct ParamBlock {
  std::string name;
  std::size_t offset;
  std::size_t rows;
  std::size_t cols;  // 1 for bias vectors
  std::size_t size() const noexcept { return rows * cols; }
};

// Parameter layout, in storage order. Weight matrices are row-major.
//
//   linear: head{q}.weight [H x W*F], head{q}.bias [H]           for each quantile q
//   mlp:    hidden.weight [h x W*F], hidden.bias [h],
//           head{q}.weight [H x h],  head{q}.bias [H]            for each quantile q
//   lstm:   lstm.weight_x [4h x F], lstm.weight_h [4h x h], lstm.bias [4h],
//           head{q}.weight [H x h],  head{q}.bias [H]            for each quantile q
//
// LSTM gate rows are stacked in the order input, forget, candidate, output.
std::vector<ParamBlock> param_layout(const ModelSpec& spec);
std::size_t param_count(const ModelSpec& spec);

class ParamVector {
 public:
  // Throws DimensionError if data.size() != param_count(spec).
  ParamVector(ModelSpec spec, Vector data);

  const ModelSpec& spec() const noexcept { return spec_; }
  const Vector& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

 private:
  ModelSpec spec_;
  Vector data_;
};

// One step's data: defines f_t(x) for any parameter vector x.
struct LossContext {
  Matrix features;              // input_window x feature_dim
  std::vector<double> targets;  // targets[k-1] is the value at horizon k
  QuantileSet quantiles;
  std::int64_t step_index = 0;
};

// Throws DimensionError when ctx does not fit spec.
void check_shapes(const ModelSpec& spec, const LossContext& ctx);

// Loss and gradient at a point. A non-finite intermediate leaves finite ==
// false with loss and every gradient entry NaN, so divergence propagates.
struct Evaluation {
  double loss = 0.0;
  Vector grad;
  bool finite = true;
};

// A per-step loss f_t(x) = objective(x; ctx_t) with its exact gradient.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::size_t dimension() const = 0;
  virtual Evaluation evaluate(std::span<const double> x, const LossContext& ctx) const = 0;
};

// Total quantile loss of a model's forecast.
class ModelObjective final : public Objective {
 public:
  explicit ModelObjective(ModelSpec spec);
  const ModelSpec& spec() const noexcept { return spec_; }
  std::size_t dimension() const override { return dimension_; }
  Evaluation evaluate(std::span<const double> x, const LossContext& ctx) const override;

 private:
  ModelSpec spec_;
  std::size_t dimension_;
};

// Weights uniform on [-scale, scale]; biases 0 except the LSTM forget gate
// bias, which starts at 1. Throws DomainError unless scale > 0.
ParamVector init_params(const ModelSpec& spec, Rng& rng, double scale);

QuantileForecast forward(const ParamVector& params, const LossContext& ctx);
QuantileForecast predict(const ModelSpec& spec, std::span<const double> x,
                         const Matrix& features);

struct LossAndGrad {
  double loss;
  Vector grad;
};

// f_t(params) and its gradient by reverse-mode backprop (through time for
// lstm). Throws NumericError carrying ctx.step_index on non-finite values.
LossAndGrad loss_and_grad(const ParamVector& params, const LossContext& ctx);

// Non-throwing variant used by the optimizers.
Evaluation evaluate_model(const ModelSpec& spec, std::span<const double> x,
                          const LossContext& ctx);

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // coordinates whose probes cross a pinball kink
};

// Compares loss_and_grad against central differences (h = 1e-5) on `trials`
// random instances. Relative error is |a - n| / max(|a|, |n|, 1e-4); the floor
// keeps finite-difference roundoff (~1e-11 absolute) on near-zero gradient
// entries from reading as large relative errors.
GradCheckReport grad_check(const ModelSpec& spec, std::size_t trials, Rng& rng);

}  // namespace tsgd

#include "tsgd/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "model_passes.hpp"
#include "tsgd/error.hpp"
#include "tsgd/kernels.hpp"

namespace tsgd {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::linear:
      return "linear";
    case ModelKind::mlp:
      return "mlp";
    case ModelKind::lstm:
      return "lstm";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "linear") return ModelKind::linear;
  if (name == "mlp") return ModelKind::mlp;
  if (name == "lstm") return ModelKind::lstm;
  throw DomainError("unknown model kind '" + std::string(name) + "'");
}

void validate(const ModelSpec& spec) {
  if (spec.input_window == 0 || spec.feature_dim == 0 || spec.horizons == 0 ||
      spec.quantile_count == 0) {
    throw DomainError("model dimensions must all be >= 1");
  }
  if (spec.kind != ModelKind::linear && spec.hidden_dim == 0) {
    throw DomainError("hidden_dim must be >= 1 for mlp and lstm models");
  }
}

std::vector<ParamBlock> param_layout(const ModelSpec& spec) {
  validate(spec);
  std::vector<ParamBlock> blocks;
  std::size_t offset = 0;
  auto add = [&](std::string name, std::size_t rows, std::size_t cols) {
    blocks.push_back({std::move(name), offset, rows, cols});
    offset += rows * cols;
  };
  const std::size_t flat_in = spec.input_window * spec.feature_dim;
  const std::size_t h = spec.hidden_dim;
  std::size_t head_in = flat_in;
  switch (spec.kind) {
    case ModelKind::linear:
      break;
    case ModelKind::mlp:
      add("hidden.weight", h, flat_in);
      add("hidden.bias", h, 1);
      head_in = h;
      break;
    case ModelKind::lstm:
      add("lstm.weight_x", 4 * h, spec.feature_dim);
      add("lstm.weight_h", 4 * h, h);
      add("lstm.bias", 4 * h, 1);
      head_in = h;
      break;
  }
  for (std::size_t q = 0; q < spec.quantile_count; ++q) {
    add("head" + std::to_string(q) + ".weight", spec.horizons, head_in);
    add("head" + std::to_string(q) + ".bias", spec.horizons, 1);
  }
  return blocks;
}

std::size_t param_count(const ModelSpec& spec) {
  const auto blocks = param_layout(spec);
  return blocks.back().offset + blocks.back().size();
}

ParamVector::ParamVector(ModelSpec spec, Vector data) : spec_(spec), data_(std::move(data)) {
  const std::size_t expected = param_count(spec_);
  if (data_.size() != expected) {
    throw DimensionError("parameter vector has " + std::to_string(data_.size()) +
                         " entries, layout needs " + std::to_string(expected));
  }
}

void check_shapes(const ModelSpec& spec, const LossContext& ctx) {
  if (ctx.features.rows() != spec.input_window || ctx.features.cols() != spec.feature_dim) {
    throw DimensionError("feature matrix is " + std::to_string(ctx.features.rows()) + "x" +
                         std::to_string(ctx.features.cols()) + ", model expects " +
                         std::to_string(spec.input_window) + "x" +
                         std::to_string(spec.feature_dim));
  }
  if (ctx.targets.size() != spec.horizons) {
    throw DimensionError("context has " + std::to_string(ctx.targets.size()) +
                         " targets, model forecasts " + std::to_string(spec.horizons) +
                         " horizons");
  }
  if (ctx.quantiles.size() != spec.quantile_count) {
    throw DimensionError("context quantile count does not match model heads");
  }
}

ParamVector init_params(const ModelSpec& spec, Rng& rng, double scale) {
  if (!(scale > 0.0)) throw DomainError("init scale must be positive");
  Vector data(param_count(spec));
  for (const ParamBlock& block : param_layout(spec)) {
    const bool is_bias = block.cols == 1 && block.name.ends_with(".bias");
    for (std::size_t i = 0; i < block.size(); ++i) {
      data[block.offset + i] = is_bias ? 0.0 : rng.uniform(-scale, scale);
    }
    if (block.name == "lstm.bias") {
      const std::size_t h = spec.hidden_dim;
      for (std::size_t i = h; i < 2 * h; ++i) data[block.offset + i] = 1.0;
    }
  }
  return ParamVector(spec, std::move(data));
}

namespace detail {

HeadsLayout heads_layout(const ModelSpec& spec) {
  const std::size_t flat_in = spec.input_window * spec.feature_dim;
  const std::size_t h = spec.hidden_dim;
  switch (spec.kind) {
    case ModelKind::linear:
      return {0, flat_in};
    case ModelKind::mlp:
      return {h * flat_in + h, h};
    case ModelKind::lstm:
      return {4 * h * spec.feature_dim + 4 * h * h + 4 * h, h};
  }
  return {0, 0};
}

void heads_forward(const ModelSpec& spec, const HeadsLayout& layout, std::span<const double> x,
                   std::span<const double> z, QuantileForecast& out) {
  const auto& kern = simd::active();
  const std::size_t H = spec.horizons;
  const std::size_t per_head = H * layout.input + H;
  for (std::size_t q = 0; q < spec.quantile_count; ++q) {
    const double* w = x.data() + layout.offset + q * per_head;
    const double* b = w + H * layout.input;
    auto head = out.head(q);
    for (std::size_t k = 0; k < H; ++k) {
      head[k] = b[k] + kern.dot(w + k * layout.input, z.data(), layout.input);
    }
  }
}

void heads_backward(const ModelSpec& spec, const HeadsLayout& layout, std::span<const double> x,
                    std::span<const double> z, const QuantileForecast& dyhat,
                    std::span<double> grad, std::span<double> dz) {
  const auto& kern = simd::active();
  const std::size_t H = spec.horizons;
  const std::size_t per_head = H * layout.input + H;
  for (std::size_t q = 0; q < spec.quantile_count; ++q) {
    const std::size_t base = layout.offset + q * per_head;
    const double* w = x.data() + base;
    double* gw = grad.data() + base;
    double* gb = gw + H * layout.input;
    const auto dy = dyhat.head(q);
    for (std::size_t k = 0; k < H; ++k) {
      if (dy[k] == 0.0) continue;
      kern.axpy(dy[k], z.data(), gw + k * layout.input, layout.input);
      gb[k] += dy[k];
      if (!dz.empty()) kern.axpy(dy[k], w + k * layout.input, dz.data(), layout.input);
    }
  }
}

LinearPass::LinearPass(const ModelSpec& spec, std::span<const double> x, const Matrix& features)
    : spec_(spec), x_(x), features_(features) {}

void LinearPass::forward(QuantileForecast& out) {
  heads_forward(spec_, heads_layout(spec_), x_, features_.flat(), out);
}

void LinearPass::backward(const QuantileForecast& dyhat, std::span<double> grad) {
  heads_backward(spec_, heads_layout(spec_), x_, features_.flat(), dyhat, grad, {});
}

MlpPass::MlpPass(const ModelSpec& spec, std::span<const double> x, const Matrix& features)
    : spec_(spec), x_(x), features_(features), hidden_(spec.hidden_dim) {}

void MlpPass::forward(QuantileForecast& out) {
  const auto& kern = simd::active();
  const std::size_t n = features_.flat().size();
  const std::size_t h = spec_.hidden_dim;
  const double* w1 = x_.data();
  const double* b1 = w1 + h * n;
  for (std::size_t r = 0; r < h; ++r) {
    hidden_[r] = std::tanh(b1[r] + kern.dot(w1 + r * n, features_.flat().data(), n));
  }
  heads_forward(spec_, heads_layout(spec_), x_, hidden_, out);
}

void MlpPass::backward(const QuantileForecast& dyhat, std::span<double> grad) {
  const auto& kern = simd::active();
  const std::size_t n = features_.flat().size();
  const std::size_t h = spec_.hidden_dim;
  std::vector<double> dh(h, 0.0);
  heads_backward(spec_, heads_layout(spec_), x_, hidden_, dyhat, grad, dh);
  double* gw1 = grad.data();
  double* gb1 = gw1 + h * n;
  for (std::size_t r = 0; r < h; ++r) {
    const double da = dh[r] * (1.0 - hidden_[r] * hidden_[r]);
    if (da == 0.0) continue;
    kern.axpy(da, features_.flat().data(), gw1 + r * n, n);
    gb1[r] += da;
  }
}

}  // namespace detail

namespace {

template <class Pass>
Evaluation run_pass(const ModelSpec& spec, std::span<const double> x, const LossContext& ctx) {
  Evaluation eval;
  eval.grad = Vector(x.size(), 0.0);
  Pass pass(spec, x, ctx.features);
  QuantileForecast yhat(spec.horizons, spec.quantile_count);
  pass.forward(yhat);
  if (!is_finite(yhat.flat())) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    eval.loss = nan;
    std::fill(eval.grad.begin(), eval.grad.end(), nan);
    eval.finite = false;
    return eval;
  }
  eval.loss = total_quantile_loss(ctx.targets, yhat, ctx.quantiles);
  QuantileForecast dyhat(spec.horizons, spec.quantile_count);
  for (std::size_t q = 0; q < spec.quantile_count; ++q) {
    for (std::size_t k = 1; k <= spec.horizons; ++k) {
      dyhat.at(k, q) = quantile_loss_subgrad(ctx.targets[k - 1], yhat.at(k, q), ctx.quantiles[q]);
    }
  }
  pass.backward(dyhat, eval.grad.span());
  eval.finite = std::isfinite(eval.loss) && is_finite(eval.grad);
  return eval;
}

template <class Pass>
QuantileForecast run_forward(const ModelSpec& spec, std::span<const double> x,
                             const Matrix& features) {
  Pass pass(spec, x, features);
  QuantileForecast yhat(spec.horizons, spec.quantile_count);
  pass.forward(yhat);
  return yhat;
}

void check_feature_shape(const ModelSpec& spec, std::span<const double> x,
                         const Matrix& features) {
  if (x.size() != param_count(spec)) {
    throw DimensionError("parameter vector length does not match model layout");
  }
  if (features.rows() != spec.input_window || features.cols() != spec.feature_dim) {
    throw DimensionError("feature matrix shape does not match model spec");
  }
}

}  // namespace

QuantileForecast predict(const ModelSpec& spec, std::span<const double> x,
                         const Matrix& features) {
  check_feature_shape(spec, x, features);
  switch (spec.kind) {
    case ModelKind::linear:
      return run_forward<detail::LinearPass>(spec, x, features);
    case ModelKind::mlp:
      return run_forward<detail::MlpPass>(spec, x, features);
    case ModelKind::lstm:
      return run_forward<detail::LstmPass>(spec, x, features);
  }
  throw DomainError("unknown model kind");
}

QuantileForecast forward(const ParamVector& params, const LossContext& ctx) {
  check_shapes(params.spec(), ctx);
  return predict(params.spec(), params.data().span(), ctx.features);
}

Evaluation evaluate_model(const ModelSpec& spec, std::span<const double> x,
                          const LossContext& ctx) {
  check_shapes(spec, ctx);
  check_feature_shape(spec, x, ctx.features);
  switch (spec.kind) {
    case ModelKind::linear:
      return run_pass<detail::LinearPass>(spec, x, ctx);
    case ModelKind::mlp:
      return run_pass<detail::MlpPass>(spec, x, ctx);
    case ModelKind::lstm:
      return run_pass<detail::LstmPass>(spec, x, ctx);
  }
  throw DomainError("unknown model kind");
}

LossAndGrad loss_and_grad(const ParamVector& params, const LossContext& ctx) {
  Evaluation eval = evaluate_model(params.spec(), params.data().span(), ctx);
  if (!eval.finite) {
    throw NumericError("non-finite loss or gradient at step " + std::to_string(ctx.step_index),
                       ctx.step_index);
  }
  return {eval.loss, std::move(eval.grad)};
}

ModelObjective::ModelObjective(ModelSpec spec)
    : spec_(spec), dimension_(param_count(spec)) {}

Evaluation ModelObjective::evaluate(std::span<const double> x, const LossContext& ctx) const {
  return evaluate_model(spec_, x, ctx);
}

namespace {

// True when a probe pair moves some forecast cell across, or within `near`
// of, its pinball kink.
bool crosses_kink(const ModelSpec& spec, const LossContext& ctx, const QuantileForecast& up,
                  const QuantileForecast& down, double near) {
  for (std::size_t q = 0; q < spec.quantile_count; ++q) {
    for (std::size_t k = 1; k <= spec.horizons; ++k) {
      if (up.at(k, q) == down.at(k, q)) continue;
      const double ru = up.at(k, q) - ctx.targets[k - 1];
      const double rd = down.at(k, q) - ctx.targets[k - 1];
      if ((ru > 0) != (rd > 0) || std::abs(ru) < near || std::abs(rd) < near) return true;
    }
  }
  return false;
}

}  // namespace

GradCheckReport grad_check(const ModelSpec& spec, std::size_t trials, Rng& rng) {
  validate(spec);
  if (trials == 0) throw DomainError("grad_check needs at least one trial");
  constexpr double kStep = 1e-5;
  constexpr double kKink = 1e-4;
  constexpr double kFloor = 1e-4;

  GradCheckReport report;
  const std::size_t d = param_count(spec);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Vector x(d);
    for (double& v : x) v = rng.uniform(-0.5, 0.5);

    std::vector<double> levels(spec.quantile_count);
    for (std::size_t q = 0; q < levels.size(); ++q) {
      levels[q] = (static_cast<double>(q) + rng.uniform(0.1, 0.9)) /
                  static_cast<double>(levels.size());
    }
    LossContext ctx{Matrix(spec.input_window, spec.feature_dim),
                    std::vector<double>(spec.horizons), QuantileSet(levels),
                    static_cast<std::int64_t>(trial + 1)};
    for (double& v : ctx.features.flat()) v = rng.normal();
    for (double& v : ctx.targets) v = rng.normal();

    const Evaluation analytic = evaluate_model(spec, x.span(), ctx);

    Vector probe = x;
    for (std::size_t j = 0; j < d; ++j) {
      probe[j] = x[j] + kStep;
      const QuantileForecast yhat_up = predict(spec, probe.span(), ctx.features);
      const double up = total_quantile_loss(ctx.targets, yhat_up, ctx.quantiles);
      probe[j] = x[j] - kStep;
      const QuantileForecast yhat_down = predict(spec, probe.span(), ctx.features);
      const double down = total_quantile_loss(ctx.targets, yhat_down, ctx.quantiles);
      probe[j] = x[j];
      if (crosses_kink(spec, ctx, yhat_up, yhat_down, kKink)) {
        ++report.skipped;
        continue;
      }
      const double numeric = (up - down) / (2.0 * kStep);
      const double a = analytic.grad[j];
      const double denom = std::max({std::abs(a), std::abs(numeric), kFloor});
      report.max_relative_error =
          std::max(report.max_relative_error, std::abs(a - numeric) / denom);
      ++report.checked;
    }
  }
  return report;
}

}  // namespace tsgd

#include "tsgd/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "tsgd/error.hpp"
#include "tsgd/kernels.hpp"

namespace tsgd {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::sgd:
      return "sgd";
    case Method::hts:
      return "hts";
    case Method::pts:
      return "pts";
  }
  return "unknown";
}

std::string_view to_string(Schedule s) noexcept {
  return s == Schedule::constant ? "constant" : "inverse_sqrt";
}

Method parse_method(std::string_view name) {
  if (name == "sgd") return Method::sgd;
  if (name == "hts") return Method::hts;
  if (name == "pts") return Method::pts;
  throw DomainError("unknown optimizer method '" + std::string(name) + "'");
}

Schedule parse_schedule(std::string_view name) {
  if (name == "constant") return Schedule::constant;
  if (name == "inverse_sqrt") return Schedule::inverse_sqrt;
  throw DomainError("unknown learning-rate schedule '" + std::string(name) + "'");
}

void validate(const OptimizerConfig& config) {
  if (!(config.eta > 0.0) || !std::isfinite(config.eta)) {
    throw DomainError("learning rate eta must be positive");
  }
  if (config.window < 1) throw DomainError("window w must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
    throw DomainError("alpha must lie in (0, 1]");
  }
}

double lr_at(double eta, std::int64_t t, Schedule schedule) {
  if (t < 1) throw DomainError("learning-rate step counter starts at 1");
  if (schedule == Schedule::constant) return eta;
  return eta / std::sqrt(static_cast<double>(t));
}

ContextBuffer::ContextBuffer(std::size_t window) : ring_(window) {
  if (window < 1) throw DomainError("context window must be >= 1");
}

void ContextBuffer::push(LossContext ctx) {
  if (!ring_.empty() && ctx.step_index != ring_.newest().step_index + 1) {
    throw SequencingError("context for step " + std::to_string(ctx.step_index) +
                          " does not follow step " +
                          std::to_string(ring_.newest().step_index));
  }
  ring_.push(std::move(ctx));
}

GradientBuffer::GradientBuffer(std::size_t window, double alpha)
    : ring_(window), alpha_(alpha), normalizer_(0.0), weights_(window) {
  if (window < 1) throw DomainError("gradient window must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  double power = 1.0;
  for (std::size_t i = 0; i < window; ++i) {
    weights_[i] = power;
    normalizer_ += power;
    power *= alpha;
  }
}

void GradientBuffer::push(std::int64_t step, Vector grad) {
  if (!ring_.empty()) {
    if (step != ring_.newest().step + 1) {
      throw SequencingError("gradient for step " + std::to_string(step) +
                            " does not follow step " + std::to_string(ring_.newest().step));
    }
    if (grad.size() != ring_.newest().grad.size()) {
      throw DimensionError("gradient length changed within a run");
    }
  }
  ring_.push(Entry{step, std::move(grad)});
}

Vector GradientBuffer::smoothed() const {
  if (ring_.empty()) throw StateError("gradient buffer is empty");
  const auto& kern = simd::active();
  const std::size_t d = ring_.newest().grad.size();
  Vector sum(d, 0.0);
  for (std::size_t age = 0; age < ring_.size(); ++age) {
    kern.axpy(weights_[age], ring_.newest(age).grad.data(), sum.data(), d);
  }
  kern.scale(1.0 / normalizer_, sum.data(), d);
  return sum;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_dimension(const Objective& f, const Vector& x) {
  if (x.size() != f.dimension()) {
    throw DimensionError("iterate length " + std::to_string(x.size()) +
                         " does not match objective dimension " +
                         std::to_string(f.dimension()));
  }
}

// x - eta_t * direction, with the receipt fields every rule shares.
void finish(StepResult& out, const Vector& x, const Vector& direction, double eta_t) {
  out.x = add_scaled(x, direction, -eta_t);
  out.receipt.eta_t = eta_t;
  out.receipt.smoothed_grad_norm_sq = norm_sq(direction);
  out.receipt.diverged = out.receipt.diverged || !is_finite(out.x);
}

}  // namespace

StepResult sgd_step(const Objective& f, const Vector& x, const LossContext& ctx, double eta_t) {
  check_dimension(f, x);
  const auto start = Clock::now();
  StepResult out;
  Evaluation eval = f.evaluate(x.span(), ctx);
  out.receipt.step_index = ctx.step_index;
  out.receipt.grad_evals = 1;
  out.receipt.diverged = !eval.finite;
  finish(out, x, eval.grad, eta_t);
  out.loss_at_iterate = eval.loss;
  out.grad_at_iterate = std::move(eval.grad);
  out.receipt.wall_time_s = seconds_since(start);
  return out;
}

StepResult hts_step(const Objective& f, const Vector& x, const ContextBuffer& buffer,
                    double eta_t) {
  if (buffer.empty()) throw StateError("hts_step needs the current context in the buffer");
  check_dimension(f, x);
  const auto start = Clock::now();
  const auto& kern = simd::active();
  StepResult out;
  out.receipt.step_index = buffer.newest().step_index;
  Vector sum(x.size(), 0.0);
  for (std::size_t age = 0; age < buffer.size(); ++age) {
    Evaluation eval = f.evaluate(x.span(), buffer.newest(age));
    ++out.receipt.grad_evals;
    out.receipt.diverged = out.receipt.diverged || !eval.finite;
    kern.axpy(1.0, eval.grad.data(), sum.data(), sum.size());
    if (age == 0) {
      out.loss_at_iterate = eval.loss;
      out.grad_at_iterate = std::move(eval.grad);
    }
  }
  kern.scale(1.0 / static_cast<double>(buffer.window()), sum.data(), sum.size());
  finish(out, x, sum, eta_t);
  out.receipt.wall_time_s = seconds_since(start);
  return out;
}

PtsStepResult pts_step(const Objective& f, const Vector& x, const LossContext& ctx,
                       GradientBuffer buffer, double eta_t) {
  check_dimension(f, x);
  const auto start = Clock::now();
  StepResult out;
  Evaluation eval = f.evaluate(x.span(), ctx);
  out.receipt.step_index = ctx.step_index;
  out.receipt.grad_evals = 1;
  out.receipt.diverged = !eval.finite;
  out.loss_at_iterate = eval.loss;
  out.grad_at_iterate = eval.grad;
  buffer.push(ctx.step_index, std::move(eval.grad));
  finish(out, x, buffer.smoothed(), eta_t);
  out.receipt.wall_time_s = seconds_since(start);
  return {std::move(out), std::move(buffer)};
}

OnlineOptimizer::OnlineOptimizer(OptimizerConfig config)
    : config_(config), contexts_(config.window), gradients_(config.window, config.alpha) {
  validate(config_);
}

StepResult OnlineOptimizer::step(const Objective& f, const Vector& x, LossContext ctx) {
  ++t_;
  ctx.step_index = t_;
  const double eta_t = lr_at(config_.eta, t_, config_.schedule);
  switch (config_.method) {
    case Method::sgd:
      return sgd_step(f, x, ctx, eta_t);
    case Method::hts:
      contexts_.push(std::move(ctx));
      return hts_step(f, x, contexts_, eta_t);
    case Method::pts: {
      PtsStepResult r = pts_step(f, x, ctx, std::move(gradients_), eta_t);
      gradients_ = std::move(r.buffer);
      return std::move(r.step);
    }
  }
  throw DomainError("unknown optimizer method");
}

}  // namespace tsgd

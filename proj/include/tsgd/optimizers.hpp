#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "tsgd/models.hpp"
#include "tsgd/numeric.hpp"
#include "tsgd/ring_buffer.hpp"

namespace tsgd {

enum class Method { sgd, hts, pts };
enum class Schedule { constant, inverse_sqrt };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(Schedule s) noexcept;
Method parse_method(std::string_view name);  // throws DomainError
Schedule parse_schedule(std::string_view name);

struct OptimizerConfig {
  Method method = Method::sgd;
  double eta = 1.0;
  std::size_t window = 1;  // w; ignored by sgd
  double alpha = 0.99;     // exponential weight; pts only
  Schedule schedule = Schedule::inverse_sqrt;
};

// Throws DomainError unless eta > 0, window >= 1 and 0 < alpha <= 1.
void validate(const OptimizerConfig& config);

// eta for constant, eta / sqrt(t) for inverse_sqrt. t is 1-based.
double lr_at(double eta, std::int64_t t, Schedule schedule);

struct StepReceipt {
  std::int64_t step_index = 0;
  double eta_t = 0.0;
  std::size_t grad_evals = 0;
  double smoothed_grad_norm_sq = 0.0;
  double wall_time_s = 0.0;
  bool diverged = false;
};

struct StepResult {
  Vector x;  // x_{t+1}
  StepReceipt receipt;
  // f_t(x_t) and its gradient at the iterate the step started from.
  double loss_at_iterate = 0.0;
  Vector grad_at_iterate;
};

// Last w loss contexts, consecutive step indices, newest last.
class ContextBuffer {
 public:
  explicit ContextBuffer(std::size_t window);

  // Throws SequencingError unless ctx.step_index follows the newest entry.
  void push(LossContext ctx);

  std::size_t window() const noexcept { return ring_.capacity(); }
  std::size_t size() const noexcept { return ring_.size(); }
  bool empty() const noexcept { return ring_.empty(); }
  const LossContext& newest(std::size_t age = 0) const { return ring_.newest(age); }

 private:
  RingBuffer<LossContext> ring_;
};

// Last w gradients, each taken at its own historical iterate, together with
// the weights alpha^i and their normalizer W = sum_{i<w} alpha^i. Steps that
// never happened (t <= 0) are simply absent and contribute zero.
class GradientBuffer {
 public:
  GradientBuffer(std::size_t window, double alpha);

  // Throws SequencingError unless step follows the newest entry, and
  // DimensionError if grad length differs from stored entries.
  void push(std::int64_t step, Vector grad);

  // (1/W) sum_i alpha^i g_{t-i} over stored entries, newest at i = 0.
  Vector smoothed() const;

  std::size_t window() const noexcept { return ring_.capacity(); }
  std::size_t size() const noexcept { return ring_.size(); }
  double alpha() const noexcept { return alpha_; }
  double normalizer() const noexcept { return normalizer_; }
  std::int64_t newest_step() const { return ring_.newest().step; }
  const Vector& newest(std::size_t age = 0) const { return ring_.newest(age).grad; }

 private:
  struct Entry {
    std::int64_t step;
    Vector grad;
  };
  RingBuffer<Entry> ring_;
  double alpha_;
  double normalizer_;
  std::vector<double> weights_;  // alpha^i
};

// x' = x - eta_t * grad f_t(x).
StepResult sgd_step(const Objective& f, const Vector& x, const LossContext& ctx, double eta_t);

// x' = x - (eta_t / w) * sum_{i<w} grad f_{t-i}(x): every buffered context is
// re-evaluated at the current x. The divisor is w even while the buffer is
// filling. Throws StateError on an empty buffer.
StepResult hts_step(const Objective& f, const Vector& x, const ContextBuffer& buffer,
                    double eta_t);

struct PtsStepResult {
  StepResult step;
  GradientBuffer buffer;
};

// Evaluates one new gradient grad f_t(x), pushes it, and steps along the
// exponentially weighted average of the buffered own-iterate gradients.
PtsStepResult pts_step(const Objective& f, const Vector& x, const LossContext& ctx,
                       GradientBuffer buffer, double eta_t);

// Single-owner state machine running one of the three update rules with a
// global 1-based step counter.
class OnlineOptimizer {
 public:
  explicit OnlineOptimizer(OptimizerConfig config);

  const OptimizerConfig& config() const noexcept { return config_; }
  std::int64_t steps_taken() const noexcept { return t_; }

  // Stamps ctx with the next step index and applies one update.
  StepResult step(const Objective& f, const Vector& x, LossContext ctx);

 private:
  OptimizerConfig config_;
  std::int64_t t_ = 0;
  ContextBuffer contexts_;
  GradientBuffer gradients_;
};

}  // namespace tsgd

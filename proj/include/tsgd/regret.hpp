#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tsgd/models.hpp"
#include "tsgd/numeric.hpp"

namespace tsgd {

struct TrajectoryRecord {
  std::int64_t step;  // t, 1-based
  Vector params;      // x_t
  LossContext context;
  Vector grad;  // grad f_t(x_t), logged when the step was taken
};

// Ordered log of the iterates, losses and own-iterate gradients of a run.
class Trajectory {
 public:
  // Throws SequencingError unless steps run 1, 2, ... and DimensionError if
  // params/grad lengths change.
  void push(TrajectoryRecord record);

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const TrajectoryRecord& operator[](std::size_t i) const noexcept { return records_[i]; }
  const std::vector<TrajectoryRecord>& records() const noexcept { return records_; }

 private:
  std::vector<TrajectoryRecord> records_;
};

struct HazanRegret {
  double total = 0.0;
  std::vector<double> terms;  // ||grad F_{t,w}(x_t)||^2 per t
  std::size_t grad_evals = 0;
};

struct ProposedRegret {
  double total = 0.0;
  std::vector<double> terms;  // ||grad S_{t,w}||^2 per t
};

// sum_t || (1/w) sum_{i<w} grad f_{t-i}(x_t) ||^2 with f_s = 0 for s <= 0.
// Every gradient is re-evaluated at x_t: sum_t min(w, t) evaluations.
HazanRegret hazan_regret(const Objective& f, const Trajectory& traj, std::size_t w);

// sum_t || (1/W) sum_{i<w} alpha^i grad f_{t-i}(x_{t-i}) ||^2, W = sum_{i<w} alpha^i,
// built only from the logged gradients.
ProposedRegret proposed_regret(const Trajectory& traj, std::size_t w, double alpha);

struct RegretReport {
  std::size_t T = 0;
  std::size_t w = 1;
  double alpha = 1.0;
  double hazan_total = 0.0;
  double proposed_total = 0.0;
  std::vector<double> hazan_terms;
  std::vector<double> proposed_terms;
  std::size_t hazan_grad_evals = 0;
};

RegretReport compute_regret(const Objective& f, const Trajectory& traj, std::size_t w,
                            double alpha);

}  // namespace tsgd

#include "tsgd/regret.hpp"

#include <string>

#include "tsgd/error.hpp"
#include "tsgd/kernels.hpp"

namespace tsgd {

void Trajectory::push(TrajectoryRecord record) {
  const auto expected = static_cast<std::int64_t>(records_.size()) + 1;
  if (record.step != expected) {
    throw SequencingError("trajectory expects step " + std::to_string(expected) + ", got " +
                          std::to_string(record.step));
  }
  if (!records_.empty() && (record.grad.size() != records_.front().grad.size() ||
                            record.params.size() != records_.front().params.size())) {
    throw DimensionError("trajectory record dimension changed");
  }
  if (record.grad.size() != record.params.size()) {
    throw DimensionError("trajectory gradient and parameter lengths differ");
  }
  records_.push_back(std::move(record));
}

HazanRegret hazan_regret(const Objective& f, const Trajectory& traj, std::size_t w) {
  if (w < 1) throw DomainError("regret window w must be >= 1");
  const auto& kern = simd::active();
  HazanRegret out;
  out.terms.reserve(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const Vector& x_t = traj[t].params;
    Vector sum(x_t.size(), 0.0);
    for (std::size_t i = 0; i < w && i <= t; ++i) {
      const Evaluation eval = f.evaluate(x_t.span(), traj[t - i].context);
      ++out.grad_evals;
      kern.axpy(1.0, eval.grad.data(), sum.data(), sum.size());
    }
    kern.scale(1.0 / static_cast<double>(w), sum.data(), sum.size());
    out.terms.push_back(norm_sq(sum));
    out.total += out.terms.back();
  }
  return out;
}

ProposedRegret proposed_regret(const Trajectory& traj, std::size_t w, double alpha) {
  if (w < 1) throw DomainError("regret window w must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  std::vector<double> weights(w);
  double normalizer = 0.0;
  double power = 1.0;
  for (std::size_t i = 0; i < w; ++i) {
    weights[i] = power;
    normalizer += power;
    power *= alpha;
  }
  const auto& kern = simd::active();
  ProposedRegret out;
  out.terms.reserve(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    Vector sum(traj[t].grad.size(), 0.0);
    for (std::size_t i = 0; i < w && i <= t; ++i) {
      kern.axpy(weights[i], traj[t - i].grad.data(), sum.data(), sum.size());
    }
    kern.scale(1.0 / normalizer, sum.data(), sum.size());
    out.terms.push_back(norm_sq(sum));
    out.total += out.terms.back();
  }
  return out;
}

RegretReport compute_regret(const Objective& f, const Trajectory& traj, std::size_t w,
                            double alpha) {
  HazanRegret hr = hazan_regret(f, traj, w);
  ProposedRegret pr = proposed_regret(traj, w, alpha);
  RegretReport report;
  report.T = traj.size();
  report.w = w;
  report.alpha = alpha;
  report.hazan_total = hr.total;
  report.proposed_total = pr.total;
  report.hazan_terms = std::move(hr.terms);
  report.proposed_terms = std::move(pr.terms);
  report.hazan_grad_evals = hr.grad_evals;
  return report;
}

}  // namespace tsgd

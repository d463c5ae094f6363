#pragma once

// Internal: per-architecture forward/backward passes over a flat parameter
// vector. Each pass caches what its backward sweep needs from forward().

#include <span>
#include <vector>

#include "tsgd/losses.hpp"
#include "tsgd/models.hpp"
#include "tsgd/numeric.hpp"

namespace tsgd::detail {

// Offsets of the per-quantile linear heads that every kind ends with.
struct HeadsLayout {
  std::size_t offset;  // first head weight
  std::size_t input;   // width of the vector the heads read
};

HeadsLayout heads_layout(const ModelSpec& spec);

// out.head(q)[k] = b_q[k] + W_q[k] . z
void heads_forward(const ModelSpec& spec, const HeadsLayout& layout, std::span<const double> x,
                   std::span<const double> z, QuantileForecast& out);

// Accumulates head parameter gradients into grad and dz += W^T dyhat.
void heads_backward(const ModelSpec& spec, const HeadsLayout& layout, std::span<const double> x,
                    std::span<const double> z, const QuantileForecast& dyhat,
                    std::span<double> grad, std::span<double> dz);

class LinearPass {
 public:
  LinearPass(const ModelSpec& spec, std::span<const double> x, const Matrix& features);
  void forward(QuantileForecast& out);
  void backward(const QuantileForecast& dyhat, std::span<double> grad);

 private:
  const ModelSpec& spec_;
  std::span<const double> x_;
  const Matrix& features_;
};

class MlpPass {
 public:
  MlpPass(const ModelSpec& spec, std::span<const double> x, const Matrix& features);
  void forward(QuantileForecast& out);
  void backward(const QuantileForecast& dyhat, std::span<double> grad);

 private:
  const ModelSpec& spec_;
  std::span<const double> x_;
  const Matrix& features_;
  std::vector<double> hidden_;  // tanh activations
};

class LstmPass {
 public:
  LstmPass(const ModelSpec& spec, std::span<const double> x, const Matrix& features);
  void forward(QuantileForecast& out);
  void backward(const QuantileForecast& dyhat, std::span<double> grad);

 private:
  const ModelSpec& spec_;
  std::span<const double> x_;
  const Matrix& features_;
  // Per time step t (0-based), hidden size h:
  //   gates_[t] = [i, f, g, o] activations (4h), cells_[t] = c_t, hiddens_[t] = h_t.
  std::vector<std::vector<double>> gates_;
  std::vector<std::vector<double>> cells_;
  std::vector<std::vector<double>> hiddens_;
};

}  // namespace tsgd::detail

#include <algorithm>
#include <cmath>

#include "model_passes.hpp"
#include "tsgd/kernels.hpp"

namespace tsgd::detail {

namespace {

inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

}  // namespace

LstmPass::LstmPass(const ModelSpec& spec, std::span<const double> x, const Matrix& features)
    : spec_(spec), x_(x), features_(features) {}

// Standard cell, h_0 = c_0 = 0:
//   [i f g o] = [sig sig tanh sig](Wx x_t + Wh h_{t-1} + b)
//   c_t = f*c_{t-1} + i*g,   h_t = o*tanh(c_t)
// The quantile heads read h_T.
void LstmPass::forward(QuantileForecast& out) {
  const auto& kern = simd::active();
  const std::size_t h = spec_.hidden_dim;
  const std::size_t F = spec_.feature_dim;
  const std::size_t T = spec_.input_window;
  const double* wx = x_.data();
  const double* wh = wx + 4 * h * F;
  const double* b = wh + 4 * h * h;

  gates_.assign(T, std::vector<double>(4 * h));
  cells_.assign(T, std::vector<double>(h));
  hiddens_.assign(T, std::vector<double>(h));
  const std::vector<double> zeros(h, 0.0);

  for (std::size_t t = 0; t < T; ++t) {
    const double* xt = features_.row(t).data();
    const std::vector<double>& h_prev = t == 0 ? zeros : hiddens_[t - 1];
    const std::vector<double>& c_prev = t == 0 ? zeros : cells_[t - 1];
    std::vector<double>& gate = gates_[t];
    for (std::size_t r = 0; r < 4 * h; ++r) {
      gate[r] = b[r] + kern.dot(wx + r * F, xt, F) + kern.dot(wh + r * h, h_prev.data(), h);
    }
    for (std::size_t u = 0; u < h; ++u) {
      const double i = sigmoid(gate[u]);
      const double f = sigmoid(gate[h + u]);
      const double g = std::tanh(gate[2 * h + u]);
      const double o = sigmoid(gate[3 * h + u]);
      gate[u] = i;
      gate[h + u] = f;
      gate[2 * h + u] = g;
      gate[3 * h + u] = o;
      cells_[t][u] = f * c_prev[u] + i * g;
      hiddens_[t][u] = o * std::tanh(cells_[t][u]);
    }
  }
  heads_forward(spec_, heads_layout(spec_), x_, hiddens_[T - 1], out);
}

void LstmPass::backward(const QuantileForecast& dyhat, std::span<double> grad) {
  const auto& kern = simd::active();
  const std::size_t h = spec_.hidden_dim;
  const std::size_t F = spec_.feature_dim;
  const std::size_t T = spec_.input_window;
  const double* wh = x_.data() + 4 * h * F;
  double* gwx = grad.data();
  double* gwh = gwx + 4 * h * F;
  double* gb = gwh + 4 * h * h;

  std::vector<double> dh(h, 0.0);
  std::vector<double> dc(h, 0.0);
  std::vector<double> dpre(4 * h);
  heads_backward(spec_, heads_layout(spec_), x_, hiddens_[T - 1], dyhat, grad, dh);

  const std::vector<double> zeros(h, 0.0);
  for (std::size_t t = T; t-- > 0;) {
    const std::vector<double>& gate = gates_[t];
    const std::vector<double>& c_prev = t == 0 ? zeros : cells_[t - 1];
    const std::vector<double>& h_prev = t == 0 ? zeros : hiddens_[t - 1];
    for (std::size_t u = 0; u < h; ++u) {
      const double i = gate[u];
      const double f = gate[h + u];
      const double g = gate[2 * h + u];
      const double o = gate[3 * h + u];
      const double tc = std::tanh(cells_[t][u]);
      const double dcu = dc[u] + dh[u] * o * (1.0 - tc * tc);
      dpre[u] = dcu * g * i * (1.0 - i);
      dpre[h + u] = dcu * c_prev[u] * f * (1.0 - f);
      dpre[2 * h + u] = dcu * i * (1.0 - g * g);
      dpre[3 * h + u] = dh[u] * tc * o * (1.0 - o);
      dc[u] = dcu * f;
    }
    const double* xt = features_.row(t).data();
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t r = 0; r < 4 * h; ++r) {
      const double d = dpre[r];
      if (d == 0.0) continue;
      kern.axpy(d, xt, gwx + r * F, F);
      kern.axpy(d, h_prev.data(), gwh + r * h, h);
      gb[r] += d;
      kern.axpy(d, wh + r * h, dh.data(), h);
    }
  }
}

}  // namespace tsgd::detail

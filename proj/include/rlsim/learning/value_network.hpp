#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "rlsim/core/error.hpp"
#include "rlsim/core/random.hpp"

namespace rlsim {

inline double sigmoid(double z) noexcept { return 1.0 / (1.0 + std::exp(-z)); }

// Feed-forward win-expectation estimator: input -> ceil(input/2) sigmoid
// hidden units -> one sigmoid output in (0, 1).
//
// Parameters live in one flat vector laid out as
//   [ W1 (hidden x input, row-major) | b1 (hidden) | W2 (hidden) | b2 ]
// and gradients use the same layout.
class ValueNetwork {
public:
  ValueNetwork() = default;

  // All-zero weights; evaluates to 0.5 everywhere.
  explicit ValueNetwork(std::size_t input_width)
      : input_(input_width), hidden_((input_width + 1) / 2), params_(param_count(input_, hidden_), 0.0) {}

  // Weights drawn uniformly from [-scale, scale].
  static ValueNetwork random(std::size_t input_width, std::uint64_t seed, double scale = 0.5) {
    ValueNetwork net(input_width);
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    for (double& p : net.params_) p = u(rng);
    return net;
  }

  static std::size_t param_count(std::size_t input, std::size_t hidden) { return hidden * input + 2 * hidden + 1; }

  std::size_t input_width() const noexcept { return input_; }
  std::size_t hidden_width() const noexcept { return hidden_; }
  std::span<double> parameters() noexcept { return params_; }
  std::span<const double> parameters() const noexcept { return params_; }

  double evaluate(std::span<const double> x) const {
    check(x);
    double out = b2();
    const double* w1 = params_.data();
    const double* b1 = w1 + hidden_ * input_;
    const double* w2 = b1 + hidden_;
    for (std::size_t k = 0; k < hidden_; ++k) out += w2[k] * sigmoid(b1[k] + dot(w1 + k * input_, x));
    return sigmoid(out);
  }

  // d output / d parameter, flat layout. Also reports the output value.
  std::vector<double> gradient(std::span<const double> x, double* value = nullptr) const {
    check(x);
    const double* w1 = params_.data();
    const double* b1 = w1 + hidden_ * input_;
    const double* w2 = b1 + hidden_;
    std::vector<double> h(hidden_);
    double z2 = b2();
    for (std::size_t k = 0; k < hidden_; ++k) {
      h[k] = sigmoid(b1[k] + dot(w1 + k * input_, x));
      z2 += w2[k] * h[k];
    }
    const double v = sigmoid(z2);
    if (value) *value = v;
    const double dz2 = v * (1.0 - v);

    std::vector<double> g(params_.size());
    double* gw1 = g.data();
    double* gb1 = gw1 + hidden_ * input_;
    double* gw2 = gb1 + hidden_;
    for (std::size_t k = 0; k < hidden_; ++k) {
      const double dz1 = dz2 * w2[k] * h[k] * (1.0 - h[k]);
      for (std::size_t j = 0; j < input_; ++j) gw1[k * input_ + j] = dz1 * x[j];
      gb1[k] = dz1;
      gw2[k] = dz2 * h[k];
    }
    g.back() = dz2;
    return g;
  }

  void add_scaled(std::span<const double> direction, double scale) {
    if (direction.size() != params_.size()) throw DimensionMismatch(params_.size(), direction.size());
    for (std::size_t i = 0; i < params_.size(); ++i) params_[i] += scale * direction[i];
  }

  bool all_finite() const noexcept {
    for (double p : params_)
      if (!std::isfinite(p)) return false;
    return true;
  }

  friend bool operator==(const ValueNetwork&, const ValueNetwork&) = default;

private:
  void check(std::span<const double> x) const {
    if (x.size() != input_) throw DimensionMismatch(input_, x.size());
  }
  double dot(const double* w, std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < input_; ++j) s += w[j] * x[j];
    return s;
  }
  double b2() const { return params_.back(); }

  std::size_t input_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> params_;
};

}  // namespace rlsim

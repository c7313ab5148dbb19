// Copyright 2026 The frets Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "frets/check_suite.hpp"

#include <algorithm>
#include <chrono>
#include <complex>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "frets/fft.hpp"
#include "frets/fremlp.hpp"
#include "frets/random.hpp"
#include "frets/training.hpp"

namespace frets::check {
namespace {

using Clock = std::chrono::steady_clock;

RealTensor normal_tensor(Shape shape, std::mt19937_64& rng, double stddev = 1.0) {
  RealTensor t(std::move(shape));
  std::normal_distribution<double> dist(0.0, stddev);
  for (auto& v : t.values()) v = dist(rng);
  return t;
}

// Tracks the worst instance and the first failure.
class Tracker {
 public:
  Tracker(std::string name, double tolerance) : started_(Clock::now()) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  void record(double error, std::uint64_t seed) {
    ++result_.instances;
    const bool bad = !(error < result_.tolerance);
    if (bad && result_.passed) {
      result_.passed = false;
      result_.worst_seed = seed;
      result_.max_error = error;
      return;
    }
    if (result_.passed && error > result_.max_error) {
      result_.max_error = error;
      result_.worst_seed = seed;
    } else if (!result_.passed && error > result_.max_error) {
      result_.max_error = error;
    }
  }

  SuiteResult finish(std::string detail = {}) {
    result_.seconds = std::chrono::duration<double>(Clock::now() - started_).count();
    result_.detail = std::move(detail);
    return result_;
  }

 private:
  SuiteResult result_;
  Clock::time_point started_;
};

// Real signal whose full spectrum is the Hermitian extension of the given
// retained bins (imaginary DC/Nyquist parts dropped), by direct summation.
std::vector<double> hermitian_inverse(const std::vector<std::complex<double>>& bins,
                                      std::size_t n) {
  std::vector<std::complex<double>> full(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = std::min(k, n - k);
    const std::complex<double> v = bins[j];
    full[k] = (k <= n / 2) ? v : std::conj(v);
  }
  full[0] = full[0].real();
  if (n % 2 == 0) full[n / 2] = full[n / 2].real();
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi *
                           static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += full[k].real() * std::cos(angle) - full[k].imag() * std::sin(angle);
    }
    out[t] = acc / static_cast<double>(n);
  }
  return out;
}

ModelConfig gradient_config(std::uint64_t seed) {
  ModelConfig c;
  c.channels = 3;
  c.lookback = 4;
  c.horizon = 2;
  c.embed_dim = 2;
  c.hidden_dim = 3;
  c.seed = seed;
  return c;
}

// Non-zero biases everywhere so bias gradients and relu gates are exercised.
void randomize_biases(FreTSParams& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  auto fill = [&](RealTensor& t) {
    for (auto& v : t.values()) v = dist(rng);
  };
  for (auto& layer : p.channel) {
    fill(layer.b_re);
    fill(layer.b_im);
  }
  for (auto& layer : p.temporal) {
    fill(layer.b_re);
    fill(layer.b_im);
  }
  for (auto& layer : p.channel_time) fill(layer.bias);
  for (auto& layer : p.temporal_time) fill(layer.bias);
  fill(p.proj_b1);
  fill(p.proj_b2);
}

double min_abs(const RealTensor& t) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : t.values()) m = std::min(m, std::abs(v));
  return m;
}

}  // namespace

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

SuiteResult parseval(std::uint64_t seed, std::size_t count, std::size_t max_length) {
  Tracker tracker("parseval", 1e-9);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    std::mt19937_64 rng(s);
    const std::size_t n = 1 + i % max_length;
    const RealTensor x = normal_tensor({n}, rng);
    double time_energy = 0.0;
    for (double v : x.values()) time_energy += v * v;

    const ComplexTensor full = naive_dft(x, 0);
    double full_energy = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      full_energy += full.re[k] * full.re[k] + full.im[k] * full.im[k];
    full_energy /= static_cast<double>(n);

    const ComplexTensor half = rfft(x, 0);
    double half_energy = 0.0;
    for (std::size_t k = 0; k < half.size(); ++k) {
      const double weight = (k == 0 || (n % 2 == 0 && k == n / 2)) ? 1.0 : 2.0;
      half_energy += weight * (half.re[k] * half.re[k] + half.im[k] * half.im[k]);
    }
    half_energy /= static_cast<double>(n);

    const double err = std::max(std::abs(time_energy - full_energy),
                                std::abs(time_energy - half_energy)) /
                       time_energy;
    tracker.record(err, s);
  }
  return tracker.finish("relative energy error, lengths 1.." + std::to_string(max_length));
}

SuiteResult fft_oracle(std::uint64_t seed, std::size_t max_length,
                       std::size_t per_length) {
  Tracker tracker("fft_oracle", 1e-9);
  for (std::size_t n = 1; n <= max_length; ++n) {
    for (std::size_t r = 0; r < per_length; ++r) {
      const std::uint64_t s = derive_seed(seed, n * 100003 + r);
      std::mt19937_64 rng(s);
      const RealTensor x = normal_tensor({n}, rng);
      const ComplexTensor fast = rfft(x, 0);
      const ComplexTensor slow = naive_dft(x, 0);
      double err = 0.0;
      for (std::size_t k = 0; k < fast.size(); ++k) {
        err = std::max(err, std::abs(fast.re[k] - slow.re[k]));
        err = std::max(err, std::abs(fast.im[k] - slow.im[k]));
      }
      tracker.record(err, s);
    }
  }
  return tracker.finish("max abs error on retained bins");
}

SuiteResult round_trip(std::uint64_t seed, std::size_t max_length,
                       std::size_t per_length) {
  Tracker tracker("round_trip", 1e-9);
  for (std::size_t n = 1; n <= max_length; ++n) {
    for (std::size_t r = 0; r < per_length; ++r) {
      const std::uint64_t s = derive_seed(seed, n * 100003 + r);
      std::mt19937_64 rng(s);
      const RealTensor x = normal_tensor({n}, rng);
      tracker.record(max_abs_diff(irfft(rfft(x, 0), n, 0), x), s);
    }
  }
  return tracker.finish("max abs error of irfft(rfft(x))");
}

SuiteResult convolution_theorem(std::uint64_t seed, std::size_t count) {
  Tracker tracker("convolution_theorem", 1e-9);
  const std::size_t lengths[] = {8, 16, 32};
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    std::mt19937_64 rng(s);
    const std::size_t n = lengths[i % 3];
    const RealTensor h = normal_tensor({n}, rng);
    const RealTensor w = normal_tensor({n}, rng);
    const RealTensor spectral = irfft(complex_mul(rfft(h, 0), rfft(w, 0)), n, 0);
    tracker.record(max_abs_diff(spectral, circular_conv(h, w)), s);
  }
  return tracker.finish("max abs error, lengths 8/16/32");
}

SuiteResult fremlp_convolution(std::uint64_t seed, std::size_t count) {
  Tracker tracker("fremlp_convolution", 1e-9);
  const std::size_t lengths[] = {8, 16, 32, 7, 12};
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    std::mt19937_64 rng(s);
    const std::size_t n = lengths[i % 5];
    const std::size_t d = i % 2 == 0 ? 1 : 1 + i % 4;
    // Signals h_c for every input coordinate c, laid out [n x d].
    const RealTensor h = normal_tensor({n, d}, rng);
    FreMLPParams p{normal_tensor({d, d}, rng), normal_tensor({d, d}, rng),
                   normal_tensor({d}, rng), normal_tensor({d}, rng)};
    const RealTensor y =
        irfft(fremlp_forward(rfft(h, 0), p, Activation::kIdentity), n, 0);

    double err = 0.0;
    for (std::size_t o = 0; o < d; ++o) {
      std::vector<std::complex<double>> bias_bins(n / 2 + 1, {p.b_re[o], p.b_im[o]});
      const std::vector<double> bias_time = hermitian_inverse(bias_bins, n);
      RealTensor expected({n});
      for (std::size_t t = 0; t < n; ++t) expected[t] = bias_time[t];
      for (std::size_t c = 0; c < d; ++c) {
        std::vector<std::complex<double>> w_bins(
            n / 2 + 1, {p.w_re[c * d + o], p.w_im[c * d + o]});
        const std::vector<double> kernel = hermitian_inverse(w_bins, n);
        RealTensor hc({n}), wk({n});
        for (std::size_t t = 0; t < n; ++t) {
          hc[t] = h[t * d + c];
          wk[t] = kernel[t];
        }
        expected = add(expected, circular_conv(hc, wk));
      }
      for (std::size_t t = 0; t < n; ++t)
        err = std::max(err, std::abs(y[t * d + o] - expected[t]));
    }
    tracker.record(err, s);
  }
  return tracker.finish("max abs error, d in 1..4, lengths 7/8/12/16/32");
}

SuiteResult fremlp_gradient(std::uint64_t seed, std::size_t count) {
  Tracker tracker("fremlp_gradient", 1e-5);
  const double eps = 1e-6;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    std::mt19937_64 rng(s);
    const std::size_t d = 1 + i % 8, m = 1 + i % 4;
    const Activation act = i % 2 ? Activation::kRelu : Activation::kIdentity;
    ComplexTensor x(normal_tensor({m, d}, rng), normal_tensor({m, d}, rng));
    FreMLPParams p = fremlp_init(d, s);
    p.b_re = normal_tensor({d}, rng, 0.5);
    p.b_im = normal_tensor({d}, rng, 0.5);
    const ComplexTensor up(normal_tensor({m, d}, rng), normal_tensor({m, d}, rng));
    if (act == Activation::kRelu) {
      const ComplexTensor pre = fremlp_forward(x, p, Activation::kIdentity);
      if (std::min(min_abs(pre.re), min_abs(pre.im)) < 1e-4) continue;
    }
    const FreMLPGrads g = fremlp_backward(x, p, up, act);
    auto objective = [&](const ComplexTensor& in, const FreMLPParams& params) {
      const ComplexTensor y = fremlp_forward(in, params, act);
      double acc = 0.0;
      for (std::size_t k = 0; k < y.size(); ++k)
        acc += y.re[k] * up.re[k] + y.im[k] * up.im[k];
      return acc;
    };
    double err = 0.0;
    auto probe = [&](RealTensor& target, const RealTensor& analytic) {
      for (std::size_t k = 0; k < target.size(); ++k) {
        const double saved = target[k];
        target[k] = saved + eps;
        const double plus = objective(x, p);
        target[k] = saved - eps;
        const double minus = objective(x, p);
        target[k] = saved;
        err = std::max(err, relative_error(analytic[k], (plus - minus) / (2 * eps)));
      }
    };
    probe(p.w_re, g.w_re);
    probe(p.w_im, g.w_im);
    probe(p.b_re, g.b_re);
    probe(p.b_im, g.b_im);
    probe(x.re, g.input.re);
    probe(x.im, g.input.im);
    tracker.record(err, s);
  }
  return tracker.finish("max relative error vs central differences (eps 1e-6)");
}

double relu_margin(const RealTensor& x, const FreTSParams& params,
                   const ModelConfig& config) {
  double margin = std::numeric_limits<double>::infinity();
  const bool freq = config.domain == LearnerDomain::kFrequency;
  auto learner = [&](const RealTensor& in, std::size_t axis,
                     const std::vector<FreMLPParams>& fl,
                     const std::vector<DenseParams>& tl) {
    if (freq) {
      ComplexTensor spec = rfft(in, axis);
      for (const auto& layer : fl) {
        ComplexTensor pre = fremlp_forward(spec, layer, Activation::kIdentity);
        if (config.learner_activation == Activation::kRelu) {
          margin = std::min({margin, min_abs(pre.re), min_abs(pre.im)});
          pre = {relu(pre.re), relu(pre.im)};
        }
        spec = std::move(pre);
      }
      return irfft(spec, in.dim(axis), axis);
    }
    RealTensor rows = as_rows(in);
    for (const auto& layer : tl) {
      rows = add_row_vector(matmul(rows, layer.weight), layer.bias);
      if (config.learner_activation == Activation::kRelu) {
        margin = std::min(margin, min_abs(rows));
        rows = relu(rows);
      }
    }
    return std::move(rows).reshaped(in.shape());
  };
  RealTensor h = dimension_extension(x, params.embedding);
  if (config.channel_learner_active())
    h = learner(h, 1, params.channel, params.channel_time);
  if (config.temporal_learner_active())
    h = learner(h, 2, params.temporal, params.temporal_time);
  const std::size_t rows = x.dim(0) * config.channels;
  const RealTensor hidden_pre = add_row_vector(
      matmul(h.reshaped({rows, config.lookback * config.embed_dim}), params.proj_w1),
      params.proj_b1);
  if (config.projection_activation == Activation::kRelu)
    margin = std::min(margin, min_abs(hidden_pre));
  return margin;
}

double frets_gradient_error(const RealTensor& x, const RealTensor& targets,
                            const FreTSParams& params, const ModelConfig& config,
                            double eps) {
  const LossAndGrads analytic = frets_backward(x, targets, params, config);
  std::vector<const RealTensor*> grads;
  for_each_block(analytic.grads,
                 [&](const std::string&, const RealTensor& t) { grads.push_back(&t); });
  FreTSParams probe = params;
  double err = 0.0;
  std::size_t block = 0;
  for_each_block(probe, [&](const std::string&, RealTensor& t) {
    const RealTensor& g = *grads[block++];
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double saved = t[k];
      t[k] = saved + eps;
      const double plus = mse_loss(frets_forward(x, probe, config), targets);
      t[k] = saved - eps;
      const double minus = mse_loss(frets_forward(x, probe, config), targets);
      t[k] = saved;
      err = std::max(err, relative_error(g[k], (plus - minus) / (2 * eps)));
    }
  });
  return err;
}

SuiteResult frets_gradient(std::uint64_t seed, std::size_t count) {
  Tracker tracker("frets_gradient", 1e-4);
  std::size_t redraws = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    // Redraw until every relu input sits at least 1e-4 away from its kink.
    for (std::uint64_t attempt = 0;; ++attempt) {
      const std::uint64_t instance = derive_seed(s, attempt);
      std::mt19937_64 rng(instance);
      const ModelConfig config = gradient_config(instance);
      FreTSParams params = init_params(config);
      randomize_biases(params, rng);
      const RealTensor x = normal_tensor({2, config.channels, config.lookback}, rng);
      const RealTensor y = normal_tensor({2, config.channels, config.horizon}, rng);
      if (relu_margin(x, params, config) < 1e-4 && attempt < 16) {
        ++redraws;
        continue;
      }
      tracker.record(frets_gradient_error(x, y, params, config), s);
      break;
    }
  }
  return tracker.finish("max relative error vs central differences (eps 1e-6), " +
                        std::to_string(redraws) + " instances redrawn near relu kinks");
}

std::vector<SuiteResult> run_all(std::uint64_t seed) {
  return {parseval(derive_seed(seed, 1)),
          fft_oracle(derive_seed(seed, 2)),
          round_trip(derive_seed(seed, 3)),
          convolution_theorem(derive_seed(seed, 4)),
          fremlp_convolution(derive_seed(seed, 5)),
          fremlp_gradient(derive_seed(seed, 6)),
          frets_gradient(derive_seed(seed, 7))};
}

}  // namespace frets::check

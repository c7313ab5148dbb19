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

#include "frets/fft.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "frets/errors.hpp"

namespace frets {
namespace {

#ifdef FRETS_FAULT_INJECTION
std::atomic<bool> g_skip_adjoint_scaling{false};
bool skip_adjoint_scaling() { return g_skip_adjoint_scaling.load(); }
#else
constexpr bool skip_adjoint_scaling() { return false; }
#endif

constexpr std::size_t kMaxDirectRadix = 31;

// Transforms run on blocks of up to this many independent signals at once.
// Rows hold one time (or bin) index, columns one signal ("lane").
constexpr std::size_t kLaneBlock = 32;

// Prime factors in ascending order, with pairs of 2 merged into 4.
std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> f;
  while (n % 4 == 0) {
    f.push_back(4);
    n /= 4;
  }
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      f.push_back(p);
      n /= p;
    }
  }
  if (n > 1) f.push_back(n);
  return f;
}

bool is_smooth(std::size_t n) {
  for (std::size_t p : factorize(n))
    if (p > kMaxDirectRadix) return false;
  return true;
}

// Split-storage block of `rows` x `lanes` complex values.
struct Block {
  double* re;
  double* im;
};

// Recursive decimation-in-time Cooley-Tukey for lengths whose prime factors
// are all at most kMaxDirectRadix. Forward (e^{-i}) and unnormalized,
// applied to every lane of a block.
class MixedRadix {
 public:
  explicit MixedRadix(std::size_t n)
      : n_(n), factors_(factorize(n)), cos_(n), sin_(n) {
    for (std::size_t k = 0; k < n; ++k) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      cos_[k] = std::cos(angle);
      sin_[k] = std::sin(angle);
    }
  }

  std::size_t size() const { return n_; }

  // `out` must not alias `in`. `scratch` needs 2 * kMaxDirectRadix * lanes.
  void forward(Block in, Block out, std::size_t lanes, double* scratch) const {
    step(in, 1, out, n_, 0, lanes, scratch);
  }

 private:
  void step(Block in, std::size_t stride, Block out, std::size_t n, std::size_t level,
            std::size_t w, double* scratch) const {
    if (n == 1) {
      std::copy(in.re, in.re + w, out.re);
      std::copy(in.im, in.im + w, out.im);
      return;
    }
    const std::size_t p = factors_[level];
    const std::size_t m = n / p;
    for (std::size_t q = 0; q < p; ++q) {
      step({in.re + q * stride * w, in.im + q * stride * w}, stride * p,
           {out.re + q * m * w, out.im + q * m * w}, m, level + 1, w, scratch);
    }

    // Twiddles of order n are every s-th entry of the order-n_ table.
    const std::size_t s = n_ / n;
    auto twiddle = [&](std::size_t q, std::size_t k, const double* xr, const double* xi,
                       double* yr, double* yi) {
      const std::size_t idx = q * k * s;
      const double c = cos_[idx], sn = sin_[idx];
      for (std::size_t j = 0; j < w; ++j) {
        const double a = xr[j], b = xi[j];
        yr[j] = a * c - b * sn;
        yi[j] = a * sn + b * c;
      }
    };

    double* tr = scratch;
    double* ti = scratch + kMaxDirectRadix * w;
    for (std::size_t k = 0; k < m; ++k) {
      // t_q = out[q*m + k] * W_n^{qk}
      std::copy(out.re + k * w, out.re + (k + 1) * w, tr);
      std::copy(out.im + k * w, out.im + (k + 1) * w, ti);
      for (std::size_t q = 1; q < p; ++q) {
        twiddle(q, k, out.re + (q * m + k) * w, out.im + (q * m + k) * w, tr + q * w,
                ti + q * w);
      }
      if (p == 2) {
        double* r0 = out.re + k * w;
        double* i0 = out.im + k * w;
        double* r1 = out.re + (m + k) * w;
        double* i1 = out.im + (m + k) * w;
        for (std::size_t j = 0; j < w; ++j) {
          r0[j] = tr[j] + tr[w + j];
          i0[j] = ti[j] + ti[w + j];
          r1[j] = tr[j] - tr[w + j];
          i1[j] = ti[j] - ti[w + j];
        }
      } else if (p == 4) {
        double* r0 = out.re + k * w;
        double* i0 = out.im + k * w;
        double* r1 = out.re + (m + k) * w;
        double* i1 = out.im + (m + k) * w;
        double* r2 = out.re + (2 * m + k) * w;
        double* i2 = out.im + (2 * m + k) * w;
        double* r3 = out.re + (3 * m + k) * w;
        double* i3 = out.im + (3 * m + k) * w;
        for (std::size_t j = 0; j < w; ++j) {
          const double b0r = tr[j] + tr[2 * w + j], b0i = ti[j] + ti[2 * w + j];
          const double b1r = tr[j] - tr[2 * w + j], b1i = ti[j] - ti[2 * w + j];
          const double b2r = tr[w + j] + tr[3 * w + j], b2i = ti[w + j] + ti[3 * w + j];
          const double b3r = tr[w + j] - tr[3 * w + j], b3i = ti[w + j] - ti[3 * w + j];
          // -i * b3 = (b3i, -b3r)
          r0[j] = b0r + b2r;
          i0[j] = b0i + b2i;
          r1[j] = b1r + b3i;
          i1[j] = b1i - b3r;
          r2[j] = b0r - b2r;
          i2[j] = b0i - b2i;
          r3[j] = b1r - b3i;
          i3[j] = b1i + b3r;
        }
      } else {
        const std::size_t root_step = n_ / p;
        for (std::size_t r = 0; r < p; ++r) {
          double* yr = out.re + (r * m + k) * w;
          double* yi = out.im + (r * m + k) * w;
          std::copy(tr, tr + w, yr);
          std::copy(ti, ti + w, yi);
          for (std::size_t q = 1; q < p; ++q) {
            const std::size_t idx = ((q * r) % p) * root_step;
            const double c = cos_[idx], sn = sin_[idx];
            const double* xr = tr + q * w;
            const double* xi = ti + q * w;
            for (std::size_t j = 0; j < w; ++j) {
              yr[j] += xr[j] * c - xi[j] * sn;
              yi[j] += xr[j] * sn + xi[j] * c;
            }
          }
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

// Scratch reused across the blocks of one tensor transform.
struct Workspace {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> scratch;
};

// Forward complex DFT of arbitrary length: mixed radix when every prime
// factor is small, Bluestein's chirp-z reformulation otherwise.
class Plan {
 public:
  explicit Plan(std::size_t n) : n_(n) {
    if (is_smooth(n)) {
      core_ = std::make_unique<MixedRadix>(n);
      return;
    }
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    core_ = std::make_unique<MixedRadix>(m);
    chirp_re_.resize(n);
    chirp_im_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      // k^2 mod 2n keeps the angle argument small for long transforms.
      const std::size_t k2 = (k * k) % (2 * n);
      const double angle =
          -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
      chirp_re_[k] = std::cos(angle);
      chirp_im_[k] = std::sin(angle);
    }
    std::vector<double> kr(m, 0.0), ki(m, 0.0);
    kr[0] = chirp_re_[0];
    ki[0] = -chirp_im_[0];
    for (std::size_t k = 1; k < n; ++k) {
      kr[k] = kr[m - k] = chirp_re_[k];
      ki[k] = ki[m - k] = -chirp_im_[k];
    }
    kernel_re_.resize(m);
    kernel_im_.resize(m);
    std::vector<double> scratch(2 * kMaxDirectRadix);
    core_->forward({kr.data(), ki.data()}, {kernel_re_.data(), kernel_im_.data()}, 1,
                   scratch.data());
  }

  std::size_t size() const { return n_; }

  // Transforms every lane of an n-row block in place.
  void forward(Block x, std::size_t w, Workspace& ws) const {
    const std::size_t m = core_->size();
    ws.a.resize(2 * m * w);
    ws.b.resize(2 * m * w);
    ws.scratch.resize(2 * kMaxDirectRadix * w);
    Block a{ws.a.data(), ws.a.data() + m * w};
    Block b{ws.b.data(), ws.b.data() + m * w};
    if (chirp_re_.empty()) {
      core_->forward(x, a, w, ws.scratch.data());
      std::copy(a.re, a.re + m * w, x.re);
      std::copy(a.im, a.im + m * w, x.im);
      return;
    }
    std::fill(ws.a.begin(), ws.a.end(), 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
      const double c = chirp_re_[k], sn = chirp_im_[k];
      for (std::size_t j = 0; j < w; ++j) {
        const double u = x.re[k * w + j], v = x.im[k * w + j];
        a.re[k * w + j] = u * c - v * sn;
        a.im[k * w + j] = u * sn + v * c;
      }
    }
    core_->forward(a, b, w, ws.scratch.data());
    // Multiply by the kernel spectrum and conjugate, so the next forward
    // transform acts as an inverse.
    for (std::size_t k = 0; k < m; ++k) {
      const double c = kernel_re_[k], sn = kernel_im_[k];
      for (std::size_t j = 0; j < w; ++j) {
        const double u = b.re[k * w + j], v = b.im[k * w + j];
        b.re[k * w + j] = u * c - v * sn;
        b.im[k * w + j] = -(u * sn + v * c);
      }
    }
    core_->forward(b, a, w, ws.scratch.data());
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n_; ++k) {
      const double c = chirp_re_[k], sn = chirp_im_[k];
      for (std::size_t j = 0; j < w; ++j) {
        const double u = a.re[k * w + j] * inv_m, v = -a.im[k * w + j] * inv_m;
        x.re[k * w + j] = u * c - v * sn;
        x.im[k * w + j] = u * sn + v * c;
      }
    }
  }

 private:
  std::size_t n_;
  std::unique_ptr<MixedRadix> core_;
  std::vector<double> chirp_re_, chirp_im_;
  std::vector<double> kernel_re_, kernel_im_;
};

std::shared_ptr<const Plan> plan_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const Plan>(n);
  return slot;
}

// Strided view of `axis` inside a row-major shape.
struct AxisLayout {
  std::size_t outer = 1;
  std::size_t length = 1;
  std::size_t inner = 1;
};

AxisLayout layout_of(const Shape& shape, std::size_t axis, const char* op) {
  if (axis >= shape.size()) {
    throw DimensionError(std::string(op) + ": axis " + std::to_string(axis) +
                         " invalid for shape " + shape_to_string(shape));
  }
  AxisLayout l;
  for (std::size_t i = 0; i < axis; ++i) l.outer *= shape[i];
  l.length = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) l.inner *= shape[i];
  return l;
}

Shape with_axis(Shape shape, std::size_t axis, std::size_t length) {
  shape[axis] = length;
  return shape;
}

// Weight of bin k in the real inverse transform: 1 for DC and Nyquist,
// 2 for bins that also represent a dropped conjugate partner.
double bin_multiplicity(std::size_t k, std::size_t n) {
  if (k == 0) return 1.0;
  if (n % 2 == 0 && k == n / 2) return 1.0;
  return 2.0;
}

// Start offsets of signals [first, first + count) along an axis; signal s
// is (outer s / inner, lane s % inner).
void signal_offsets(const AxisLayout& l, std::size_t rows, std::size_t first,
                    std::size_t count, std::vector<std::size_t>& out) {
  out.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t s = first + j;
    out[j] = (s / l.inner) * rows * l.inner + s % l.inner;
  }
}

}  // namespace

#ifdef FRETS_FAULT_INJECTION
namespace fault {
void set_skip_adjoint_scaling(bool skip) { g_skip_adjoint_scaling = skip; }
}  // namespace fault
#endif

// Real signals travel in pairs: signal j in the real part and signal j + w
// in the imaginary part of one complex lane, which halves the transform work.
ComplexTensor rfft(const RealTensor& x, std::size_t axis) {
  const AxisLayout l = layout_of(x.shape(), axis, "rfft");
  const std::size_t n = l.length;
  const std::size_t bins = rfft_bins(n);
  ComplexTensor out(with_axis(x.shape(), axis, bins));
  const auto plan = plan_for(n);
  Workspace ws;
  std::vector<double> re(n * kLaneBlock), im(n * kLaneBlock);
  std::vector<std::size_t> src_off, dst_off;
  const std::size_t signals = l.outer * l.inner;
  for (std::size_t s0 = 0; s0 < signals; s0 += 2 * kLaneBlock) {
    const std::size_t count = std::min(2 * kLaneBlock, signals - s0);
    const std::size_t w = (count + 1) / 2;
    const std::size_t paired = count - w;  // signals in the imaginary half
    signal_offsets(l, n, s0, count, src_off);
    signal_offsets(l, bins, s0, count, dst_off);
    const double* src = x.data();
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t row = t * l.inner;
      for (std::size_t j = 0; j < w; ++j) re[t * w + j] = src[src_off[j] + row];
      for (std::size_t j = 0; j < paired; ++j) im[t * w + j] = src[src_off[w + j] + row];
      for (std::size_t j = paired; j < w; ++j) im[t * w + j] = 0.0;
    }
    plan->forward({re.data(), im.data()}, w, ws);
    // Split Z = X + iY using X_k = (Z_k + conj Z_{n-k}) / 2 and
    // Y_k = (Z_k - conj Z_{n-k}) / 2i.
    for (std::size_t k = 0; k < bins; ++k) {
      const std::size_t mk = k == 0 ? 0 : n - k;
      const std::size_t row = k * l.inner;
      for (std::size_t j = 0; j < w; ++j) {
        const double ar = re[k * w + j], ai = im[k * w + j];
        const double br = re[mk * w + j], bi = im[mk * w + j];
        out.re[dst_off[j] + row] = 0.5 * (ar + br);
        out.im[dst_off[j] + row] = 0.5 * (ai - bi);
        if (j < paired) {
          out.re[dst_off[w + j] + row] = 0.5 * (ai + bi);
          out.im[dst_off[w + j] + row] = -0.5 * (ar - br);
        }
      }
    }
  }
  return out;
}

RealTensor irfft(const ComplexTensor& spectrum, std::size_t n, std::size_t axis) {
  const AxisLayout l = layout_of(spectrum.shape(), axis, "irfft");
  if (n == 0 || l.length != rfft_bins(n)) {
    throw DimensionError("irfft: " + std::to_string(l.length) +
                         " bins along axis " + std::to_string(axis) +
                         " do not match output length " + std::to_string(n) +
                         " (expected " + std::to_string(rfft_bins(n)) + ")");
  }
  const std::size_t bins = l.length;
  RealTensor out(with_axis(spectrum.shape(), axis, n));
  const auto plan = plan_for(n);
  Workspace ws;
  std::vector<double> re(n * kLaneBlock), im(n * kLaneBlock);
  std::vector<std::size_t> src_off, dst_off;
  const double inv_n = 1.0 / static_cast<double>(n);
  const bool even = n % 2 == 0;
  const std::size_t signals = l.outer * l.inner;
  for (std::size_t s0 = 0; s0 < signals; s0 += 2 * kLaneBlock) {
    const std::size_t count = std::min(2 * kLaneBlock, signals - s0);
    const std::size_t w = (count + 1) / 2;
    const std::size_t paired = count - w;
    signal_offsets(l, bins, s0, count, src_off);
    signal_offsets(l, n, s0, count, dst_off);
    const double* sre = spectrum.re.data();
    const double* sim = spectrum.im.data();
    // Buffer holds conj(X + iY) so that a forward transform yields
    // n * conj(x + iy).
    for (std::size_t k = 0; k < bins; ++k) {
      const bool edge = k == 0 || (even && k == n / 2);
      const std::size_t row = k * l.inner;
      for (std::size_t j = 0; j < w; ++j) {
        const double a = sre[src_off[j] + row];
        const double b = edge ? 0.0 : sim[src_off[j] + row];
        double c = 0.0, d = 0.0;
        if (j < paired) {
          c = sre[src_off[w + j] + row];
          d = edge ? 0.0 : sim[src_off[w + j] + row];
        }
        re[k * w + j] = a - d;
        im[k * w + j] = -(b + c);
        if (k != 0 && !(even && k == n / 2)) {
          // Bin n-k carries conj X_k + i conj Y_k.
          re[(n - k) * w + j] = a + d;
          im[(n - k) * w + j] = b - c;
        }
      }
    }
    plan->forward({re.data(), im.data()}, w, ws);
    double* dst = out.data();
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t row = t * l.inner;
      for (std::size_t j = 0; j < w; ++j) dst[dst_off[j] + row] = re[t * w + j] * inv_n;
      for (std::size_t j = 0; j < paired; ++j)
        dst[dst_off[w + j] + row] = -im[t * w + j] * inv_n;
    }
  }
  return out;
}

ComplexTensor naive_dft(const RealTensor& x, std::size_t axis) {
  const AxisLayout l = layout_of(x.shape(), axis, "naive_dft");
  const std::size_t n = l.length;
  ComplexTensor out(x.shape());
  for (std::size_t o = 0; o < l.outer; ++o) {
    for (std::size_t i = 0; i < l.inner; ++i) {
      const std::size_t base = o * n * l.inner + i;
      for (std::size_t k = 0; k < n; ++k) {
        double sr = 0.0, si = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
          const double angle = -2.0 * std::numbers::pi *
                               static_cast<double>((k * t) % n) /
                               static_cast<double>(n);
          const double v = x[base + t * l.inner];
          sr += v * std::cos(angle);
          si += v * std::sin(angle);
        }
        out.re[base + k * l.inner] = sr;
        out.im[base + k * l.inner] = si;
      }
    }
  }
  return out;
}

RealTensor circular_conv(const RealTensor& h, const RealTensor& w) {
  if (h.rank() != 1 || w.rank() != 1 || h.size() != w.size()) {
    throw DimensionError("circular_conv: need two 1-D tensors of equal length, got " +
                         shape_to_string(h.shape()) + " and " +
                         shape_to_string(w.shape()));
  }
  const std::size_t n = h.size();
  RealTensor out({n});
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t s = 0; s < n; ++s) acc += h[s] * w[(t + n - s) % n];
    out[t] = acc;
  }
  return out;
}

RealTensor rfft_adjoint(const ComplexTensor& spectrum_grad, std::size_t n,
                        std::size_t axis) {
  const AxisLayout l = layout_of(spectrum_grad.shape(), axis, "rfft_adjoint");
  if (n == 0 || l.length != rfft_bins(n)) {
    throw DimensionError("rfft_adjoint: bin count does not match length " +
                         std::to_string(n));
  }
  // x_grad = n * irfft(G / multiplicity); irfft re-applies the multiplicity.
  ComplexTensor weighted = spectrum_grad;
  if (!skip_adjoint_scaling()) {
    for (std::size_t o = 0; o < l.outer; ++o) {
      for (std::size_t k = 0; k < l.length; ++k) {
        const double c = 1.0 / bin_multiplicity(k, n);
        const std::size_t base = (o * l.length + k) * l.inner;
        for (std::size_t i = 0; i < l.inner; ++i) {
          weighted.re[base + i] *= c;
          weighted.im[base + i] *= c;
        }
      }
    }
  }
  RealTensor out = irfft(weighted, n, axis);
  for (auto& v : out.values()) v *= static_cast<double>(n);
  return out;
}

ComplexTensor irfft_adjoint(const RealTensor& signal_grad, std::size_t axis) {
  const AxisLayout l = layout_of(signal_grad.shape(), axis, "irfft_adjoint");
  const std::size_t n = l.length;
  ComplexTensor out = rfft(signal_grad, axis);
  const std::size_t bins = rfft_bins(n);
  for (std::size_t o = 0; o < l.outer; ++o) {
    for (std::size_t k = 0; k < bins; ++k) {
      const double c =
          (skip_adjoint_scaling() ? 1.0 : bin_multiplicity(k, n)) /
          static_cast<double>(n);
      const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
      const std::size_t base = (o * bins + k) * l.inner;
      for (std::size_t i = 0; i < l.inner; ++i) {
        out.re[base + i] *= c;
        // Imaginary parts of DC and Nyquist never reach the output.
        out.im[base + i] = edge ? 0.0 : out.im[base + i] * c;
      }
    }
  }
  return out;
}

}  // namespace frets

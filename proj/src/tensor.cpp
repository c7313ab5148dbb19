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

#include "frets/tensor.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frets/errors.hpp"

namespace frets {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

void require_same_shape(const RealTensor& a, const RealTensor& b,
                        const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
  }
}

void require_matrix(const RealTensor& a, const char* op) {
  if (a.rank() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got " +
                         shape_to_string(a.shape()));
  }
}

ConstMatrixMap as_map(const RealTensor& t) {
  return ConstMatrixMap(t.data(), static_cast<Eigen::Index>(t.dim(0)),
                        static_cast<Eigen::Index>(t.dim(1)));
}

MatrixMap as_map(RealTensor& t) {
  return MatrixMap(t.data(), static_cast<Eigen::Index>(t.dim(0)),
                   static_cast<Eigen::Index>(t.dim(1)));
}

template <class Op>
RealTensor elementwise(const RealTensor& a, const RealTensor& b, const char* name,
                       Op op) {
  require_same_shape(a, b, name);
  RealTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
  return out;
}

}  // namespace

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

RealTensor::RealTensor(Shape shape, double fill) : shape_(std::move(shape)) {
  if (shape_.empty()) throw DimensionError("tensor shape must have rank >= 1");
  for (auto d : shape_) {
    if (d == 0) {
      throw DimensionError("tensor dimensions must be positive, got " +
                           shape_to_string(shape_));
    }
  }
  data_.assign(shape_numel(shape_), fill);
}

RealTensor::RealTensor(Shape shape, std::vector<double> values)
    : RealTensor(std::move(shape)) {
  if (values.size() != data_.size()) {
    throw DimensionError("tensor of shape " + shape_to_string(shape_) +
                         " needs " + std::to_string(data_.size()) +
                         " values, got " + std::to_string(values.size()));
  }
  std::copy(values.begin(), values.end(), data_.begin());
}

RealTensor RealTensor::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return RealTensor({n}, std::move(values));
}

RealTensor RealTensor::matrix(std::size_t rows, std::size_t cols,
                              std::vector<double> values) {
  return RealTensor({rows, cols}, std::move(values));
}

RealTensor RealTensor::identity(std::size_t n) {
  RealTensor out({n, n});
  for (std::size_t i = 0; i < n; ++i) out[i * n + i] = 1.0;
  return out;
}

std::size_t RealTensor::dim(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw DimensionError("axis " + std::to_string(axis) +
                         " out of range for shape " + shape_to_string(shape_));
  }
  return shape_[axis];
}

std::size_t RealTensor::offset(std::initializer_list<std::size_t> index) const {
  if (index.size() != shape_.size()) {
    throw DimensionError("index rank does not match shape " +
                         shape_to_string(shape_));
  }
  std::size_t off = 0;
  std::size_t axis = 0;
  for (auto i : index) {
    if (i >= shape_[axis]) {
      throw DimensionError("index out of range for shape " +
                           shape_to_string(shape_));
    }
    off = off * shape_[axis] + i;
    ++axis;
  }
  return off;
}

double& RealTensor::at(std::initializer_list<std::size_t> index) {
  return data_[offset(index)];
}

double RealTensor::at(std::initializer_list<std::size_t> index) const {
  return data_[offset(index)];
}

RealTensor RealTensor::reshaped(Shape shape) const& {
  RealTensor copy = *this;
  return std::move(copy).reshaped(std::move(shape));
}

RealTensor RealTensor::reshaped(Shape shape) && {
  if (shape_numel(shape) != data_.size()) {
    throw DimensionError("cannot reshape " + shape_to_string(shape_) + " to " +
                         shape_to_string(shape));
  }
  RealTensor out;
  out.shape_ = std::move(shape);
  out.data_ = std::move(data_);
  shape_.clear();
  return out;
}

bool RealTensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

ComplexTensor::ComplexTensor(RealTensor real, RealTensor imag)
    : re(std::move(real)), im(std::move(imag)) {
  if (re.shape() != im.shape()) {
    throw DimensionError("complex tensor parts differ in shape: " +
                         shape_to_string(re.shape()) + " vs " +
                         shape_to_string(im.shape()));
  }
}

ComplexTensor::ComplexTensor(Shape shape) : re(shape), im(std::move(shape)) {}

ComplexTensor complex_mul(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError("complex_mul: shape mismatch " +
                         shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
  }
  ComplexTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ar = a.re[i], ai = a.im[i], br = b.re[i], bi = b.im[i];
    out.re[i] = ar * br - ai * bi;
    out.im[i] = ar * bi + ai * br;
  }
  return out;
}

ComplexTensor complex_matmul(const ComplexTensor& a, const ComplexTensor& b) {
  RealTensor re = subtract(matmul(a.re, b.re), matmul(a.im, b.im));
  RealTensor im = add(matmul(a.re, b.im), matmul(a.im, b.re));
  return {std::move(re), std::move(im)};
}

RealTensor matmul(const RealTensor& a, const RealTensor& b) {
  require_matrix(a, "matmul");
  require_matrix(b, "matmul");
  if (a.dim(1) != b.dim(0)) {
    throw DimensionError("matmul: inner dimensions differ, " +
                         shape_to_string(a.shape()) + " x " +
                         shape_to_string(b.shape()));
  }
  RealTensor out({a.dim(0), b.dim(1)});
  as_map(out).noalias() = as_map(a) * as_map(b);
  return out;
}

RealTensor matmul_tn(const RealTensor& a, const RealTensor& b) {
  require_matrix(a, "matmul_tn");
  require_matrix(b, "matmul_tn");
  if (a.dim(0) != b.dim(0)) {
    throw DimensionError("matmul_tn: leading dimensions differ, " +
                         shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
  }
  RealTensor out({a.dim(1), b.dim(1)});
  as_map(out).noalias() = as_map(a).transpose() * as_map(b);
  return out;
}

RealTensor matmul_nt(const RealTensor& a, const RealTensor& b) {
  require_matrix(a, "matmul_nt");
  require_matrix(b, "matmul_nt");
  if (a.dim(1) != b.dim(1)) {
    throw DimensionError("matmul_nt: trailing dimensions differ, " +
                         shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
  }
  RealTensor out({a.dim(0), b.dim(0)});
  as_map(out).noalias() = as_map(a) * as_map(b).transpose();
  return out;
}

RealTensor add(const RealTensor& a, const RealTensor& b) {
  return elementwise(a, b, "add", [](double x, double y) { return x + y; });
}

RealTensor subtract(const RealTensor& a, const RealTensor& b) {
  return elementwise(a, b, "subtract", [](double x, double y) { return x - y; });
}

RealTensor hadamard(const RealTensor& a, const RealTensor& b) {
  return elementwise(a, b, "hadamard", [](double x, double y) { return x * y; });
}

RealTensor scale(const RealTensor& a, double factor) {
  RealTensor out = a;
  for (auto& v : out.values()) v *= factor;
  return out;
}

RealTensor relu(const RealTensor& a) {
  RealTensor out = a;
  for (auto& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

RealTensor transpose(const RealTensor& a) {
  require_matrix(a, "transpose");
  const std::size_t rows = a.dim(0), cols = a.dim(1);
  RealTensor out({cols, rows});
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j * rows + i] = a[i * cols + j];
  return out;
}

RealTensor flatten(const RealTensor& a) { return a.reshaped({a.size()}); }

RealTensor add_row_vector(const RealTensor& a, const RealTensor& row) {
  require_matrix(a, "add_row_vector");
  if (row.rank() != 1 || row.dim(0) != a.dim(1)) {
    throw DimensionError("add_row_vector: cannot add " +
                         shape_to_string(row.shape()) + " to rows of " +
                         shape_to_string(a.shape()));
  }
  RealTensor out = a;
  const std::size_t cols = a.dim(1);
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] += row[j];
  return out;
}

RealTensor column_sums(const RealTensor& a) {
  require_matrix(a, "column_sums");
  const std::size_t cols = a.dim(1);
  RealTensor out({cols});
  for (std::size_t i = 0; i < a.dim(0); ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j] += a[i * cols + j];
  return out;
}

RealTensor as_rows(const RealTensor& a) {
  const std::size_t last = a.shape().back();
  return a.reshaped({a.size() / last, last});
}

double max_abs_diff(const RealTensor& a, const RealTensor& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace frets

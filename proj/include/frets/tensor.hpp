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

#pragma once

#include <cstddef>
#include <initializer_list>
#include <new>
#include <span>
#include <string>
#include <vector>

namespace frets {

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape& shape);
std::size_t shape_numel(const Shape& shape);

/// Allocator with a fixed 64-byte alignment. Vectorized reductions peel
/// leading elements up to the first aligned address, so their summation
/// order would otherwise depend on where the heap placed a buffer.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), kAlignment));
  }
  void deallocate(T* p, std::size_t n) noexcept {
    ::operator delete(p, n * sizeof(T), kAlignment);
  }
  friend bool operator==(const AlignedAllocator&, const AlignedAllocator&) { return true; }
};

/// Dense row-major array of doubles. Every dimension is at least 1.
class RealTensor {
 public:
  RealTensor() = default;
  explicit RealTensor(Shape shape, double fill = 0.0);
  RealTensor(Shape shape, std::vector<double> values);

  static RealTensor vector(std::vector<double> values);
  static RealTensor matrix(std::size_t rows, std::size_t cols,
                           std::vector<double> values);
  static RealTensor identity(std::size_t n);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& at(std::initializer_list<std::size_t> index);
  double at(std::initializer_list<std::size_t> index) const;

  /// Same values under a new shape with the same element count.
  RealTensor reshaped(Shape shape) const&;
  RealTensor reshaped(Shape shape) &&;

  bool all_finite() const;

  friend bool operator==(const RealTensor&, const RealTensor&) = default;

 private:
  std::size_t offset(std::initializer_list<std::size_t> index) const;

  Shape shape_;
  std::vector<double, AlignedAllocator<double>> data_;
};

/// Split real/imaginary storage for spectra.
struct ComplexTensor {
  RealTensor re;
  RealTensor im;

  ComplexTensor() = default;
  ComplexTensor(RealTensor real, RealTensor imag);
  explicit ComplexTensor(Shape shape);

  const Shape& shape() const { return re.shape(); }
  std::size_t size() const { return re.size(); }

  friend bool operator==(const ComplexTensor&, const ComplexTensor&) = default;
};

// Dense kernels. None of them mutate their inputs.

/// Elementwise (ac - bd) + j(ad + bc) for equal shapes.
ComplexTensor complex_mul(const ComplexTensor& a, const ComplexTensor& b);

/// Complex matrix product of a [m x k] by b [k x n].
ComplexTensor complex_matmul(const ComplexTensor& a, const ComplexTensor& b);

/// a [m x k] times b [k x n].
RealTensor matmul(const RealTensor& a, const RealTensor& b);
/// a^T times b, with a [k x m] and b [k x n].
RealTensor matmul_tn(const RealTensor& a, const RealTensor& b);
/// a times b^T, with a [m x k] and b [n x k].
RealTensor matmul_nt(const RealTensor& a, const RealTensor& b);

RealTensor add(const RealTensor& a, const RealTensor& b);
RealTensor subtract(const RealTensor& a, const RealTensor& b);
RealTensor hadamard(const RealTensor& a, const RealTensor& b);
RealTensor scale(const RealTensor& a, double factor);
RealTensor relu(const RealTensor& a);
RealTensor transpose(const RealTensor& a);
RealTensor flatten(const RealTensor& a);

/// Adds a length-n vector to every row of an [m x n] matrix.
RealTensor add_row_vector(const RealTensor& a, const RealTensor& row);
/// Column sums of an [m x n] matrix, shape {n}.
RealTensor column_sums(const RealTensor& a);

/// Views the tensor as [product of leading dims x last dim].
RealTensor as_rows(const RealTensor& a);

double max_abs_diff(const RealTensor& a, const RealTensor& b);

}  // namespace frets

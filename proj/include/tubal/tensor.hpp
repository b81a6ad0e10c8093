#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "tubal/error.hpp"

namespace tubal {

using cplx = std::complex<double>;
using Shape = std::vector<std::size_t>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Product of mode sizes; throws on size_t overflow.
std::size_t shape_numel(std::span<const std::size_t> shape);
std::string shape_to_string(std::span<const std::size_t> shape);

/// Dense order-N array in column-major order: the first index varies
/// fastest. For tube-structured tensors the last mode is the tube mode.
template <class Scalar>
class Tensor {
 public:
  using value_type = Scalar;

  Tensor() = default;

  explicit Tensor(Shape shape) : shape_(std::move(shape)), data_(shape_numel(shape_), Scalar(0)) {}

  Tensor(Shape shape, std::vector<Scalar> data) : shape_(std::move(shape)), data_(std::move(data)) {
    require(data_.size() == shape_numel(shape_), Errc::shape_mismatch,
            "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                shape_to_string(shape_));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t mode) const { return shape_.at(mode); }
  std::size_t numel() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<const Scalar> data() const noexcept { return data_; }
  std::span<Scalar> data() noexcept { return data_; }
  const std::vector<Scalar>& values() const noexcept { return data_; }

  Scalar& operator[](std::size_t linear) { return data_[linear]; }
  const Scalar& operator[](std::size_t linear) const { return data_[linear]; }

  /// Column-major offset of a multi-index (0-based).
  std::size_t offset(std::span<const std::size_t> index) const {
    require(index.size() == shape_.size(), Errc::index_out_of_range, "index order mismatch");
    std::size_t off = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < shape_.size(); ++k) {
      require(index[k] < shape_[k], Errc::index_out_of_range, "index out of range");
      off += index[k] * stride;
      stride *= shape_[k];
    }
    return off;
  }

  Scalar& operator()(std::initializer_list<std::size_t> index) {
    return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
  }
  const Scalar& operator()(std::initializer_list<std::size_t> index) const {
    return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
  }

  /// Reinterprets the shape; data order is untouched.
  Tensor reshaped(Shape new_shape) const& {
    check_reshape(new_shape);
    return Tensor(std::move(new_shape), data_);
  }
  Tensor reshaped(Shape new_shape) && {
    check_reshape(new_shape);
    shape_ = std::move(new_shape);
    return std::move(*this);
  }

  bool operator==(const Tensor&) const = default;

 private:
  void check_reshape(const Shape& new_shape) const {
    require(shape_numel(new_shape) == data_.size(), Errc::shape_mismatch,
            "cannot reshape " + shape_to_string(shape_) + " to " + shape_to_string(new_shape));
  }

  Shape shape_;
  std::vector<Scalar> data_;
};

using DenseTensor = Tensor<double>;
using ComplexTensor = Tensor<cplx>;

/// A length-T fiber along the tube mode.
struct Tube {
  std::vector<double> values;
  std::size_t size() const noexcept { return values.size(); }
};

DenseTensor reshape(const DenseTensor& x, Shape new_shape);

double frobenius_norm(const DenseTensor& x);
double frobenius_norm(const ComplexTensor& x);
double squared_norm(const DenseTensor& x);
double squared_norm(const ComplexTensor& x);

/// ||x - y||_F / ||x||_F. Throws on shape mismatch or zero-norm reference.
double relative_error(const DenseTensor& x, const DenseTensor& y);
double difference_norm(const DenseTensor& x, const DenseTensor& y);

ComplexTensor to_complex(const DenseTensor& x);
ComplexTensor conj(const ComplexTensor& x);

/// Frontal slice k (0-based) of a third-order tensor, copied out.
template <class Scalar>
Matrix<Scalar> frontal_slice(const Tensor<Scalar>& x, std::size_t k) {
  require(x.order() == 3, Errc::shape_mismatch, "frontal_slice expects a third-order tensor");
  require(k < x.dim(2), Errc::index_out_of_range,
          "frontal slice " + std::to_string(k) + " out of range for " + shape_to_string(x.shape()));
  const auto rows = static_cast<Eigen::Index>(x.dim(0));
  const auto cols = static_cast<Eigen::Index>(x.dim(1));
  return Eigen::Map<const Matrix<Scalar>>(x.data().data() + k * x.dim(0) * x.dim(1), rows, cols);
}

/// Mutable view of frontal slice k of a third-order tensor.
template <class Scalar>
Eigen::Map<Matrix<Scalar>> slice_view(Tensor<Scalar>& x, std::size_t k) {
  return Eigen::Map<Matrix<Scalar>>(x.data().data() + k * x.dim(0) * x.dim(1),
                                    static_cast<Eigen::Index>(x.dim(0)),
                                    static_cast<Eigen::Index>(x.dim(1)));
}

template <class Scalar>
Eigen::Map<const Matrix<Scalar>> slice_view(const Tensor<Scalar>& x, std::size_t k) {
  return Eigen::Map<const Matrix<Scalar>>(x.data().data() + k * x.dim(0) * x.dim(1),
                                          static_cast<Eigen::Index>(x.dim(0)),
                                          static_cast<Eigen::Index>(x.dim(1)));
}

}  // namespace tubal

#include "tubal/tensor.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace tubal {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::shape_mismatch: return "shape_mismatch";
    case Errc::rank_out_of_range: return "rank_out_of_range";
    case Errc::index_out_of_range: return "index_out_of_range";
    case Errc::numeric_failure: return "numeric_failure";
    case Errc::residual_imaginary: return "residual_imaginary";
    case Errc::tolerance_not_met: return "tolerance_not_met";
    case Errc::io_error: return "io_error";
    case Errc::bad_format: return "bad_format";
    case Errc::truncated_payload: return "truncated_payload";
  }
  return "unknown";
}

std::size_t shape_numel(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) {
    if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d)
      fail(Errc::invalid_argument, "tensor shape " + shape_to_string(shape) + " overflows size_t");
    n *= d;
  }
  return n;
}

std::string shape_to_string(std::span<const std::size_t> shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < shape.size(); ++k) os << (k ? "x" : "") << shape[k];
  os << ']';
  return os.str();
}

DenseTensor reshape(const DenseTensor& x, Shape new_shape) { return x.reshaped(std::move(new_shape)); }

double squared_norm(const DenseTensor& x) {
  double s = 0.0;
  for (double v : x.data()) s += v * v;
  return s;
}

double squared_norm(const ComplexTensor& x) {
  double s = 0.0;
  for (const cplx& v : x.data()) s += std::norm(v);
  return s;
}

double frobenius_norm(const DenseTensor& x) { return std::sqrt(squared_norm(x)); }
double frobenius_norm(const ComplexTensor& x) { return std::sqrt(squared_norm(x)); }

double difference_norm(const DenseTensor& x, const DenseTensor& y) {
  require(x.shape() == y.shape(), Errc::shape_mismatch,
          "shape mismatch: " + shape_to_string(x.shape()) + " vs " + shape_to_string(y.shape()));
  double s = 0.0;
  for (std::size_t i = 0; i < x.numel(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double relative_error(const DenseTensor& x, const DenseTensor& y) {
  const double diff = difference_norm(x, y);
  const double ref = frobenius_norm(x);
  require(ref > 0.0, Errc::invalid_argument, "relative error against a zero-norm reference");
  return diff / ref;
}

ComplexTensor to_complex(const DenseTensor& x) {
  std::vector<cplx> data(x.data().begin(), x.data().end());
  return ComplexTensor(x.shape(), std::move(data));
}

ComplexTensor conj(const ComplexTensor& x) {
  ComplexTensor out = x;
  for (cplx& v : out.data()) v = std::conj(v);
  return out;
}

}  // namespace tubal

#include "tubal/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "tubal/fft.hpp"

namespace tubal {
namespace {

constexpr char kTensorMagic[4] = {'T', 'N', 'S', 'R'};
constexpr char kFactorMagic[4] = {'T', 'T', 'T', 'F'};

class Writer {
 public:
  void raw(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b, std::size_t base = 0) : b_(b), base_(base) {}

  std::size_t offset() const { return base_ + pos_; }
  std::size_t remaining() const { return b_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n)
      fail(Errc::truncated_payload, std::string("truncated ") + what + " at byte offset " + std::to_string(offset()) +
                                        ": need " + std::to_string(n) + " bytes, " + std::to_string(remaining()) +
                                        " available");
  }
  void magic(const char (&m)[4], const char* kind) {
    if (remaining() < 4 || std::memcmp(b_.data() + pos_, m, 4) != 0)
      fail(Errc::bad_format, std::string("bad magic at byte offset ") + std::to_string(offset()) + ": not a " + kind);
    pos_ += 4;
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return b_[pos_++];
  }
  std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(le(2, what)); }
  std::uint64_t u64(const char* what) { return le(8, what); }
  double f64() { return std::bit_cast<double>(le(8, "payload")); }
  std::span<const std::uint8_t> rest() const { return b_.subspan(pos_); }
  void skip(std::size_t n) { pos_ += n; }

 private:
  std::uint64_t le(std::size_t n, const char* what) {
    need(n, what);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b_[pos_ + i]) << (8 * i);
    pos_ += n;
    return v;
  }
  std::span<const std::uint8_t> b_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

template <class Scalar>
constexpr Dtype dtype_of() {
  return std::is_same_v<Scalar, double> ? Dtype::float64 : Dtype::complex128;
}

template <class Scalar>
void put_tensor(Writer& w, const Tensor<Scalar>& x) {
  require(x.order() <= 255, Errc::invalid_argument, "tensor order exceeds 255");
  w.raw(kTensorMagic, 4);
  w.u16(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(dtype_of<Scalar>()));
  w.u8(static_cast<std::uint8_t>(x.order()));
  for (std::size_t d : x.shape()) w.u64(d);
  for (const Scalar& v : x.data()) {
    if constexpr (std::is_same_v<Scalar, double>) {
      w.f64(v);
    } else {
      w.f64(v.real());
      w.f64(v.imag());
    }
  }
}

template <class Scalar>
Tensor<Scalar> get_tensor(Reader& r) {
  r.magic(kTensorMagic, "tensor file");
  const std::size_t version_at = r.offset();
  const std::uint16_t version = r.u16("header");
  require(version == kFormatVersion, Errc::bad_format,
          "unsupported tensor file version " + std::to_string(version) + " at byte offset " + std::to_string(version_at));
  const std::size_t dtype_at = r.offset();
  const std::uint8_t dtype = r.u8("header");
  require(dtype == static_cast<std::uint8_t>(Dtype::float64) || dtype == static_cast<std::uint8_t>(Dtype::complex128),
          Errc::bad_format, "unknown dtype code " + std::to_string(dtype) + " at byte offset " + std::to_string(dtype_at));
  require(dtype == static_cast<std::uint8_t>(dtype_of<Scalar>()), Errc::bad_format,
          std::string("tensor file holds ") + (dtype == 1 ? "real" : "complex") + " data, expected " +
              (std::is_same_v<Scalar, double> ? "real" : "complex"));
  const std::uint8_t order = r.u8("header");
  Shape shape(order);
  for (auto& d : shape) {
    const std::uint64_t v = r.u64("dimension list");
    require(v <= std::numeric_limits<std::size_t>::max(), Errc::bad_format, "dimension overflow");
    d = static_cast<std::size_t>(v);
  }
  std::size_t n = 0;
  try {
    n = shape_numel(shape);
  } catch (const Error&) {
    fail(Errc::bad_format, "dimension overflow in header " + shape_to_string(shape));
  }
  const std::size_t width = std::is_same_v<Scalar, double> ? 8 : 16;
  require(n <= std::numeric_limits<std::size_t>::max() / width, Errc::bad_format,
          "dimension overflow in header " + shape_to_string(shape));
  r.need(n * width, "payload");
  std::vector<Scalar> data(n);
  for (auto& v : data) {
    if constexpr (std::is_same_v<Scalar, double>) {
      v = r.f64();
    } else {
      const double re = r.f64();
      v = cplx(re, r.f64());
    }
  }
  return Tensor<Scalar>(std::move(shape), std::move(data));
}

void require_consumed(const Reader& r) {
  require(r.remaining() == 0, Errc::bad_format,
          std::to_string(r.remaining()) + " trailing bytes after byte offset " + std::to_string(r.offset()));
}

template <class Scalar>
Tensor<Scalar> decode_impl(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Tensor<Scalar> x = get_tensor<Scalar>(r);
  require_consumed(r);
  return x;
}

template <class Core>
void check_core(const Core& c, std::size_t n, const Shape& ranks, std::size_t expected_order) {
  require(c.order() == expected_order, Errc::bad_format,
          "core " + std::to_string(n + 1) + " has order " + std::to_string(c.order()));
  require(c.dim(0) == ranks[n] && c.dim(2) == ranks[n + 1], Errc::bad_format,
          "rank chain broken at core " + std::to_string(n + 1) + ": shape " + shape_to_string(c.shape()) +
              " against header ranks " + shape_to_string(ranks));
}

bool starts_with(std::span<const std::uint8_t> b, const char* m, std::size_t n) {
  return b.size() >= n && std::memcmp(b.data(), m, n) == 0;
}

// PNM header tokens are separated by whitespace; '#' comments run to end of line.
std::size_t pnm_number(std::span<const std::uint8_t> b, std::size_t& pos) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(b[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  require(pos < b.size() && std::isdigit(b[pos]), Errc::bad_format,
          "malformed image header at byte offset " + std::to_string(pos));
  std::size_t v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos++] - '0');
    require(v <= (1u << 30), Errc::bad_format, "image header value too large");
  }
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const DenseTensor& x) {
  Writer w;
  put_tensor(w, x);
  return w.take();
}
std::vector<std::uint8_t> encode_tensor(const ComplexTensor& x) {
  Writer w;
  put_tensor(w, x);
  return w.take();
}
DenseTensor decode_tensor(std::span<const std::uint8_t> bytes) { return decode_impl<double>(bytes); }
ComplexTensor decode_complex_tensor(std::span<const std::uint8_t> bytes) { return decode_impl<cplx>(bytes); }

FactorKind factor_kind(const FactorSet& f) { return static_cast<FactorKind>(f.index() + 1); }

std::size_t factor_param_count(const FactorSet& f) {
  return std::visit([](const auto& g) { return g.param_count(); }, f);
}

DenseTensor contract_factors(const FactorSet& f) {
  if (auto* t = std::get_if<TttFormat>(&f)) return ttt_contract(*t);
  if (auto* t = std::get_if<TtReal>(&f)) return tt_contract(*t);
  const ComplexTensor c = tt_contract(std::get<TtComplex>(f));
  DenseTensor out(c.shape());
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t i = 0; i < c.numel(); ++i) {
    out[i] = c[i].real();
    max_re = std::max(max_re, std::abs(c[i].real()));
    max_im = std::max(max_im, std::abs(c[i].imag()));
  }
  require(max_im <= kDefaultRealTolerance * (1.0 + max_re), Errc::residual_imaginary,
          "complex TT contracts to a tensor with imaginary part " + std::to_string(max_im));
  return out;
}

std::vector<std::uint8_t> encode_factors(const FactorSet& f) {
  Writer w;
  w.raw(kFactorMagic, 4);
  w.u16(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(factor_kind(f)));
  std::visit(
      [&](const auto& g) {
        g.validate();
        require(g.order() >= 1 && g.order() <= 255, Errc::invalid_argument, "factor order must be in [1, 255]");
        Shape ranks;
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, TttFormat>) {
          w.u64(g.tube_length);
          ranks = g.boundary_ranks();
        } else {
          w.u64(1);
          ranks = g.ranks();
        }
        w.u8(static_cast<std::uint8_t>(g.order()));
        for (std::size_t r : ranks) w.u64(r);
        for (const auto& c : g.cores) put_tensor(w, c);
      },
      f);
  return w.take();
}

FactorSet decode_factors(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.magic(kFactorMagic, "factor file");
  const std::size_t version_at = r.offset();
  const std::uint16_t version = r.u16("header");
  require(version == kFormatVersion, Errc::bad_format,
          "unsupported factor file version " + std::to_string(version) + " at byte offset " + std::to_string(version_at));
  const std::size_t kind_at = r.offset();
  const std::uint8_t kind = r.u8("header");
  require(kind >= 1 && kind <= 3, Errc::bad_format,
          "unknown factor kind " + std::to_string(kind) + " at byte offset " + std::to_string(kind_at));
  const std::uint64_t t = r.u64("header");
  const std::uint8_t n = r.u8("header");
  require(n >= 1, Errc::bad_format, "factor file declares zero cores");
  Shape ranks(static_cast<std::size_t>(n) + 1);
  for (auto& v : ranks) v = static_cast<std::size_t>(r.u64("rank profile"));
  require(ranks.front() == 1 && ranks.back() == 1, Errc::bad_format,
          "boundary ranks must be 1, header has " + shape_to_string(ranks));

  auto read_core = [&](auto tag) {
    using Scalar = decltype(tag);
    Reader sub(r.rest(), r.offset());
    Tensor<Scalar> c = get_tensor<Scalar>(sub);
    r.skip(sub.offset() - r.offset());
    return c;
  };

  FactorSet out;
  if (kind == 1) {
    TttFormat f;
    f.tube_length = static_cast<std::size_t>(t);
    for (std::size_t k = 0; k < n; ++k) {
      f.cores.push_back(read_core(double{}));
      check_core(f.cores.back(), k, ranks, 4);
      require(f.cores.back().dim(3) == f.tube_length, Errc::bad_format,
              "core " + std::to_string(k + 1) + " tube length differs from header T=" + std::to_string(t));
    }
    f.validate();
    out = std::move(f);
  } else if (kind == 2) {
    TtReal f;
    for (std::size_t k = 0; k < n; ++k) {
      f.cores.push_back(read_core(double{}));
      check_core(f.cores.back(), k, ranks, 3);
    }
    f.validate();
    out = std::move(f);
  } else {
    TtComplex f;
    for (std::size_t k = 0; k < n; ++k) {
      f.cores.push_back(read_core(cplx{}));
      check_core(f.cores.back(), k, ranks, 3);
    }
    f.validate();
    out = std::move(f);
  }
  require_consumed(r);
  return out;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::io_error, "cannot open '" + path + "' for reading");
  std::vector<std::uint8_t> b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  require(!in.bad(), Errc::io_error, "read error on '" + path + "'");
  return b;
}

void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), Errc::io_error, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), Errc::io_error, "write error on '" + path + "'");
}

DenseTensor read_tensor(const std::string& path) { return decode_tensor(read_bytes(path)); }
void write_tensor(const std::string& path, const DenseTensor& x) { write_bytes(path, encode_tensor(x)); }
ComplexTensor read_complex_tensor(const std::string& path) { return decode_complex_tensor(read_bytes(path)); }
void write_tensor(const std::string& path, const ComplexTensor& x) { write_bytes(path, encode_tensor(x)); }
FactorSet read_factors(const std::string& path) { return decode_factors(read_bytes(path)); }
void write_factors(const std::string& path, const FactorSet& f) { write_bytes(path, encode_factors(f)); }

DenseTensor read_image(const std::string& path) {
  const std::vector<std::uint8_t> b = read_bytes(path);
  require(b.size() >= 2 && b[0] == 'P', Errc::bad_format, "'" + path + "' is not a PGM/PPM image");
  require(b[1] == '5' || b[1] == '6', Errc::bad_format,
          std::string("unsupported image magic P") + static_cast<char>(b[1]) + "; only binary P5/P6 are read");
  const std::size_t channels = b[1] == '5' ? 1 : 3;
  std::size_t pos = 2;
  const std::size_t width = pnm_number(b, pos);
  const std::size_t height = pnm_number(b, pos);
  const std::size_t maxval = pnm_number(b, pos);
  require(width >= 1 && height >= 1, Errc::bad_format, "image has zero size");
  require(maxval >= 1 && maxval <= 255, Errc::bad_format,
          "image maxval " + std::to_string(maxval) + " unsupported; need 1..255");
  require(pos < b.size() && std::isspace(b[pos]), Errc::bad_format, "image header not terminated by whitespace");
  ++pos;
  const std::size_t n = width * height * channels;
  require(b.size() - pos >= n, Errc::truncated_payload,
          "truncated image payload at byte offset " + std::to_string(pos) + ": need " + std::to_string(n) + " bytes, " +
              std::to_string(b.size() - pos) + " available");

  Shape shape = channels == 1 ? Shape{height, width} : Shape{height, width, channels};
  DenseTensor x(shape);
  for (std::size_t row = 0; row < height; ++row)
    for (std::size_t col = 0; col < width; ++col)
      for (std::size_t ch = 0; ch < channels; ++ch)
        x[row + col * height + ch * height * width] = b[pos + (row * width + col) * channels + ch];
  return x;
}

void write_image(const std::string& path, const DenseTensor& x) {
  const bool gray = x.order() == 2;
  require(gray || (x.order() == 3 && x.dim(2) == 3), Errc::shape_mismatch,
          "images must be H x W or H x W x 3, got " + shape_to_string(x.shape()));
  const std::size_t h = x.dim(0), w = x.dim(1), channels = gray ? 1 : 3;
  std::ostringstream header;
  header << (gray ? "P5" : "P6") << '\n' << w << ' ' << h << "\n255\n";
  const std::string head = header.str();
  std::vector<std::uint8_t> out(head.begin(), head.end());
  for (std::size_t row = 0; row < h; ++row)
    for (std::size_t col = 0; col < w; ++col)
      for (std::size_t ch = 0; ch < channels; ++ch) {
        const double v = std::clamp(std::round(x[row + col * h + ch * h * w]), 0.0, 255.0);
        out.push_back(static_cast<std::uint8_t>(v));
      }
  write_bytes(path, out);
}

DenseTensor read_ascii_matrix(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::io_error, "cannot open '" + path + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    std::istringstream ls(line);
    std::vector<double> row;
    std::string token;
    while (ls >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      require(used == token.size(), Errc::bad_format,
              "'" + path + "' line " + std::to_string(line_no) + ": '" + token + "' is not a number");
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      fail(Errc::bad_format, "'" + path + "' line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                                 " columns, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), Errc::bad_format, "'" + path + "' contains no numbers");
  const std::size_t r = rows.size(), c = rows.front().size();
  DenseTensor x({r, c});
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) x[i + j * r] = rows[i][j];
  return x;
}

DenseTensor read_any_tensor(const std::string& path) {
  const std::vector<std::uint8_t> b = read_bytes(path);
  if (starts_with(b, kTensorMagic, 4)) return decode_tensor(b);
  if (b.size() >= 2 && b[0] == 'P' && std::isdigit(b[1])) return read_image(path);
  return read_ascii_matrix(path);
}

std::string describe_file(const std::string& path) {
  const std::vector<std::uint8_t> b = read_bytes(path);
  std::ostringstream os;
  if (starts_with(b, kTensorMagic, 4)) {
    const bool complex = b.size() > 6 && b[6] == static_cast<std::uint8_t>(Dtype::complex128);
    os << "file: " << path << "\nformat: TensorFile v" << kFormatVersion << "\n";
    Shape shape;
    if (complex) {
      const ComplexTensor x = decode_complex_tensor(b);
      shape = x.shape();
      os << "dtype: complex128\n";
    } else {
      const DenseTensor x = decode_tensor(b);
      shape = x.shape();
      os << "dtype: float64\n";
    }
    os << "order: " << shape.size() << "\ndims: " << shape_to_string(shape) << "\nentries: " << shape_numel(shape)
       << "\nbytes: " << b.size() << "\n";
  } else if (starts_with(b, kFactorMagic, 4)) {
    const FactorSet f = decode_factors(b);
    static const char* kinds[] = {"TTT", "TT-real", "TT-complex"};
    os << "file: " << path << "\nformat: FactorFile v" << kFormatVersion << "\nkind: " << kinds[f.index()] << "\n";
    std::visit(
        [&](const auto& g) {
          Shape ranks;
          Shape full;
          if constexpr (std::is_same_v<std::decay_t<decltype(g)>, TttFormat>) {
            ranks = g.boundary_ranks();
            full = g.full_shape();
            os << "tube length: " << g.tube_length << "\n";
          } else {
            ranks = g.ranks();
            full = g.mode_sizes();
          }
          os << "cores: " << g.order() << "\nmode sizes: " << shape_to_string(g.mode_sizes())
             << "\nranks: " << shape_to_string(ranks) << "\nfull shape: " << shape_to_string(full)
             << "\nparameters: " << g.param_count() << "\nfull entries: " << shape_numel(full)
             << "\ncompression factor: " << static_cast<double>(shape_numel(full)) / static_cast<double>(g.param_count())
             << "\n";
          for (std::size_t n = 0; n < g.order(); ++n)
            os << "core " << n + 1 << ": " << shape_to_string(g.cores[n].shape()) << "\n";
        },
        f);
  } else if (b.size() >= 2 && b[0] == 'P') {
    const DenseTensor x = read_image(path);
    os << "file: " << path << "\nformat: " << (x.order() == 2 ? "PGM (P5)" : "PPM (P6)")
       << "\ndims: " << shape_to_string(x.shape()) << "\n";
  } else {
    fail(Errc::bad_format, "'" + path + "': unrecognized file (bad magic at byte offset 0)");
  }
  return os.str();
}

}  // namespace tubal

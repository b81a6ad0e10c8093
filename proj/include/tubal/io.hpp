#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tubal/tensor.hpp"
#include "tubal/tt.hpp"
#include "tubal/ttt.hpp"

namespace tubal {

// TensorFile layout, all integers little-endian:
//   "TNSR" | u16 version = 1 | u8 dtype | u8 order N | N x u64 dims | payload
// dtype 1 is float64, dtype 2 is complex128 stored as interleaved re, im.
// The payload is column-major.
//
// FactorFile layout:
//   "TTTF" | u16 version = 1 | u8 kind | u64 T | u8 N | (N+1) x u64 ranks |
//   N embedded TensorFiles, one per core
// kind 1 is TTT (cores R x I x R x T), 2 TT-real, 3 TT-complex (T = 1).

inline constexpr std::uint16_t kFormatVersion = 1;

enum class Dtype : std::uint8_t { float64 = 1, complex128 = 2 };
enum class FactorKind : std::uint8_t { ttt = 1, tt_real = 2, tt_complex = 3 };

using FactorSet = std::variant<TttFormat, TtReal, TtComplex>;

std::vector<std::uint8_t> encode_tensor(const DenseTensor& x);
std::vector<std::uint8_t> encode_tensor(const ComplexTensor& x);
DenseTensor decode_tensor(std::span<const std::uint8_t> bytes);
ComplexTensor decode_complex_tensor(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_factors(const FactorSet& f);
FactorSet decode_factors(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_bytes(const std::string& path);
void write_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

DenseTensor read_tensor(const std::string& path);
void write_tensor(const std::string& path, const DenseTensor& x);
ComplexTensor read_complex_tensor(const std::string& path);
void write_tensor(const std::string& path, const ComplexTensor& x);

FactorSet read_factors(const std::string& path);
void write_factors(const std::string& path, const FactorSet& f);

FactorKind factor_kind(const FactorSet& f);
/// Stored scalars; complex entries count once.
std::size_t factor_param_count(const FactorSet& f);
/// Contracts any factor set to a real tensor. TT-complex results must be
/// real to within the default tolerance.
DenseTensor contract_factors(const FactorSet& f);

/// Binary PGM (P5) or PPM (P6) with maxval <= 255. Pixel (row, col,
/// channel) lands at tensor index (row, col, channel); PGM gives H x W.
DenseTensor read_image(const std::string& path);
/// Writes H x W as P5 and H x W x 3 as P6, rounding and clamping to 0..255.
void write_image(const std::string& path, const DenseTensor& x);

/// Whitespace-separated rows of numbers; '#' starts a comment.
DenseTensor read_ascii_matrix(const std::string& path);

/// Tensor file or image, chosen by the leading magic bytes.
DenseTensor read_any_tensor(const std::string& path);

/// Multi-line human-readable summary of any supported file.
std::string describe_file(const std::string& path);

}  // namespace tubal

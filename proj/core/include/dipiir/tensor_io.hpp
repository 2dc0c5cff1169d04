#pragma once

#include "dipiir/linear_op.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dipiir {

enum class DType : std::uint8_t { F32 = 0, F64 = 1 };

/// Dense row-major tensor as stored in "DIPT" streams:
///
///   "DIPT" | u32 version (1) | u8 dtype | u8 ndim | ndim x u64 dims | payload
///
/// All integers and the payload are little-endian.
struct Tensor {
  std::vector<std::uint64_t> dims;
  Vec values;
  DType dtype = DType::F64;

  std::uint64_t element_count() const noexcept;
};

inline constexpr std::uint32_t kTensorVersion = 1;

void write_tensor(std::ostream& os, const Tensor& t);
/// Throws ProtocolError on a malformed stream.
Tensor read_tensor(std::istream& is);

std::string encode_tensor(const Tensor& t);
Tensor decode_tensor(const std::string& bytes);

void save_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor load_tensor(const std::filesystem::path& path);

}  // namespace dipiir

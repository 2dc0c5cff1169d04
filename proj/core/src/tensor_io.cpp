#include "dipiir/tensor_io.hpp"

#include "dipiir/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dipiir {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

namespace {

constexpr std::array<char, 4> kMagic{'D', 'I', 'P', 'T'};
constexpr std::uint8_t kMaxDims = 8;

template <typename T>
void put_le(std::ostream& os, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& is, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T)))
    throw ProtocolError(std::string("tensor stream truncated while reading ") + what);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

std::uint64_t Tensor::element_count() const noexcept {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void write_tensor(std::ostream& os, const Tensor& t) {
  if (t.dims.size() > kMaxDims) throw ShapeError("tensor: too many dimensions");
  if (t.element_count() != static_cast<std::uint64_t>(t.values.size()))
    throw ShapeError("tensor: dims do not match the number of values");
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kTensorVersion);
  put_le<std::uint8_t>(os, static_cast<std::uint8_t>(t.dtype));
  put_le<std::uint8_t>(os, static_cast<std::uint8_t>(t.dims.size()));
  for (auto d : t.dims) put_le<std::uint64_t>(os, d);
  for (Index i = 0; i < t.values.size(); ++i) {
    if (t.dtype == DType::F32)
      put_le<float>(os, static_cast<float>(t.values[i]));
    else
      put_le<double>(os, t.values[i]);
  }
  if (!os) throw IoError("tensor: write failed");
}

Tensor read_tensor(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size())) throw ProtocolError("tensor stream truncated before magic");
  if (magic != kMagic) throw ProtocolError("tensor stream: bad magic");
  const auto version = get_le<std::uint32_t>(is, "version");
  if (version != kTensorVersion) throw ProtocolError("tensor stream: unsupported version " + std::to_string(version));
  const auto dtype = get_le<std::uint8_t>(is, "dtype");
  if (dtype > 1) throw ProtocolError("tensor stream: unknown dtype " + std::to_string(dtype));
  const auto ndim = get_le<std::uint8_t>(is, "ndim");
  if (ndim > kMaxDims) throw ProtocolError("tensor stream: too many dimensions");
  Tensor t;
  t.dtype = static_cast<DType>(dtype);
  for (std::uint8_t d = 0; d < ndim; ++d) t.dims.push_back(get_le<std::uint64_t>(is, "dims"));
  const std::uint64_t count = t.element_count();
  if (count > (std::uint64_t{1} << 34)) throw ProtocolError("tensor stream: implausible element count");
  t.values.resize(static_cast<Index>(count));
  for (Index i = 0; i < t.values.size(); ++i)
    t.values[i] = t.dtype == DType::F32 ? static_cast<double>(get_le<float>(is, "payload")) : get_le<double>(is, "payload");
  return t;
}

std::string encode_tensor(const Tensor& t) {
  std::ostringstream os(std::ios::binary);
  write_tensor(os, t);
  return std::move(os).str();
}

Tensor decode_tensor(const std::string& bytes) {
  std::istringstream is(bytes, std::ios::binary);
  return read_tensor(is);
}

void save_tensor(const std::filesystem::path& path, const Tensor& t) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_tensor(os, t);
  os.close();
  if (!os) throw IoError("failed writing " + path.string());
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return read_tensor(is);
  } catch (const ProtocolError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace dipiir

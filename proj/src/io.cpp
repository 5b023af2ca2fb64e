#include "mrecon/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mrecon::io {

namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void magic(std::string_view m) { out_.append(m); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) u8(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void u64(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) u8(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  void complex(const cplx& z) {
    f32(z.real());
    f32(z.imag());
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  void expect_magic(std::string_view m) {
    need(m.size());
    if (bytes_.substr(pos_, m.size()) != m)
      throw FormatError("bad magic: expected '" + std::string(m) + "'");
    pos_ += m.size();
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(u8()) << (8 * b);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(u8()) << (8 * b);
    return v;
  }
  double f32() { return static_cast<double>(std::bit_cast<float>(u32())); }
  cplx complex() {
    const double re = f32();
    const double im = f32();
    return {re, im};
  }
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("unexpected end of data");
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

void check_version(Reader& r, const char* what) {
  const auto v = r.u32();
  if (v != kVersion)
    throw FormatError(std::string(what) + ": unsupported version " + std::to_string(v));
}

Dims read_dims(Reader& r) {
  const auto ndim = r.u32();
  if (ndim == 0) throw FormatError("ndim must be positive");
  Dims dims;
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    const auto n = r.u64();
    if (n == 0) throw FormatError("zero dimension");
    if (total > (std::uint64_t{1} << 40) / n) throw FormatError("tensor too large");
    total *= n;
    dims.push_back(static_cast<std::size_t>(n));
  }
  return dims;
}

void write_dims(Writer& w, const Dims& dims) {
  w.u32(static_cast<std::uint32_t>(dims.size()));
  for (auto n : dims) w.u64(n);
}

void put_tensor(Writer& w, const DenseTensor& x) {
  w.magic("CTEN");
  w.u32(kVersion);
  write_dims(w, x.dims());
  for (const auto& z : x.data()) w.complex(z);
}

DenseTensor get_tensor(Reader& r) {
  r.expect_magic("CTEN");
  check_version(r, "CTEN");
  Dims dims = read_dims(r);
  const std::size_t n = product(dims);
  r.need(n * 8);
  std::vector<cplx> data(n);
  for (auto& z : data) z = r.complex();
  return DenseTensor(std::move(dims), std::move(data));
}

}  // namespace

std::string encode_tensor(const DenseTensor& x) {
  Writer w;
  put_tensor(w, x);
  return w.take();
}

DenseTensor decode_tensor(std::string_view bytes) {
  Reader r(bytes);
  DenseTensor x = get_tensor(r);
  if (r.remaining() != 0) throw FormatError("CTEN: trailing bytes");
  return x;
}

std::string encode_mask(const SamplingMask& m) {
  Writer w;
  w.magic("MASK");
  w.u32(kVersion);
  write_dims(w, m.dims());
  for (auto v : m.kept()) w.u8(v);
  return w.take();
}

SamplingMask decode_mask(std::string_view bytes) {
  Reader r(bytes);
  r.expect_magic("MASK");
  check_version(r, "MASK");
  Dims dims = read_dims(r);
  const std::size_t n = product(dims);
  r.need(n);
  std::vector<std::uint8_t> kept(n);
  for (auto& v : kept) {
    v = r.u8();
    if (v > 1) throw FormatError("MASK: entries must be 0 or 1");
  }
  if (r.remaining() != 0) throw FormatError("MASK: trailing bytes");
  return SamplingMask(std::move(dims), std::move(kept));
}

std::string encode_tucker(const TuckerTensor& t) {
  t.validate_shapes();
  Writer w;
  w.magic("CTKR");
  w.u32(kVersion);
  put_tensor(w, t.core);
  for (const auto& u : t.factors) {
    w.u64(static_cast<std::uint64_t>(u.rows()));
    w.u64(static_cast<std::uint64_t>(u.cols()));
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      for (Eigen::Index i = 0; i < u.rows(); ++i) w.complex(u(i, j));
  }
  return w.take();
}

TuckerTensor decode_tucker(std::string_view bytes) {
  Reader r(bytes);
  r.expect_magic("CTKR");
  check_version(r, "CTKR");
  TuckerTensor t;
  t.core = get_tensor(r);
  for (std::size_t i = 0; i < t.core.ndim(); ++i) {
    const auto rows = r.u64();
    const auto cols = r.u64();
    if (rows == 0 || cols == 0 || rows > (1u << 24) || cols > (1u << 24))
      throw FormatError("CTKR: bad factor shape");
    r.need(rows * cols * 8);
    Matrix u(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      for (Eigen::Index k = 0; k < u.rows(); ++k) u(k, j) = r.complex();
    t.factors.push_back(std::move(u));
  }
  if (r.remaining() != 0) throw FormatError("CTKR: trailing bytes");
  try {
    t.validate_shapes();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("CTKR: ") + e.what());
  }
  return t;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_tensor(const std::filesystem::path& path, const DenseTensor& x) {
  write_file_atomic(path, encode_tensor(x));
}
DenseTensor read_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }
void write_mask(const std::filesystem::path& path, const SamplingMask& m) {
  write_file_atomic(path, encode_mask(m));
}
SamplingMask read_mask(const std::filesystem::path& path) { return decode_mask(read_file(path)); }
void write_tucker(const std::filesystem::path& path, const TuckerTensor& t) {
  write_file_atomic(path, encode_tucker(t));
}
TuckerTensor read_tucker(const std::filesystem::path& path) { return decode_tucker(read_file(path)); }

}  // namespace mrecon::io

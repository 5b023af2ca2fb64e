#pragma once

// Binary file formats. All integers and floats are little-endian.
//
// CTEN v1 (complex tensor)
//   "CTEN" | u32 version = 1 | u32 ndim | ndim x u64 dims |
//   prod(dims) x (f32 real, f32 imag), first index fastest.
//
// MASK v1 (sampling mask)
//   "MASK" | u32 version = 1 | u32 ndim | ndim x u64 dims |
//   prod(dims) x u8 (0 or 1), first index fastest.
//
// CTKR v1 (Tucker tensor / manifold point)
//   "CTKR" | u32 version = 1 | CTEN v1 record of the core |
//   for each of the ndim factors: u64 rows | u64 cols |
//   rows * cols x (f32 real, f32 imag), column-major.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mrecon/mri_model.hpp"
#include "mrecon/tucker.hpp"

namespace mrecon::io {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string encode_tensor(const DenseTensor& x);
DenseTensor decode_tensor(std::string_view bytes);

std::string encode_mask(const SamplingMask& m);
SamplingMask decode_mask(std::string_view bytes);

std::string encode_tucker(const TuckerTensor& t);
TuckerTensor decode_tucker(std::string_view bytes);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

void write_tensor(const std::filesystem::path& path, const DenseTensor& x);
DenseTensor read_tensor(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const SamplingMask& m);
SamplingMask read_mask(const std::filesystem::path& path);
void write_tucker(const std::filesystem::path& path, const TuckerTensor& t);
TuckerTensor read_tucker(const std::filesystem::path& path);

}  // namespace mrecon::io

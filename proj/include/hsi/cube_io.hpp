#pragma once

#include <filesystem>
#include <iosfwd>

#include "hsi/hypercube.hpp"
#include "hsi/types.hpp"

namespace hsi {

// On-disk formats, all little-endian and position-independent:
//
//   HSC1 cube:  "HSC1" | u16 version=1 | u16 kind (0=Raw,1=Reflectance)
//               | u32 height | u32 width | u32 band_count | u64 reserved=0
//               | band centers (band_count x f32) | payload (H*W*B x f32,
//               band-innermost)
//   HSM1 mask:  "HSM1" | u32 height | u32 width | H*W label bytes
//   HSB1 flags: "HSB1" | u32 height | u32 width | H*W bytes (0/1)

/// Validates the cube, writes HSC1, returns the byte count.
size_t write_cube(const Hypercube& cube, std::ostream& out);

/// Reads one HSC1 record from the current stream position.
Hypercube read_cube(std::istream& in);

void write_cube_file(const Hypercube& cube, const std::filesystem::path& path);
Hypercube read_cube_file(const std::filesystem::path& path);

size_t write_mask(const AnnotationMask& mask, std::ostream& out);
AnnotationMask read_mask(std::istream& in);
void write_mask_file(const AnnotationMask& mask, const std::filesystem::path& path);
AnnotationMask read_mask_file(const std::filesystem::path& path);

size_t write_flags(const BoolMask& mask, std::ostream& out);
BoolMask read_flags(std::istream& in);
void write_flags_file(const BoolMask& mask, const std::filesystem::path& path);
BoolMask read_flags_file(const std::filesystem::path& path);

/// Reads a file's leading magic (up to 4 bytes) for CLI input validation.
std::string peek_magic(const std::filesystem::path& path);

namespace io {

// Little-endian primitives shared by every reader/writer in the project.
void put_u16(std::ostream& out, uint16_t v);
void put_u32(std::ostream& out, uint32_t v);
void put_u64(std::ostream& out, uint64_t v);
void put_f32(std::ostream& out, float v);
void put_f32_array(std::ostream& out, const float* values, size_t count);
void put_bytes(std::ostream& out, const void* data, size_t count);

uint16_t get_u16(std::istream& in, const char* what);
uint32_t get_u32(std::istream& in, const char* what);
uint64_t get_u64(std::istream& in, const char* what);
float get_f32(std::istream& in, const char* what);
void get_f32_array(std::istream& in, float* values, size_t count, const char* what);
void get_bytes(std::istream& in, void* data, size_t count, const char* what);

/// Reads 4 magic bytes and throws FormatError unless they match `expected`.
void expect_magic(std::istream& in, const char* expected);

}  // namespace io

}  // namespace hsi

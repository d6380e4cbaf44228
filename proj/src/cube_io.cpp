#include "hsi/cube_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "hsi/error.hpp"

namespace hsi {

namespace io {

namespace {

void write_raw(std::ostream& out, const void* data, size_t count) {
    const auto before = out.tellp();
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(count));
    if (!out) {
        throw IoError("sink failure at byte offset " +
                      std::to_string(static_cast<long long>(before)));
    }
}

void read_raw(std::istream& in, void* data, size_t count, const char* what) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(count));
    if (static_cast<size_t>(in.gcount()) != count) {
        throw IoError(std::string(what) + ": truncated stream: expected " +
                      std::to_string(count) + " bytes, got " + std::to_string(in.gcount()));
    }
}

}  // namespace

void put_bytes(std::ostream& out, const void* data, size_t count) {
    write_raw(out, data, count);
}

void put_u16(std::ostream& out, uint16_t v) {
    const unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                                static_cast<unsigned char>((v >> 8) & 0xFF)};
    write_raw(out, b, 2);
}

void put_u32(std::ostream& out, uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    write_raw(out, b, 4);
}

void put_u64(std::ostream& out, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    write_raw(out, b, 8);
}

void put_f32(std::ostream& out, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

void put_f32_array(std::ostream& out, const float* values, size_t count) {
    // Host is little-endian in practice; byte-swap lane kept for completeness.
    if constexpr (std::endian::native == std::endian::little) {
        write_raw(out, values, count * 4);
    } else {
        for (size_t i = 0; i < count; ++i) put_f32(out, values[i]);
    }
}

void get_bytes(std::istream& in, void* data, size_t count, const char* what) {
    read_raw(in, data, count, what);
}

uint16_t get_u16(std::istream& in, const char* what) {
    unsigned char b[2];
    read_raw(in, b, 2, what);
    return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

uint32_t get_u32(std::istream& in, const char* what) {
    unsigned char b[4];
    read_raw(in, b, 4, what);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

uint64_t get_u64(std::istream& in, const char* what) {
    unsigned char b[8];
    read_raw(in, b, 8, what);
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

float get_f32(std::istream& in, const char* what) {
    const uint32_t bits = get_u32(in, what);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

void get_f32_array(std::istream& in, float* values, size_t count, const char* what) {
    if constexpr (std::endian::native == std::endian::little) {
        read_raw(in, values, count * 4, what);
    } else {
        for (size_t i = 0; i < count; ++i) values[i] = get_f32(in, what);
    }
}

void expect_magic(std::istream& in, const char* expected) {
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, expected, 4) != 0) {
        throw FormatError(std::string("bad magic: expected \"") + expected + "\"");
    }
}

}  // namespace io

size_t write_cube(const Hypercube& cube, std::ostream& out) {
    cube.validate();
    io::put_bytes(out, "HSC1", 4);
    io::put_u16(out, 1);
    io::put_u16(out, static_cast<uint16_t>(cube.kind));
    io::put_u32(out, static_cast<uint32_t>(cube.height));
    io::put_u32(out, static_cast<uint32_t>(cube.width));
    io::put_u32(out, static_cast<uint32_t>(cube.bands.count()));
    io::put_u64(out, 0);
    io::put_f32_array(out, cube.bands.centers().data(), cube.bands.centers().size());
    io::put_f32_array(out, cube.data.data(), cube.data.size());
    return 28 + 4 * cube.bands.centers().size() + 4 * cube.data.size();
}

Hypercube read_cube(std::istream& in) {
    io::expect_magic(in, "HSC1");
    const uint16_t version = io::get_u16(in, "HSC1 header");
    if (version != 1) {
        throw FormatError("HSC1: unsupported version " + std::to_string(version));
    }
    const uint16_t kind = io::get_u16(in, "HSC1 header");
    if (kind > 1) throw FormatError("HSC1: unknown cube kind " + std::to_string(kind));
    const uint32_t height = io::get_u32(in, "HSC1 header");
    const uint32_t width = io::get_u32(in, "HSC1 header");
    const uint32_t band_count = io::get_u32(in, "HSC1 header");
    (void)io::get_u64(in, "HSC1 header");

    std::vector<float> centers(band_count);
    io::get_f32_array(in, centers.data(), centers.size(), "HSC1 band centers");

    Hypercube cube;
    cube.height = static_cast<int>(height);
    cube.width = static_cast<int>(width);
    cube.kind = static_cast<Hypercube::Kind>(kind);
    cube.bands = BandSet(std::move(centers));  // throws ValidationError on bad order
    cube.data.resize(static_cast<size_t>(height) * width * band_count);
    io::get_f32_array(in, cube.data.data(), cube.data.size(), "HSC1 payload");
    cube.validate();
    return cube;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

}  // namespace

void write_cube_file(const Hypercube& cube, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_cube(cube, out);
}

Hypercube read_cube_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_cube(in);
}

size_t write_mask(const AnnotationMask& mask, std::ostream& out) {
    mask.validate();
    io::put_bytes(out, "HSM1", 4);
    io::put_u32(out, static_cast<uint32_t>(mask.height));
    io::put_u32(out, static_cast<uint32_t>(mask.width));
    io::put_bytes(out, mask.labels.data(), mask.labels.size());
    return 12 + mask.labels.size();
}

AnnotationMask read_mask(std::istream& in) {
    io::expect_magic(in, "HSM1");
    const uint32_t height = io::get_u32(in, "HSM1 header");
    const uint32_t width = io::get_u32(in, "HSM1 header");
    AnnotationMask mask(static_cast<int>(height), static_cast<int>(width));
    io::get_bytes(in, mask.labels.data(), mask.labels.size(), "HSM1 payload");
    mask.validate();
    return mask;
}

void write_mask_file(const AnnotationMask& mask, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_mask(mask, out);
}

AnnotationMask read_mask_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_mask(in);
}

size_t write_flags(const BoolMask& mask, std::ostream& out) {
    io::put_bytes(out, "HSB1", 4);
    io::put_u32(out, static_cast<uint32_t>(mask.height));
    io::put_u32(out, static_cast<uint32_t>(mask.width));
    io::put_bytes(out, mask.flags.data(), mask.flags.size());
    return 12 + mask.flags.size();
}

BoolMask read_flags(std::istream& in) {
    io::expect_magic(in, "HSB1");
    const uint32_t height = io::get_u32(in, "HSB1 header");
    const uint32_t width = io::get_u32(in, "HSB1 header");
    BoolMask mask(static_cast<int>(height), static_cast<int>(width));
    io::get_bytes(in, mask.flags.data(), mask.flags.size(), "HSB1 payload");
    for (uint8_t& f : mask.flags) f = (f != 0);
    return mask;
}

void write_flags_file(const BoolMask& mask, const std::filesystem::path& path) {
    auto out = open_out(path);
    write_flags(mask, out);
}

BoolMask read_flags_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_flags(in);
}

std::string peek_magic(const std::filesystem::path& path) {
    auto in = open_in(path);
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    return std::string(magic, magic + in.gcount());
}

}  // namespace hsi

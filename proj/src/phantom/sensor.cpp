#include "hsi/phantom/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "hsi/cube_io.hpp"
#include "hsi/error.hpp"

namespace hsi::phantom {

MosaicLayout MosaicLayout::standard(Camera cam) {
    MosaicLayout layout;
    layout.period = camera_period(cam);
    layout.bands.resize(static_cast<size_t>(layout.period) * layout.period);
    for (size_t k = 0; k < layout.bands.size(); ++k) layout.bands[k] = static_cast<uint16_t>(k);
    return layout;
}

void MosaicLayout::validate() const {
    const size_t n2 = static_cast<size_t>(period) * period;
    if (period <= 0 || bands.size() != n2) {
        throw ValidationError("MosaicLayout: size does not match period");
    }
    std::vector<bool> seen(n2, false);
    for (uint16_t b : bands) {
        if (b >= n2 || seen[b]) {
            throw ValidationError("MosaicLayout: layout is not a permutation of 0.." +
                                  std::to_string(n2 - 1));
        }
        seen[b] = true;
    }
}

void MosaicFrame::validate() const {
    layout.validate();
    if (height <= 0 || width <= 0 || height % layout.period != 0 || width % layout.period != 0) {
        throw ValidationError("MosaicFrame: dimensions not divisible by mosaic period");
    }
    if (raw.size() != static_cast<size_t>(height) * width) {
        throw ValidationError("MosaicFrame: payload does not match dimensions");
    }
    for (float v : raw) {
        if (!(v >= 0.0f && v <= 1.0f)) {
            throw ValidationError("MosaicFrame: raw value outside [0, 1]");
        }
    }
}

BandSet camera_bands(Camera cam) {
    return cam == Camera::A ? BandSet::camera_a() : BandSet::camera_b();
}

int camera_period(Camera cam) {
    return cam == Camera::A ? 4 : 5;
}

MosaicFrame render_camera(const Hypercube& truth, Camera cam, int disparity_px,
                          std::span<const float> white_gain, CropReport* crop) {
    truth.validate();
    const int period = camera_period(cam);
    const BandSet bands = camera_bands(cam);
    if (static_cast<int>(white_gain.size()) != bands.count()) {
        throw ContractError("render_camera: white_gain needs one entry per camera band");
    }
    for (float g : white_gain) {
        if (!(g > kDarkLevel && g <= 1.0f)) {
            throw ContractError("render_camera: white gains must lie in (dark level, 1]");
        }
    }
    const int mag = std::abs(disparity_px);
    const int view_width = truth.width - mag;
    const int col_offset = (cam == Camera::B) ? std::max(disparity_px, 0)
                                              : std::max(-disparity_px, 0);
    if (view_width <= 0) {
        throw ContractError("render_camera: disparity wider than the truth cube");
    }

    MosaicFrame frame;
    frame.camera = cam;
    frame.layout = MosaicLayout::standard(cam);
    frame.height = truth.height - truth.height % period;
    frame.width = view_width - view_width % period;
    if (frame.height <= 0 || frame.width <= 0) {
        throw ContractError("render_camera: truth too small for the mosaic period");
    }
    if (crop) {
        crop->dropped_rows = truth.height - frame.height;
        crop->dropped_cols = view_width - frame.width;
    }
    frame.raw.resize(static_cast<size_t>(frame.height) * frame.width);

    // Nearest truth band per camera band (lowest index wins ties, so
    // coincident fused centers resolve deterministically).
    std::vector<int> truth_band(static_cast<size_t>(bands.count()));
    for (int k = 0; k < bands.count(); ++k) {
        truth_band[static_cast<size_t>(k)] = truth.bands.nearest(bands.center(k));
    }

    for (int r = 0; r < frame.height; ++r) {
        for (int c = 0; c < frame.width; ++c) {
            const int band = frame.layout.band_at(r, c);
            const float t = truth.at(r, c + col_offset, truth_band[static_cast<size_t>(band)]);
            const float g = white_gain[static_cast<size_t>(band)];
            const float counts = (1.0f - t) * kDarkLevel + t * g;
            frame.at(r, c) = std::clamp(counts, 0.0f, 1.0f);
        }
    }
    return frame;
}

std::pair<MosaicFrame, MosaicFrame> render_references(Camera cam,
                                                      std::span<const float> white_gain,
                                                      int height, int width) {
    const int period = camera_period(cam);
    const BandSet bands = camera_bands(cam);
    if (static_cast<int>(white_gain.size()) != bands.count()) {
        throw ContractError("render_references: white_gain needs one entry per camera band");
    }
    if (height <= 0 || width <= 0 || height % period != 0 || width % period != 0) {
        throw ContractError("render_references: dimensions must be positive period multiples");
    }

    MosaicFrame white;
    white.camera = cam;
    white.layout = MosaicLayout::standard(cam);
    white.height = height;
    white.width = width;
    white.raw.resize(static_cast<size_t>(height) * width);
    MosaicFrame dark = white;

    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const int band = white.layout.band_at(r, c);
            white.at(r, c) = white_gain[static_cast<size_t>(band)];
            dark.at(r, c) = kDarkLevel;
        }
    }
    return {std::move(white), std::move(dark)};
}

size_t write_frame(const MosaicFrame& frame, std::ostream& out) {
    frame.validate();
    io::put_bytes(out, "HSR1", 4);
    const uint8_t cam = static_cast<uint8_t>(frame.camera);
    const uint8_t period = static_cast<uint8_t>(frame.layout.period);
    io::put_bytes(out, &cam, 1);
    io::put_bytes(out, &period, 1);
    io::put_u32(out, static_cast<uint32_t>(frame.height));
    io::put_u32(out, static_cast<uint32_t>(frame.width));
    for (uint16_t b : frame.layout.bands) io::put_u16(out, b);
    io::put_f32_array(out, frame.raw.data(), frame.raw.size());
    return 14 + 2 * frame.layout.bands.size() + 4 * frame.raw.size();
}

MosaicFrame read_frame(std::istream& in) {
    io::expect_magic(in, "HSR1");
    uint8_t cam_byte = 0;
    uint8_t period = 0;
    io::get_bytes(in, &cam_byte, 1, "HSR1 header");
    io::get_bytes(in, &period, 1, "HSR1 header");
    if (cam_byte > 1) throw FormatError("HSR1: unknown camera id " + std::to_string(cam_byte));

    MosaicFrame frame;
    frame.camera = static_cast<Camera>(cam_byte);
    frame.height = static_cast<int>(io::get_u32(in, "HSR1 header"));
    frame.width = static_cast<int>(io::get_u32(in, "HSR1 header"));
    frame.layout.period = period;
    frame.layout.bands.resize(static_cast<size_t>(period) * period);
    for (auto& b : frame.layout.bands) b = io::get_u16(in, "HSR1 layout");
    frame.raw.resize(static_cast<size_t>(frame.height) * frame.width);
    io::get_f32_array(in, frame.raw.data(), frame.raw.size(), "HSR1 payload");
    frame.validate();
    return frame;
}

void write_frame_file(const MosaicFrame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    write_frame(frame, out);
}

MosaicFrame read_frame_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return read_frame(in);
}

}  // namespace hsi::phantom

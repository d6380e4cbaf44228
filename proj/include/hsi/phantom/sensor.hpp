#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "hsi/bandset.hpp"
#include "hsi/hypercube.hpp"

namespace hsi::phantom {

enum class Camera : uint8_t { A = 0, B = 1 };

/// Dark level of the simulated sensors, in full-scale units. Scene counts ramp
/// linearly from this level (reflectance 0) to the per-band white level
/// (reflectance 1), which makes the white/dark correction exactly invertible.
inline constexpr float kDarkLevel = 0.02f;

/// Raw counts at or above this fraction of full scale are treated as
/// saturated (specular) downstream.
inline constexpr float kSaturationThreshold = 0.98f;

/// n x n grid of band indices; band k sits at cell (k / n, k % n) in the
/// standard layouts. Any permutation of 0..n^2-1 is a valid layout.
struct MosaicLayout {
    int period = 0;
    std::vector<uint16_t> bands;  // period*period, row-major

    static MosaicLayout standard(Camera cam);  // period 4 for A, 5 for B

    int band_at(int r, int c) const {
        return bands[static_cast<size_t>(r % period) * period + (c % period)];
    }

    void validate() const;  // permutation check
};

/// Single-sensor raw frame: one band sample per pixel, full scale = 1.0,
/// value 1.0 marks saturation.
struct MosaicFrame {
    int height = 0;
    int width = 0;
    Camera camera = Camera::A;
    MosaicLayout layout;
    std::vector<float> raw;  // height*width

    float at(int r, int c) const { return raw[static_cast<size_t>(r) * width + c]; }
    float& at(int r, int c) { return raw[static_cast<size_t>(r) * width + c]; }

    void validate() const;
};

BandSet camera_bands(Camera cam);
int camera_period(Camera cam);

struct CropReport {
    int dropped_rows = 0;
    int dropped_cols = 0;
};

/// Renders one camera's view of the fused-band truth cube.
///
/// Camera B's view is shifted horizontally by `disparity_px` relative to A
/// (rigid translation stands in for the stereo geometry): with the truth cube
/// W_t wide, camera A images columns [0, W_t - d) and camera B images columns
/// [d, W_t). Each pixel samples the one truth band nearest its mosaic cell's
/// band center, then maps through the sensor ramp
///   counts = (1 - t) * dark + t * white_gain[band]
/// and clamps to [0, 1]. Dimensions are cropped down to multiples of the
/// mosaic period; the crop is reported through `crop` when given.
MosaicFrame render_camera(const Hypercube& truth, Camera cam, int disparity_px,
                          std::span<const float> white_gain, CropReport* crop = nullptr);

/// White reference (perfect reflector through the gain path, so counts equal
/// white_gain per band cell) and dark reference (kDarkLevel everywhere).
std::pair<MosaicFrame, MosaicFrame> render_references(Camera cam,
                                                      std::span<const float> white_gain,
                                                      int height, int width);

// HSR1 frame format: "HSR1" | u8 camera | u8 period | u32 height | u32 width
//                    | layout (period^2 x u16) | payload (H*W x f32 LE)
size_t write_frame(const MosaicFrame& frame, std::ostream& out);
MosaicFrame read_frame(std::istream& in);
void write_frame_file(const MosaicFrame& frame, const std::filesystem::path& path);
MosaicFrame read_frame_file(const std::filesystem::path& path);

}  // namespace hsi::phantom

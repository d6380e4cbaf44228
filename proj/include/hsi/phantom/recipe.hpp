#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hsi/phantom/scene.hpp"
#include "hsi/phantom/sensor.hpp"

namespace hsi::phantom {

/// Knobs for the default synthetic experiment: 18 subjects, one scene each
/// plus a second scene for every sixth subject (21 scenes total), class areas
/// skewed so muscle ends up well above 43% of the extracted patches.
struct RecipeParams {
    uint64_t seed = 7;
    int subjects = 18;
    int frame_height = 200;  // camera frame size; truth is wider by the disparity
    int frame_width = 200;
    float specular_density = 5e-5f;
    float gain_amplitude = 0.25f;
    float sigma_class = 0.02f;
    float sigma_noise = 0.008f;
};

/// One renderable scene: truth-cube spec plus the stereo/calibration inputs.
struct SceneRecipe {
    SceneSpec spec;  // truth dimensions = frame + disparity columns
    int disparity = 7;
    std::vector<float> white_gain_a;
    std::vector<float> white_gain_b;
};

/// Deterministic scene list for the given parameters.
std::vector<SceneRecipe> build_recipe(const RecipeParams& params);

/// Paths of one emitted scene, relative to the dataset directory.
struct SceneRecord {
    int subject_id = 0;
    int scene_id = 0;
    std::string frame_a, frame_b;
    std::string white_a, dark_a;
    std::string white_b, dark_b;
    std::string mask;
};

void write_manifest(const std::vector<SceneRecord>& records, const std::filesystem::path& path);
std::vector<SceneRecord> read_manifest(const std::filesystem::path& path);

}  // namespace hsi::phantom

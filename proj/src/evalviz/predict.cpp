#include "hsi/evalviz/predict.hpp"

#include <cstring>
#include <string>

#include "hsi/dataset/patch.hpp"
#include "hsi/error.hpp"
#include "hsi/parallel.hpp"

namespace hsi::evalviz {

PredictionMaps predict_image(const model::Conv3dNet& net, const Hypercube& cube,
                             const BoolMask& validity, int threads) {
    using dataset::kPatchBands;
    using dataset::kPatchSize;
    if (cube.height < kPatchSize || cube.width < kPatchSize) {
        throw ContractError("predict_image: cube smaller than " + std::to_string(kPatchSize) +
                            "x" + std::to_string(kPatchSize));
    }
    if (cube.bands.count() != net.arch.in_d) {
        throw ContractError("predict_image: cube has " + std::to_string(cube.bands.count()) +
                            " bands, the network expects " + std::to_string(net.arch.in_d));
    }
    const bool use_validity = validity.height > 0;
    if (use_validity && (validity.height != cube.height || validity.width != cube.width)) {
        throw ContractError("predict_image: validity mask dimensions do not match the cube");
    }

    const int radius = kPatchSize / 2;
    const int height = cube.height;
    const int width = cube.width;

    // Valid window <=> every covered pixel valid; computed with a row-wise
    // run-length check to keep it O(H*W).
    auto pixel_ok = [&](int r, int c) {
        return (!use_validity || validity.at(r, c)) && cube.pixel_valid(r, c);
    };
    std::vector<uint8_t> window_ok(static_cast<size_t>(height) * width, 0);
    {
        // ok_run[r][c] = 1 when the horizontal run [c-radius, c+radius] is clear
        std::vector<uint8_t> run(static_cast<size_t>(height) * width, 0);
        for (int r = 0; r < height; ++r) {
            int clear = 0;  // consecutive valid pixels ending at c
            for (int c = 0; c < width; ++c) {
                clear = pixel_ok(r, c) ? clear + 1 : 0;
                if (c >= 2 * radius && clear >= kPatchSize) {
                    run[static_cast<size_t>(r) * width + (c - radius)] = 1;
                }
            }
        }
        for (int c = radius; c < width - radius; ++c) {
            int clear = 0;
            for (int r = 0; r < height; ++r) {
                clear = run[static_cast<size_t>(r) * width + c] ? clear + 1 : 0;
                if (r >= 2 * radius && clear >= kPatchSize) {
                    window_ok[static_cast<size_t>(r - radius) * width + c] = 1;
                }
            }
        }
    }

    PredictionMaps maps;
    maps.height = height;
    maps.width = width;
    maps.labels = AnnotationMask(height, width, 0);
    maps.probs.assign(static_cast<size_t>(height) * width * kNumTissueClasses, 0.0f);

    std::vector<size_t> centers;
    for (size_t i = 0; i < window_ok.size(); ++i) {
        if (window_ok[i]) centers.push_back(i);
    }

    parallel_for(0, static_cast<int64_t>(centers.size()), threads, [&](int64_t lo, int64_t hi) {
        model::Workspace<float> ws;
        std::vector<float> patch(dataset::kPatchValues);
        for (int64_t i = lo; i < hi; ++i) {
            const size_t pix = centers[static_cast<size_t>(i)];
            const int r = static_cast<int>(pix) / width;
            const int c = static_cast<int>(pix) % width;
            for (int dr = 0; dr < kPatchSize; ++dr) {
                const float* src = &cube.data[cube.index(r - radius + dr, c - radius, 0)];
                std::memcpy(&patch[static_cast<size_t>(dr) * kPatchSize * kPatchBands], src,
                            sizeof(float) * kPatchSize * kPatchBands);
            }
            model::forward(net, ws, std::span<const float>(patch));
            maps.labels.labels[pix] = static_cast<uint8_t>(model::predicted_class(ws) + 1);
            float* prow = &maps.probs[pix * kNumTissueClasses];
            for (int k = 0; k < kNumTissueClasses; ++k) {
                prow[k] = static_cast<float>(ws.probs[static_cast<size_t>(k)]);
            }
        }
    });
    return maps;
}

}  // namespace hsi::evalviz

#include "hsi/dataset/extract.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "hsi/error.hpp"

namespace hsi::dataset {

std::array<int64_t, kNumTissueClasses + 1> PatchSet::class_histogram() const {
    std::array<int64_t, kNumTissueClasses + 1> hist{};
    for (const Patch& p : patches) hist[static_cast<size_t>(p.label)]++;
    return hist;
}

std::vector<int> PatchSet::subjects() const {
    std::vector<int> ids;
    for (const Patch& p : patches) ids.push_back(p.subject_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::map<int, std::array<int64_t, kNumTissueClasses + 1>> PatchSet::per_subject_histogram() const {
    std::map<int, std::array<int64_t, kNumTissueClasses + 1>> hist;
    for (const Patch& p : patches) {
        hist[p.subject_id][static_cast<size_t>(p.label)]++;
    }
    return hist;
}

void PatchSet::append(PatchSet other) {
    patches.insert(patches.end(), std::make_move_iterator(other.patches.begin()),
                   std::make_move_iterator(other.patches.end()));
}

PatchSet extract_patches(const Hypercube& cube, const AnnotationMask& mask,
                         const BoolMask& specular, const BoolMask& validity, int subject_id,
                         int scene_id, int stride, ExtractReport* report) {
    if (cube.bands.count() != kPatchBands) {
        throw ContractError("extract_patches: cube has " + std::to_string(cube.bands.count()) +
                            " bands, patches need exactly " + std::to_string(kPatchBands));
    }
    if (mask.height != cube.height || mask.width != cube.width) {
        throw ContractError("extract_patches: mask dimensions do not match the cube");
    }
    const bool use_specular = specular.height > 0;
    const bool use_validity = validity.height > 0;
    if (use_specular && (specular.height != cube.height || specular.width != cube.width)) {
        throw ContractError("extract_patches: specular mask dimensions do not match the cube");
    }
    if (use_validity && (validity.height != cube.height || validity.width != cube.width)) {
        throw ContractError("extract_patches: validity mask dimensions do not match the cube");
    }
    if (stride < 1) throw ContractError("extract_patches: stride must be >= 1");

    ExtractReport local;
    PatchSet set;
    for (int r = 0; r + kPatchSize <= cube.height; r += stride) {
        for (int c = 0; c + kPatchSize <= cube.width; c += stride) {
            ++local.windows_considered;
            const uint8_t label = mask.at(r, c);
            if (label == 0) continue;
            bool ok = true;
            for (int i = 0; ok && i < kPatchSize; ++i) {
                const int rr = r + i;
                const uint8_t* mrow = &mask.labels[static_cast<size_t>(rr) * mask.width + c];
                for (int j = 0; j < kPatchSize; ++j) {
                    if (mrow[j] != label) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
                if (use_specular) {
                    const uint8_t* srow =
                        &specular.flags[static_cast<size_t>(rr) * specular.width + c];
                    for (int j = 0; j < kPatchSize; ++j) {
                        if (srow[j]) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (!ok) break;
                if (use_validity) {
                    const uint8_t* vrow =
                        &validity.flags[static_cast<size_t>(rr) * validity.width + c];
                    for (int j = 0; j < kPatchSize; ++j) {
                        if (!vrow[j]) {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if (!ok) continue;

            Patch patch;
            patch.data.resize(kPatchValues);
            for (int i = 0; i < kPatchSize; ++i) {
                const float* src = &cube.data[cube.index(r + i, c, 0)];
                std::memcpy(&patch.data[static_cast<size_t>(i) * kPatchSize * kPatchBands], src,
                            sizeof(float) * kPatchSize * kPatchBands);
            }
            patch.label = static_cast<TissueClass>(label);
            patch.subject_id = static_cast<uint16_t>(subject_id);
            patch.scene_id = static_cast<uint16_t>(scene_id);
            patch.row = static_cast<uint16_t>(r);
            patch.col = static_cast<uint16_t>(c);
            ++local.accepted;
            local.per_class[label]++;
            set.patches.push_back(std::move(patch));
        }
    }
    if (report) *report = local;
    return set;
}

}  // namespace hsi::dataset

#include "hsi/phantom/recipe.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <span>
#include <sstream>

#include "hsi/error.hpp"
#include "hsi/rng.hpp"

namespace hsi::phantom {

namespace {

// A scene is a 3x3 lattice of square tissue blocks separated by unlabeled
// gutters. The pitch is grid-aligned with the patch stride (10) so each block
// yields a predictable number of pure windows.
struct Lattice {
    int pitch;
    int block;
    int cells;  // per axis
};

Lattice lattice_for(int frame_h, int frame_w) {
    const int side = std::min(frame_h, frame_w);
    int pitch = (side / 3 / 10) * 10;
    pitch = std::max(pitch, 40);
    Lattice lat;
    lat.pitch = pitch;
    lat.block = pitch - 9;  // 9-pixel gutter keeps windows from bridging blocks
    lat.cells = 3;
    return lat;
}

std::vector<float> draw_gains(Rng& rng, int count) {
    std::vector<float> gains(static_cast<size_t>(count));
    for (auto& g : gains) g = static_cast<float>(rng.uniform(0.985, 1.0));
    return gains;
}

}  // namespace

std::vector<SceneRecipe> build_recipe(const RecipeParams& params) {
    if (params.subjects < 1) throw ContractError("build_recipe: need at least one subject");
    if (params.frame_height < 60 || params.frame_width < 60 ||
        params.frame_height % 20 != 0 || params.frame_width % 20 != 0) {
        throw ContractError("build_recipe: frame dimensions must be multiples of 20, >= 60");
    }

    const Lattice lat = lattice_for(params.frame_height, params.frame_width);
    const std::array<TissueClass, 4> minor = {TissueClass::Gland, TissueClass::Nerve,
                                              TissueClass::Skin, TissueClass::Vein};

    std::vector<SceneRecipe> scenes;
    int global_scene = 0;
    for (int subject = 1; subject <= params.subjects; ++subject) {
        const int scenes_for_subject = (subject % 6 == 1) ? 2 : 1;
        for (int scene_id = 0; scene_id < scenes_for_subject; ++scene_id, ++global_scene) {
            Rng rng = Rng::derived(params.seed, 100 + subject, scene_id);

            SceneRecipe recipe;
            recipe.disparity = 5 + static_cast<int>(rng.below(5));  // 5..9
            recipe.white_gain_a = draw_gains(rng, BandSet::camera_a().count());
            recipe.white_gain_b = draw_gains(rng, BandSet::camera_b().count());

            SceneSpec& spec = recipe.spec;
            spec.height = params.frame_height;
            spec.width = params.frame_width + recipe.disparity;
            spec.subject_id = subject;
            spec.scene_id = scene_id;
            spec.specular_density = params.specular_density;
            spec.gain_amplitude = params.gain_amplitude;
            spec.seed = Rng::derived(params.seed, 200 + subject, scene_id).next_u64();

            // Class deal: alternate 4/5 muscle blocks; one rotating minor class
            // gets the spare block so the small classes even out across scenes.
            const int muscle_blocks = 4 + (global_scene % 2);
            std::vector<TissueClass> deal(9, TissueClass::Muscle);
            size_t slot = static_cast<size_t>(muscle_blocks);
            const TissueClass favored = minor[static_cast<size_t>(global_scene) % minor.size()];
            if (muscle_blocks == 4) deal[slot++] = favored;
            for (TissueClass c : minor) deal[slot++] = c;
            rng.shuffle(std::span<TissueClass>(deal));

            // Blocks live in camera B's frame, whose columns start `disparity`
            // into the truth cube; the patch grid is aligned to that frame.
            for (int cell = 0; cell < lat.cells * lat.cells; ++cell) {
                Region reg;
                reg.cls = deal[static_cast<size_t>(cell)];
                reg.shape = Region::Shape::Rect;
                reg.r0 = (cell / lat.cells) * lat.pitch;
                reg.c0 = (cell % lat.cells) * lat.pitch + recipe.disparity;
                reg.h = lat.block;
                reg.w = lat.block;
                spec.regions.push_back(reg);
            }
            scenes.push_back(std::move(recipe));
        }
    }
    return scenes;
}

void write_manifest(const std::vector<SceneRecord>& records, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "# subject scene frame_a frame_b white_a dark_a white_b dark_b mask\n";
    for (const SceneRecord& r : records) {
        out << r.subject_id << ' ' << r.scene_id << ' ' << r.frame_a << ' ' << r.frame_b << ' '
            << r.white_a << ' ' << r.dark_a << ' ' << r.white_b << ' ' << r.dark_b << ' '
            << r.mask << '\n';
    }
    if (!out) throw IoError("manifest write failed: " + path.string());
}

std::vector<SceneRecord> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::vector<SceneRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        SceneRecord r;
        if (!(row >> r.subject_id >> r.scene_id >> r.frame_a >> r.frame_b >> r.white_a >>
              r.dark_a >> r.white_b >> r.dark_b >> r.mask)) {
            throw FormatError("manifest: malformed record: " + line);
        }
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace hsi::phantom

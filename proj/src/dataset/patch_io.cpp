#include "hsi/dataset/patch_io.hpp"

#include <fstream>
#include <string>

#include "hsi/cube_io.hpp"
#include "hsi/error.hpp"

namespace hsi::dataset {

size_t write_patchset(const PatchSet& set, std::ostream& out) {
    io::put_bytes(out, "HSP1", 4);
    io::put_u32(out, static_cast<uint32_t>(set.size()));
    size_t bytes = 8;
    for (const Patch& p : set.patches) {
        if (p.data.size() != kPatchValues) {
            throw ValidationError("write_patchset: patch payload is not 31x31x41");
        }
        if (!is_classifiable(p.label)) {
            throw ValidationError("write_patchset: patch carries an Unlabeled label");
        }
        io::put_u16(out, p.subject_id);
        io::put_u16(out, p.scene_id);
        const uint8_t label = static_cast<uint8_t>(p.label);
        io::put_bytes(out, &label, 1);
        io::put_u16(out, p.row);
        io::put_u16(out, p.col);
        io::put_f32_array(out, p.data.data(), p.data.size());
        bytes += 9 + 4 * kPatchValues;
    }
    return bytes;
}

PatchSet read_patchset(std::istream& in) {
    io::expect_magic(in, "HSP1");
    const uint32_t count = io::get_u32(in, "HSP1 header");
    PatchSet set;
    set.patches.resize(count);
    for (uint32_t i = 0; i < count; ++i) {
        Patch& p = set.patches[i];
        p.subject_id = io::get_u16(in, "HSP1 record");
        p.scene_id = io::get_u16(in, "HSP1 record");
        uint8_t label = 0;
        io::get_bytes(in, &label, 1, "HSP1 record");
        if (label < 1 || label > 5) {
            throw FormatError("HSP1: patch " + std::to_string(i) + " has label code " +
                              std::to_string(label) + " outside 1..5");
        }
        p.label = static_cast<TissueClass>(label);
        p.row = io::get_u16(in, "HSP1 record");
        p.col = io::get_u16(in, "HSP1 record");
        p.data.resize(kPatchValues);
        io::get_f32_array(in, p.data.data(), p.data.size(), "HSP1 payload");
    }
    return set;
}

void write_patchset_file(const PatchSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    write_patchset(set, out);
}

PatchSet read_patchset_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return read_patchset(in);
}

}  // namespace hsi::dataset

#pragma once

#include <filesystem>
#include <iosfwd>

#include "hsi/dataset/patch.hpp"

namespace hsi::dataset {

// HSP1 patch-set format: "HSP1" | u32 count | per patch:
//   u16 subject | u16 scene | u8 label | u16 row | u16 col
//   | 31*31*41 x f32 LE (row, column, band order)

size_t write_patchset(const PatchSet& set, std::ostream& out);
PatchSet read_patchset(std::istream& in);
void write_patchset_file(const PatchSet& set, const std::filesystem::path& path);
PatchSet read_patchset_file(const std::filesystem::path& path);

}  // namespace hsi::dataset

#pragma once

#include <filesystem>
#include <optional>

#include "hsi/model/net.hpp"
#include "hsi/model/optimizer.hpp"

namespace hsi::model {

// HSN1 checkpoint format (little-endian):
//   "HSN1" | u16 version=1 | u16 flags (bit 0: optimizer state present)
//   | u32 in_h | u32 in_w | u32 in_d
//   | u32 n_conv | per conv: u32 in_ch, out_ch, kh, kw, kd | u8 pool_after
//   | u32 n_fc   | per fc:   u32 in, out
//   | parameters (f32 x total, flat declaration order: conv weights
//     [kh][kw][kd][in][out] then bias per conv layer, fc weights [in][out]
//     then bias per fc layer)
//   | optional optimizer state: u64 step | m (f32 x total) | v (f32 x total)

struct Checkpoint {
    Conv3dNet net;
    std::optional<AdamState> adam;
};

void save_checkpoint(const Conv3dNet& net, const AdamState* adam,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace hsi::model

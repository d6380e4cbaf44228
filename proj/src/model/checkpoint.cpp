#include "hsi/model/checkpoint.hpp"

#include <fstream>
#include <string>

#include "hsi/cube_io.hpp"
#include "hsi/error.hpp"

namespace hsi::model {

void save_checkpoint(const Conv3dNet& net, const AdamState* adam,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());

    io::put_bytes(out, "HSN1", 4);
    io::put_u16(out, 1);
    io::put_u16(out, adam ? 1 : 0);
    io::put_u32(out, static_cast<uint32_t>(net.arch.in_h));
    io::put_u32(out, static_cast<uint32_t>(net.arch.in_w));
    io::put_u32(out, static_cast<uint32_t>(net.arch.in_d));
    io::put_u32(out, static_cast<uint32_t>(net.arch.conv.size()));
    for (const ConvSpec& cs : net.arch.conv) {
        io::put_u32(out, static_cast<uint32_t>(cs.in_ch));
        io::put_u32(out, static_cast<uint32_t>(cs.out_ch));
        io::put_u32(out, static_cast<uint32_t>(cs.kh));
        io::put_u32(out, static_cast<uint32_t>(cs.kw));
        io::put_u32(out, static_cast<uint32_t>(cs.kd));
        const uint8_t pool = cs.pool_after ? 1 : 0;
        io::put_bytes(out, &pool, 1);
    }
    io::put_u32(out, static_cast<uint32_t>(net.arch.fc.size()));
    for (const FcSpec& fs : net.arch.fc) {
        io::put_u32(out, static_cast<uint32_t>(fs.in));
        io::put_u32(out, static_cast<uint32_t>(fs.out));
    }
    io::put_f32_array(out, net.params.data(), net.params.size());
    if (adam) {
        if (adam->m.size() != net.param_count() || adam->v.size() != net.param_count()) {
            throw ContractError("save_checkpoint: optimizer state size mismatch");
        }
        io::put_u64(out, adam->step);
        io::put_f32_array(out, adam->m.data(), adam->m.size());
        io::put_f32_array(out, adam->v.data(), adam->v.size());
    }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());

    io::expect_magic(in, "HSN1");
    const uint16_t version = io::get_u16(in, "HSN1 header");
    if (version != 1) throw FormatError("HSN1: unsupported version " + std::to_string(version));
    const uint16_t flags = io::get_u16(in, "HSN1 header");

    Architecture arch;
    arch.in_h = static_cast<int>(io::get_u32(in, "HSN1 header"));
    arch.in_w = static_cast<int>(io::get_u32(in, "HSN1 header"));
    arch.in_d = static_cast<int>(io::get_u32(in, "HSN1 header"));
    const uint32_t n_conv = io::get_u32(in, "HSN1 header");
    for (uint32_t i = 0; i < n_conv; ++i) {
        ConvSpec cs;
        cs.in_ch = static_cast<int>(io::get_u32(in, "HSN1 conv spec"));
        cs.out_ch = static_cast<int>(io::get_u32(in, "HSN1 conv spec"));
        cs.kh = static_cast<int>(io::get_u32(in, "HSN1 conv spec"));
        cs.kw = static_cast<int>(io::get_u32(in, "HSN1 conv spec"));
        cs.kd = static_cast<int>(io::get_u32(in, "HSN1 conv spec"));
        uint8_t pool = 0;
        io::get_bytes(in, &pool, 1, "HSN1 conv spec");
        cs.pool_after = pool != 0;
        arch.conv.push_back(cs);
    }
    const uint32_t n_fc = io::get_u32(in, "HSN1 header");
    for (uint32_t i = 0; i < n_fc; ++i) {
        FcSpec fs;
        fs.in = static_cast<int>(io::get_u32(in, "HSN1 fc spec"));
        fs.out = static_cast<int>(io::get_u32(in, "HSN1 fc spec"));
        arch.fc.push_back(fs);
    }

    Checkpoint ckpt;
    ckpt.net = Conv3dNet::build(arch);  // validates the architecture
    io::get_f32_array(in, ckpt.net.params.data(), ckpt.net.params.size(), "HSN1 parameters");
    if (flags & 1) {
        AdamState adam(ckpt.net.param_count());
        adam.step = io::get_u64(in, "HSN1 optimizer state");
        io::get_f32_array(in, adam.m.data(), adam.m.size(), "HSN1 optimizer state");
        io::get_f32_array(in, adam.v.data(), adam.v.size(), "HSN1 optimizer state");
        ckpt.adam = std::move(adam);
    }
    return ckpt;
}

}  // namespace hsi::model

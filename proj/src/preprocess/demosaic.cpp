#include "hsi/preprocess/demosaic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hsi/parallel.hpp"

namespace hsi::preprocess {

namespace {

struct AxisInterp {
    int lo;     // lattice cell index
    int hi;
    double t;   // 0 at lo, 1 at hi
};

// Per output coordinate: surrounding lattice cells along one axis, clamped
// (edge-replicated) outside the sample range.
std::vector<AxisInterp> axis_table(int size, int offset, int period, int cells) {
    std::vector<AxisInterp> table(static_cast<size_t>(size));
    for (int x = 0; x < size; ++x) {
        const double f = static_cast<double>(x - offset) / period;
        int lo = static_cast<int>(std::floor(f));
        double t = f - lo;
        if (lo < 0) {
            lo = 0;
            t = 0.0;
        }
        if (lo >= cells - 1) {
            lo = cells - 1;
            t = 0.0;
        }
        table[static_cast<size_t>(x)] = {lo, std::min(lo + 1, cells - 1), t};
    }
    return table;
}

}  // namespace

Hypercube demosaic(const phantom::MosaicFrame& frame, int threads) {
    frame.validate();
    const int period = frame.layout.period;
    const int n_bands = period * period;
    const int cells_r = frame.height / period;
    const int cells_c = frame.width / period;

    Hypercube cube(frame.height, frame.width, phantom::camera_bands(frame.camera),
                   Hypercube::Kind::Raw);

    parallel_for(0, n_bands, threads, [&](int64_t b_lo, int64_t b_hi) {
        std::vector<float> grid(static_cast<size_t>(cells_r) * cells_c);
        for (int64_t band = b_lo; band < b_hi; ++band) {
            // Locate the mosaic cell carrying this band.
            int off_r = 0, off_c = 0;
            for (int i = 0; i < n_bands; ++i) {
                if (frame.layout.bands[static_cast<size_t>(i)] == band) {
                    off_r = i / period;
                    off_c = i % period;
                    break;
                }
            }
            for (int i = 0; i < cells_r; ++i) {
                for (int j = 0; j < cells_c; ++j) {
                    grid[static_cast<size_t>(i) * cells_c + j] =
                        frame.at(off_r + i * period, off_c + j * period);
                }
            }
            const auto rows = axis_table(frame.height, off_r, period, cells_r);
            const auto cols = axis_table(frame.width, off_c, period, cells_c);
            for (int r = 0; r < frame.height; ++r) {
                const AxisInterp& ar = rows[static_cast<size_t>(r)];
                for (int c = 0; c < frame.width; ++c) {
                    const AxisInterp& ac = cols[static_cast<size_t>(c)];
                    const double v00 = grid[static_cast<size_t>(ar.lo) * cells_c + ac.lo];
                    const double v01 = grid[static_cast<size_t>(ar.lo) * cells_c + ac.hi];
                    const double v10 = grid[static_cast<size_t>(ar.hi) * cells_c + ac.lo];
                    const double v11 = grid[static_cast<size_t>(ar.hi) * cells_c + ac.hi];
                    const double top = v00 + ac.t * (v01 - v00);
                    const double bottom = v10 + ac.t * (v11 - v10);
                    cube.at(r, c, static_cast<int>(band)) =
                        static_cast<float>(top + ar.t * (bottom - top));
                }
            }
        }
    });
    return cube;
}

}  // namespace hsi::preprocess

#pragma once

#include <cstdint>
#include <vector>

#include "cssr/frame.hpp"

namespace cssr {

// A band of paired detail spikes: `pairs` +v/-v spike pairs per frame with
// magnitude v drawn uniformly from [min_mag, max_mag].
struct DetailBand {
    int pairs = 0;
    int min_mag = 0;
    int max_mag = 0;
};

// Deterministic synthetic clip for codec experiments: a constant mid-gray
// background with paired opposite-sign spikes. Each +v/-v pair lives inside a
// single scale x scale cell, so a box downsample by `scale` reproduces the
// flat background exactly and the residual against the upsampled base equals
// the planted spikes. That makes per-block sparsity fully controlled by the
// band configuration. Spike cells are chosen without reuse, uniformly over
// the frame; `static_content` repeats frame 0 instead of resampling.
VideoSequence detail_clip(int width, int height, int frame_count, int scale,
                          const std::vector<DetailBand>& bands, std::uint64_t seed,
                          bool static_content = false);

// Flat clip at the given level; residual layer is identically zero.
VideoSequence constant_clip(int width, int height, int frame_count, std::uint8_t level = 128);

}  // namespace cssr

#include "cssr/synth.hpp"

#include <numeric>
#include <string>

#include "cssr/errors.hpp"
#include "cssr/rng.hpp"

namespace cssr {

// Every +v/-v pair sits inside one scale x scale cell, so each cell mean -- and
// with it the whole base layer -- stays exactly at the background level. The
// residual against the upsampled base is therefore precisely the planted
// spikes, which gives experiments full control over block sparsity.
VideoSequence detail_clip(int width, int height, int frame_count, int scale,
                          const std::vector<DetailBand>& bands, std::uint64_t seed,
                          bool static_content) {
    if (width <= 0 || height <= 0) throw ParameterError("clip dimensions must be positive");
    if (frame_count < 1) throw ParameterError("clip needs at least one frame");
    if (scale < 2) throw ParameterError("detail clip needs scale >= 2 to balance spike pairs");
    if (width % scale != 0 || height % scale != 0)
        throw DimensionError("clip dimensions must be multiples of the scale factor");

    int total_pairs = 0;
    for (const DetailBand& band : bands) {
        if (band.pairs < 0) throw ParameterError("band pair count must be >= 0");
        if (band.pairs == 0) continue;
        if (band.min_mag < 1 || band.max_mag > 127 || band.min_mag > band.max_mag)
            throw ParameterError("band magnitudes must satisfy 1 <= min <= max <= 127");
        total_pairs += band.pairs;
    }

    const int cells_x = width / scale;
    const int cells_y = height / scale;
    const int cell_count = cells_x * cells_y;
    const int cell_area = scale * scale;
    if (total_pairs > cell_count)
        throw ParameterError("cannot place " + std::to_string(total_pairs) + " spike pairs in " +
                             std::to_string(cell_count) + " cells");

    constexpr std::uint8_t kBackground = 128;
    VideoSequence video;
    video.frames.reserve(static_cast<std::size_t>(frame_count));
    SplitMix64 rng(seed);
    std::vector<int> cells(static_cast<std::size_t>(cell_count));

    for (int f = 0; f < frame_count; ++f) {
        if (static_content && f > 0) {
            video.frames.push_back(video.frames.front());
            continue;
        }
        VideoFrame frame(width, height, kBackground);

        // Partial Fisher-Yates: the first total_pairs entries become the
        // distinct cells used by this frame.
        std::iota(cells.begin(), cells.end(), 0);
        for (int i = 0; i < total_pairs; ++i) {
            const int j = i + static_cast<int>(rng.next() % static_cast<std::uint64_t>(cell_count - i));
            std::swap(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(j)]);
        }

        int next_cell = 0;
        for (const DetailBand& band : bands) {
            for (int p = 0; p < band.pairs; ++p) {
                const int cell = cells[static_cast<std::size_t>(next_cell++)];
                const int cx = (cell % cells_x) * scale;
                const int cy = (cell / cells_x) * scale;

                const int span = band.max_mag - band.min_mag + 1;
                const int mag =
                    band.min_mag + static_cast<int>(rng.next() % static_cast<std::uint64_t>(span));

                const int a = static_cast<int>(rng.next() % static_cast<std::uint64_t>(cell_area));
                int b = static_cast<int>(rng.next() % static_cast<std::uint64_t>(cell_area - 1));
                if (b >= a) ++b;

                frame.at(cx + a % scale, cy + a / scale) = static_cast<std::uint8_t>(kBackground + mag);
                frame.at(cx + b % scale, cy + b / scale) = static_cast<std::uint8_t>(kBackground - mag);
            }
        }
        video.frames.push_back(std::move(frame));
    }
    return video;
}

VideoSequence constant_clip(int width, int height, int frame_count, std::uint8_t level) {
    if (width <= 0 || height <= 0) throw ParameterError("clip dimensions must be positive");
    if (frame_count < 1) throw ParameterError("clip needs at least one frame");
    VideoSequence video;
    video.frames.assign(static_cast<std::size_t>(frame_count), VideoFrame(width, height, level));
    return video;
}

}  // namespace cssr

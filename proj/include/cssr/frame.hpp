#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cssr {

struct FrameRate {
    std::uint32_t num = 25;
    std::uint32_t den = 1;

    bool operator==(const FrameRate&) const = default;
};

// One 8-bit luma raster, row-major.
struct VideoFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> luma;

    VideoFrame() = default;
    VideoFrame(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), luma(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    std::uint8_t at(int x, int y) const { return luma[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return luma[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return luma.size(); }

    bool operator==(const VideoFrame&) const = default;
};

// Signed difference between an original frame and its up-sampled base.
// Values stay in [-255, 255] and are never clamped until final assembly.
struct ResidualFrame {
    int width = 0;
    int height = 0;
    std::vector<std::int16_t> values;

    ResidualFrame() = default;
    ResidualFrame(int w, int h, std::int16_t fill = 0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    std::int16_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    std::int16_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const ResidualFrame&) const = default;
};

// Ordered frames sharing one geometry. The frame rate is carried as metadata
// only; nothing in the codec depends on it.
struct VideoSequence {
    std::vector<VideoFrame> frames;
    FrameRate frame_rate;

    int width() const { return frames.empty() ? 0 : frames.front().width; }
    int height() const { return frames.empty() ? 0 : frames.front().height; }

    bool operator==(const VideoSequence&) const = default;
};

}  // namespace cssr

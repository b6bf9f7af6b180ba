#include "cssr/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "cssr/errors.hpp"

namespace cssr {

namespace {

void check_scale(ScaleFactor m) {
    if (m.value < 1) throw ParameterError("scale factor must be >= 1");
}

}  // namespace

VideoFrame downsample(const VideoFrame& frame, ScaleFactor m) {
    check_scale(m);
    const int s = m.value;
    if (frame.width % s != 0 || frame.height % s != 0)
        throw DimensionError("frame " + std::to_string(frame.width) + "x" +
                             std::to_string(frame.height) + " is not divisible by scale " +
                             std::to_string(s));

    VideoFrame out(frame.width / s, frame.height / s);
    const std::uint32_t cell = static_cast<std::uint32_t>(s) * static_cast<std::uint32_t>(s);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            std::uint32_t sum = 0;
            for (int dy = 0; dy < s; ++dy)
                for (int dx = 0; dx < s; ++dx) sum += frame.at(x * s + dx, y * s + dy);
            // integer mean, half rounded up (values are non-negative)
            out.at(x, y) = static_cast<std::uint8_t>((2 * sum + cell) / (2 * cell));
        }
    }
    return out;
}

VideoFrame upsample(const VideoFrame& frame, ScaleFactor m) {
    check_scale(m);
    const int s = m.value;
    VideoFrame out(frame.width * s, frame.height * s);

    // Precompute the 1-D taps: output i samples source (i + 0.5)/s - 0.5.
    struct Tap {
        int lo, hi;
        double w_hi;
    };
    const auto taps_for = [s](int out_size, int src_size) {
        std::vector<Tap> taps(static_cast<std::size_t>(out_size));
        for (int i = 0; i < out_size; ++i) {
            const double src = (i + 0.5) / s - 0.5;
            double base = std::floor(src);
            double frac = src - base;
            int lo = static_cast<int>(base);
            int hi = lo + 1;
            if (lo < 0) lo = 0;
            if (hi > src_size - 1) hi = src_size - 1;
            if (lo > src_size - 1) lo = src_size - 1;
            taps[static_cast<std::size_t>(i)] = {lo, hi, frac};
        }
        return taps;
    };
    const auto tx = taps_for(out.width, frame.width);
    const auto ty = taps_for(out.height, frame.height);

    for (int y = 0; y < out.height; ++y) {
        const Tap& v = ty[static_cast<std::size_t>(y)];
        for (int x = 0; x < out.width; ++x) {
            const Tap& h = tx[static_cast<std::size_t>(x)];
            const double top = (1.0 - h.w_hi) * frame.at(h.lo, v.lo) + h.w_hi * frame.at(h.hi, v.lo);
            const double bot = (1.0 - h.w_hi) * frame.at(h.lo, v.hi) + h.w_hi * frame.at(h.hi, v.hi);
            const double value = (1.0 - v.w_hi) * top + v.w_hi * bot;
            const long rounded = std::lround(value);  // half away from zero
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(rounded, 0L, 255L));
        }
    }
    return out;
}

ResidualFrame compute_residual(const VideoFrame& original, const VideoFrame& upsampled) {
    if (original.width != upsampled.width || original.height != upsampled.height)
        throw DimensionError("residual operands differ in size");
    ResidualFrame out(original.width, original.height);
    for (std::size_t i = 0; i < original.luma.size(); ++i)
        out.values[i] = static_cast<std::int16_t>(static_cast<int>(original.luma[i]) -
                                                  static_cast<int>(upsampled.luma[i]));
    return out;
}

VideoFrame super_resolve(const VideoFrame& base_upsampled, const ResidualFrame& residual) {
    if (base_upsampled.width != residual.width || base_upsampled.height != residual.height)
        throw DimensionError("super-resolve operands differ in size");
    VideoFrame out(base_upsampled.width, base_upsampled.height);
    for (std::size_t i = 0; i < out.luma.size(); ++i) {
        const int value = static_cast<int>(base_upsampled.luma[i]) + residual.values[i];
        out.luma[i] = static_cast<std::uint8_t>(std::clamp(value, 0, 255));
    }
    return out;
}

}  // namespace cssr

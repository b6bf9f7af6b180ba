#pragma once

#include "cssr/frame.hpp"

namespace cssr {

// Rate of the down/up-sampling filter pair.
struct ScaleFactor {
    int value = 2;
};

// m x m box (mean) filter, rounded half away from zero. Output is
// (width/m) x (height/m); dimensions must divide evenly.
VideoFrame downsample(const VideoFrame& frame, ScaleFactor m);

// Bilinear interpolation with half-pixel phase: output pixel x maps to source
// coordinate (x + 0.5)/m - 0.5, edges clamped. Results are rounded half away
// from zero and clamped to [0, 255]. Output is (width*m) x (height*m).
VideoFrame upsample(const VideoFrame& frame, ScaleFactor m);

// Per-pixel signed difference original - upsampled, never clamped.
ResidualFrame compute_residual(const VideoFrame& original, const VideoFrame& upsampled);

// Per-pixel sum of the up-sampled base and a residual, clamped to [0, 255].
// With the exact residual of compute_residual this inverts it pixel-exactly.
VideoFrame super_resolve(const VideoFrame& base_upsampled, const ResidualFrame& residual);

}  // namespace cssr

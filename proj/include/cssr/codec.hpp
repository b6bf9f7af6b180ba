#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cssr/container.hpp"
#include "cssr/frame.hpp"
#include "cssr/layers.hpp"
#include "cssr/solvers.hpp"

namespace cssr {

// Encoder-side knobs. `rate` is the per-block sampling rate M/N where
// N = block_size^2; the measurement count is round(rate * N) clamped to
// [1, N-1]. `threshold` is the zero-forcing magnitude cutoff applied to the
// residual before sampling. `threads` <= 0 means auto.
struct CodecConfig {
    ScaleFactor scale{2};
    int block_size = 32;
    double rate = 0.3;
    int threshold = 15;
    std::uint64_t seed = 1;
    SolverConfig solver{};
    int k_cap = 0;  // optional decoder-side cap on per-block sparsity, 0 = off
    int threads = 0;
};

struct DecodeOptions {
    SolverConfig solver{};
    int k_cap = 0;
    bool strict = false;  // rethrow per-block solver failures instead of zero-filling
    int threads = 0;
};

struct DecodeFrameStats {
    double mean_block_sparsity = 0.0;  // mean stored k over non-skipped blocks
    long long iterations_total = 0;    // summed solver iterations across blocks
    int failed_blocks = 0;             // blocks zero-filled after solver failure
};

struct DecodeResult {
    VideoSequence video;           // super-resolved output
    VideoSequence base_upsampled;  // base layer after upsampling, for comparisons
    std::vector<DecodeFrameStats> stats;
};

struct FrameMetrics {
    int frame_index = 0;
    double psnr_db = 0.0;           // decoded vs original
    double psnr_baseline_db = 0.0;  // upsampled base vs original
    bool psnr_infinite = false;
    bool baseline_infinite = false;
    double mean_block_sparsity = 0.0;       // filled from decode stats when available
    long long decode_iterations_total = 0;  // likewise
};

// Peak signal-to-noise ratio over 8-bit luma; returns +inf for identical frames.
double psnr(const VideoFrame& reference, const VideoFrame& test);

CompressedStream encode(const VideoSequence& video, const CodecConfig& config);
DecodeResult decode(const CompressedStream& stream, const DecodeOptions& options = {});

std::vector<FrameMetrics> evaluate(const VideoSequence& original,
                                   const VideoSequence& decoded,
                                   const VideoSequence& base_upsampled);

// One sweep configuration evaluated on one frame.
struct SweepRecord {
    int frame_index = 0;
    SolverKind solver = SolverKind::Omp;
    int threshold = 0;
    double rate = 0.0;
    double psnr_db = 0.0;
    bool psnr_infinite = false;
    double baseline_psnr_db = 0.0;
    bool baseline_infinite = false;
    double mean_k = 0.0;
    std::uint64_t super_bytes = 0;
    std::string status;  // "ok" or "failed:<n>" when blocks were zero-filled
};

std::vector<SweepRecord> sweep(const VideoSequence& video, const CodecConfig& base_config,
                               const std::vector<SolverKind>& solvers,
                               const std::vector<int>& thresholds,
                               const std::vector<double>& rates);

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out);

}  // namespace cssr

#include "cssr/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "cssr/cs_core.hpp"
#include "cssr/errors.hpp"
#include "cssr/parallel.hpp"
#include "cssr/rng.hpp"

namespace cssr {

namespace {

void check_codec_config(const CodecConfig& config, int width, int height) {
    if (config.scale.value < 1) throw ConfigError("scale factor must be >= 1");
    if (config.scale.value > 255) throw ConfigError("scale factor must fit in one byte");
    if (config.block_size < 2 || config.block_size > 255)
        throw ConfigError("block size must lie in [2, 255]");
    if (config.threshold < 0 || config.threshold > 255)
        throw ConfigError("zero-forcing threshold must lie in [0, 255]");
    if (!(config.rate > 0.0) || !(config.rate < 1.0))
        throw ConfigError("sampling rate must lie in (0, 1)");
    if (config.rate * config.block_size * config.block_size < 1.0)
        throw ConfigError("rate * block_size^2 must be >= 1");
    if (config.k_cap < 0) throw ConfigError("sparsity cap must be >= 0");
    if (width > 65535 || height > 65535)
        throw ConfigError("frame dimensions must fit in 16 bits");

    const int tile = config.scale.value * config.block_size;
    if (width % tile != 0 || height % tile != 0)
        throw ConfigError("frame " + std::to_string(width) + "x" + std::to_string(height) +
                          " must be a multiple of scale*block_size = " + std::to_string(tile) +
                          " in both dimensions");
}

int measurement_rows(double rate, int n) {
    const long m = std::lround(rate * static_cast<double>(n));
    return static_cast<int>(std::clamp(m, 1L, static_cast<long>(n - 1)));
}

struct BlockRef {
    std::uint32_t frame;
    int row, col, index;
};

std::vector<BlockRef> flatten_blocks(const StreamHeader& h) {
    std::vector<BlockRef> refs;
    refs.reserve(h.frame_count * h.blocks_per_frame());
    for (std::uint32_t f = 0; f < h.frame_count; ++f)
        for (int r = 0; r < h.blocks_y(); ++r)
            for (int c = 0; c < h.blocks_x(); ++c)
                refs.push_back({f, r, c, r * h.blocks_x() + c});
    return refs;
}

}  // namespace

double psnr(const VideoFrame& reference, const VideoFrame& test) {
    if (reference.width != test.width || reference.height != test.height)
        throw DimensionError("PSNR operands differ in size");
    if (reference.pixel_count() == 0) throw ParameterError("PSNR of an empty frame");

    double sum_sq = 0.0;
    for (std::size_t i = 0; i < reference.luma.size(); ++i) {
        const double d = static_cast<double>(reference.luma[i]) - static_cast<double>(test.luma[i]);
        sum_sq += d * d;
    }
    if (sum_sq == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sum_sq / static_cast<double>(reference.pixel_count());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

CompressedStream encode(const VideoSequence& video, const CodecConfig& config) {
    if (video.frames.empty()) throw ParameterError("cannot encode an empty sequence");
    for (const VideoFrame& frame : video.frames)
        if (frame.width != video.width() || frame.height != video.height())
            throw DimensionError("all frames must share one geometry");
    check_codec_config(config, video.width(), video.height());

    const int n = config.block_size * config.block_size;
    const int m_rows = measurement_rows(config.rate, n);

    CompressedStream stream;
    StreamHeader& h = stream.header;
    h.version = kStreamVersion;
    h.width = static_cast<std::uint16_t>(video.width());
    h.height = static_cast<std::uint16_t>(video.height());
    h.frame_count = static_cast<std::uint32_t>(video.frames.size());
    h.scale = static_cast<std::uint8_t>(config.scale.value);
    h.block_size = static_cast<std::uint16_t>(config.block_size);
    h.rows = static_cast<std::uint16_t>(m_rows);
    h.cols = static_cast<std::uint16_t>(n);
    h.threshold = static_cast<std::uint16_t>(config.threshold);
    h.seed = config.seed;
    h.solver_hint = static_cast<std::uint8_t>(config.solver.kind);

    const unsigned threads = resolve_thread_count(config.threads);

    // Layer split first, one frame per slot.
    stream.frames.resize(video.frames.size());
    std::vector<ResidualFrame> residuals(video.frames.size());
    parallel_for(video.frames.size(), threads, [&](std::size_t f) {
        const VideoFrame base = downsample(video.frames[f], config.scale);
        const VideoFrame up = upsample(base, config.scale);
        residuals[f] = compute_residual(video.frames[f], up);
        stream.frames[f].base = base.luma;
        stream.frames[f].blocks.resize(h.blocks_per_frame());
    });

    // Then every block independently; records land in disjoint slots.
    const std::vector<BlockRef> refs = flatten_blocks(h);
    parallel_for(refs.size(), threads, [&](std::size_t i) {
        const BlockRef& ref = refs[i];
        const std::vector<std::int16_t> vec =
            vectorize_block(residuals[ref.frame], ref.row, ref.col, config.block_size);
        const SparseBlockVector sparse = zero_force(vec, config.threshold).first;

        BlockRecord& rec = stream.frames[ref.frame].blocks[static_cast<std::size_t>(ref.index)];
        if (sparse.k == 0) {
            rec.skip = 1;
            rec.k = 0;
            return;
        }
        const SensingMatrix A = make_sensing_matrix(
            m_rows, n, block_matrix_seed(config.seed, ref.frame, static_cast<std::uint32_t>(ref.index)));
        const BlockMeasurement meas = measure(A, sparse);
        rec.skip = 0;
        rec.k = static_cast<std::uint16_t>(sparse.k);
        rec.measurements.resize(static_cast<std::size_t>(m_rows));
        for (int r = 0; r < m_rows; ++r)
            rec.measurements[static_cast<std::size_t>(r)] = static_cast<float>(meas.y(r));
    });

    return stream;
}

namespace {

void check_decodable(const CompressedStream& stream) {
    validate_header(stream.header);
    const StreamHeader& h = stream.header;
    if (stream.frames.size() != h.frame_count)
        throw FormatError("stream holds " + std::to_string(stream.frames.size()) +
                          " frames but the header declares " + std::to_string(h.frame_count));
    for (std::size_t f = 0; f < stream.frames.size(); ++f) {
        const FramePayload& frame = stream.frames[f];
        if (frame.base.size() != h.base_bytes_per_frame() ||
            frame.blocks.size() != h.blocks_per_frame())
            throw FormatError("frame " + std::to_string(f) + " payload does not match the header");
        for (const BlockRecord& rec : frame.blocks) {
            if (rec.skip > 1 || (rec.skip == 1 && (rec.k != 0 || !rec.measurements.empty())) ||
                (rec.skip == 0 && rec.measurements.size() != h.rows) || rec.k > h.cols)
                throw FormatError("frame " + std::to_string(f) + " holds a malformed block record");
        }
    }
}

}  // namespace

DecodeResult decode(const CompressedStream& stream, const DecodeOptions& options) {
    check_decodable(stream);
    const StreamHeader& h = stream.header;
    const ScaleFactor scale{h.scale};
    const int block = h.block_size;
    const unsigned threads = resolve_thread_count(options.threads);

    DecodeResult result;
    result.video.frames.resize(h.frame_count);
    result.base_upsampled.frames.resize(h.frame_count);
    result.stats.resize(h.frame_count);

    std::vector<ResidualFrame> residuals(h.frame_count);
    parallel_for(h.frame_count, threads, [&](std::size_t f) {
        VideoFrame base(h.base_width(), h.base_height());
        base.luma = stream.frames[f].base;
        result.base_upsampled.frames[f] = upsample(base, scale);
        residuals[f] = ResidualFrame(h.width, h.height);
    });

    const std::vector<BlockRef> refs = flatten_blocks(h);
    std::vector<long long> iterations(refs.size(), 0);
    std::vector<std::exception_ptr> failures(refs.size());

    parallel_for(refs.size(), threads, [&](std::size_t i) {
        const BlockRef& ref = refs[i];
        const BlockRecord& rec =
            stream.frames[ref.frame].blocks[static_cast<std::size_t>(ref.index)];
        if (rec.skip == 1) return;  // residual slots start zeroed

        int k = options.solver.k > 0 ? options.solver.k : static_cast<int>(rec.k);
        if (options.k_cap > 0) k = std::min(k, options.k_cap);
        k = std::min({k, static_cast<int>(h.rows), static_cast<int>(h.cols)});
        if (k <= 0 && options.solver.kind != SolverKind::BasisPursuit) return;

        Eigen::VectorXd y(h.rows);
        for (int r = 0; r < h.rows; ++r) y(r) = rec.measurements[static_cast<std::size_t>(r)];

        const SensingMatrix A = make_sensing_matrix(
            h.rows, h.cols, block_matrix_seed(h.seed, ref.frame, static_cast<std::uint32_t>(ref.index)));

        ReconstructionResult rr;
        try {
            switch (options.solver.kind) {
                case SolverKind::Omp:
                    rr = omp(A.entries, y, k);
                    break;
                case SolverKind::Cosamp: {
                    const int budget =
                        options.solver.max_iterations > 0 ? options.solver.max_iterations : 50;
                    rr = cosamp(A.entries, y, k, budget, options.solver.eta * y.norm());
                    break;
                }
                case SolverKind::BasisPursuit: {
                    BasisPursuitOptions bp;
                    if (options.solver.max_iterations > 0)
                        bp.max_iterations = options.solver.max_iterations;
                    rr = basis_pursuit(A.entries, y, options.solver.sigma, bp);
                    break;
                }
            }
        } catch (const ConvergenceError&) {
            failures[i] = std::current_exception();
            return;  // block stays zero unless strict mode rethrows below
        }

        iterations[i] = rr.iterations;
        std::vector<std::int16_t> vec(static_cast<std::size_t>(h.cols));
        for (int j = 0; j < static_cast<int>(h.cols); ++j) {
            const long v = std::lround(rr.coefficients(j));
            vec[static_cast<std::size_t>(j)] =
                static_cast<std::int16_t>(std::clamp(v, -255L, 255L));
        }
        devectorize_block(vec, residuals[ref.frame], ref.row, ref.col, block);
    });

    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (!failures[i]) continue;
        if (options.strict) std::rethrow_exception(failures[i]);
        ++result.stats[refs[i].frame].failed_blocks;
    }

    for (std::size_t i = 0; i < refs.size(); ++i)
        result.stats[refs[i].frame].iterations_total += iterations[i];
    for (std::size_t f = 0; f < h.frame_count; ++f) {
        long long k_sum = 0;
        long long live = 0;
        for (const BlockRecord& rec : stream.frames[f].blocks) {
            if (rec.skip == 0) {
                k_sum += rec.k;
                ++live;
            }
        }
        result.stats[f].mean_block_sparsity =
            live > 0 ? static_cast<double>(k_sum) / static_cast<double>(live) : 0.0;
    }

    parallel_for(h.frame_count, threads, [&](std::size_t f) {
        result.video.frames[f] = super_resolve(result.base_upsampled.frames[f], residuals[f]);
    });
    return result;
}

std::vector<FrameMetrics> evaluate(const VideoSequence& original, const VideoSequence& decoded,
                                   const VideoSequence& base_upsampled) {
    if (original.frames.size() != decoded.frames.size() ||
        original.frames.size() != base_upsampled.frames.size())
        throw DimensionError("sequences differ in frame count");

    std::vector<FrameMetrics> metrics;
    metrics.reserve(original.frames.size());
    for (std::size_t f = 0; f < original.frames.size(); ++f) {
        FrameMetrics fm;
        fm.frame_index = static_cast<int>(f);
        fm.psnr_db = psnr(original.frames[f], decoded.frames[f]);
        fm.psnr_baseline_db = psnr(original.frames[f], base_upsampled.frames[f]);
        fm.psnr_infinite = std::isinf(fm.psnr_db);
        fm.baseline_infinite = std::isinf(fm.psnr_baseline_db);
        metrics.push_back(fm);
    }
    return metrics;
}

std::vector<SweepRecord> sweep(const VideoSequence& video, const CodecConfig& base_config,
                               const std::vector<SolverKind>& solvers,
                               const std::vector<int>& thresholds,
                               const std::vector<double>& rates) {
    if (solvers.empty() || thresholds.empty() || rates.empty())
        throw ParameterError("sweep needs at least one solver, threshold and rate");

    const auto csv_safe = [](std::string text) {
        for (char& c : text)
            if (c == ',' || c == '\n' || c == '\r') c = ' ';
        return text;
    };
    const auto error_rows = [&](std::vector<SweepRecord>& records, SolverKind solver, int ct,
                                double rate, const std::string& message) {
        for (std::size_t f = 0; f < video.frames.size(); ++f) {
            SweepRecord rec;
            rec.frame_index = static_cast<int>(f);
            rec.solver = solver;
            rec.threshold = ct;
            rec.rate = rate;
            rec.status = "error: " + csv_safe(message);
            records.push_back(std::move(rec));
        }
    };

    std::vector<SweepRecord> records;
    for (const int ct : thresholds) {
        for (const double rate : rates) {
            CodecConfig config = base_config;
            config.threshold = ct;
            config.rate = rate;

            CompressedStream stream;
            PayloadAccounting acc;
            std::string encode_failure;
            try {
                stream = encode(video, config);
                acc = payload_accounting(stream);
            } catch (const Error& e) {
                encode_failure = e.what();
            }

            for (const SolverKind solver : solvers) {
                if (!encode_failure.empty()) {
                    error_rows(records, solver, ct, rate, encode_failure);
                    continue;
                }
                DecodeOptions options;
                options.solver = base_config.solver;
                options.solver.kind = solver;
                options.k_cap = base_config.k_cap;
                options.threads = base_config.threads;
                try {
                    const DecodeResult decoded = decode(stream, options);
                    const std::vector<FrameMetrics> metrics =
                        evaluate(video, decoded.video, decoded.base_upsampled);

                    for (std::size_t f = 0; f < metrics.size(); ++f) {
                        SweepRecord rec;
                        rec.frame_index = static_cast<int>(f);
                        rec.solver = solver;
                        rec.threshold = ct;
                        rec.rate = rate;
                        rec.psnr_db = metrics[f].psnr_db;
                        rec.psnr_infinite = metrics[f].psnr_infinite;
                        rec.baseline_psnr_db = metrics[f].psnr_baseline_db;
                        rec.baseline_infinite = metrics[f].baseline_infinite;
                        rec.mean_k = decoded.stats[f].mean_block_sparsity;
                        rec.super_bytes = acc.per_frame[f].super_bytes;
                        const int failed = decoded.stats[f].failed_blocks;
                        rec.status = failed == 0 ? "ok" : "failed:" + std::to_string(failed);
                        records.push_back(std::move(rec));
                    }
                } catch (const Error& e) {
                    error_rows(records, solver, ct, rate, e.what());
                }
            }
        }
    }
    return records;
}

namespace {

std::string format_g6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

}  // namespace

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
    out << "frame,solver,ct,rate,psnr_db,baseline_psnr_db,mean_k,super_bytes,status\n";
    for (const SweepRecord& rec : records) {
        out << rec.frame_index << ',' << solver_name(rec.solver) << ',' << rec.threshold << ','
            << format_g6(rec.rate) << ',' << format_g6(rec.psnr_db) << ','
            << format_g6(rec.baseline_psnr_db) << ',' << format_g6(rec.mean_k) << ','
            << rec.super_bytes << ',' << rec.status << '\n';
    }
}

}  // namespace cssr

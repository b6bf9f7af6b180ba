#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cssr {

inline constexpr std::size_t kHeaderBytes = 32;
inline constexpr char kMagic[4] = {'C', 'S', 'S', 'R'};
inline constexpr std::uint16_t kStreamVersion = 1;

// Fixed 32-byte little-endian header. Byte layout:
//   [0..4)   magic "CSSR"        [4..6)   version
//   [6..8)   width               [8..10)  height
//   [10..14) frame_count         [14]     scale factor m
//   [15..17) block size B        [17..19) measurement rows M
//   [19..21) block length N      [21..23) threshold CT
//   [23..31) stream seed         [31]     solver hint
struct StreamHeader {
    std::uint16_t version = kStreamVersion;
    std::uint16_t width = 0;
    std::uint16_t height = 0;
    std::uint32_t frame_count = 0;
    std::uint8_t scale = 1;        // m
    std::uint16_t block_size = 0;  // B
    std::uint16_t rows = 0;        // M
    std::uint16_t cols = 0;        // N == B * B
    std::uint16_t threshold = 0;   // CT
    std::uint64_t seed = 0;
    std::uint8_t solver_hint = 0;

    int base_width() const { return width / scale; }
    int base_height() const { return height / scale; }
    int blocks_x() const { return width / block_size; }
    int blocks_y() const { return height / block_size; }
    std::size_t blocks_per_frame() const {
        return static_cast<std::size_t>(blocks_x()) * blocks_y();
    }
    std::size_t base_bytes_per_frame() const {
        return static_cast<std::size_t>(base_width()) * base_height();
    }

    bool operator==(const StreamHeader&) const = default;
};

// One measured residual tile. skip == 1 means the thresholded block was all
// zero: k must be 0 and no measurement bytes follow on the wire.
struct BlockRecord {
    std::uint8_t skip = 0;
    std::uint16_t k = 0;
    std::vector<float> measurements;  // exactly M values when skip == 0

    bool operator==(const BlockRecord&) const = default;
};

struct FramePayload {
    std::vector<std::uint8_t> base;   // row-major base raster
    std::vector<BlockRecord> blocks;  // row-major block order

    bool operator==(const FramePayload&) const = default;
};

struct CompressedStream {
    StreamHeader header;
    std::vector<FramePayload> frames;

    bool operator==(const CompressedStream&) const = default;
};

// Checks every header invariant; throws CorruptHeaderError naming the field.
void validate_header(const StreamHeader& header);

void serialize(const CompressedStream& stream, std::ostream& sink);
std::vector<std::uint8_t> serialize_bytes(const CompressedStream& stream);
void serialize_file(const CompressedStream& stream, const std::string& path);

// Validates magic, version and all header invariants before touching payload.
CompressedStream deserialize(std::istream& source);
CompressedStream deserialize_bytes(const std::vector<std::uint8_t>& bytes);
CompressedStream deserialize_file(const std::string& path);

// Reads just the 32-byte header (validated); for inspection tools.
StreamHeader read_header(std::istream& source);

struct FrameAccounting {
    std::uint64_t measurement_count = 0;
    std::uint64_t super_bytes = 0;  // block record bytes, flags included
    std::uint64_t skipped_blocks = 0;
    double ratio = 0.0;  // measurements / residual samples of the frame
};

struct PayloadAccounting {
    std::uint64_t base_bytes = 0;
    std::uint64_t super_bytes = 0;
    std::uint64_t measurement_count = 0;
    std::uint64_t residual_samples = 0;
    std::uint64_t skipped_blocks = 0;
    double ratio_vs_full_residual = 0.0;  // total measurements / total residual samples
    std::vector<FrameAccounting> per_frame;
};

// Size accounting for the base and super layers. The ratio equals the header
// M/N exactly when no block is skipped, and 0 for an all-skip stream.
PayloadAccounting payload_accounting(const CompressedStream& stream);

}  // namespace cssr

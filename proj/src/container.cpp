#include "cssr/container.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

#include "cssr/errors.hpp"

namespace cssr {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
    static_assert(sizeof(float) == 4);
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

// Little-endian cursor over a byte buffer. Read failures report how many
// bytes the current item needed versus what was left.
class Cursor {
public:
    explicit Cursor(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    void require(std::size_t count, const std::string& what) const {
        if (remaining() < count) throw TruncationError(what, count, remaining());
    }

    std::uint8_t u8(const std::string& what) {
        require(1, what);
        return bytes_[pos_++];
    }

    std::uint16_t u16(const std::string& what) {
        require(2, what);
        const std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_]) |
                                static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8;
        pos_ += 2;
        return v;
    }

    std::uint32_t u32(const std::string& what) {
        require(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64(const std::string& what) {
        require(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

    float f32(const std::string& what) {
        const std::uint32_t bits = u32(what);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }

    void raw(std::uint8_t* dst, std::size_t count, const std::string& what) {
        require(count, what);
        std::memcpy(dst, bytes_.data() + pos_, count);
        pos_ += count;
    }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

void append_header(std::vector<std::uint8_t>& out, const StreamHeader& h) {
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, h.version);
    put_u16(out, h.width);
    put_u16(out, h.height);
    put_u32(out, h.frame_count);
    out.push_back(h.scale);
    put_u16(out, h.block_size);
    put_u16(out, h.rows);
    put_u16(out, h.cols);
    put_u16(out, h.threshold);
    put_u64(out, h.seed);
    out.push_back(h.solver_hint);
}

StreamHeader parse_header(Cursor& cur) {
    cur.require(kHeaderBytes, "stream header");
    std::uint8_t magic[4];
    cur.raw(magic, 4, "magic");
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("stream does not start with the CSSR magic");

    StreamHeader h;
    h.version = cur.u16("version");
    h.width = cur.u16("width");
    h.height = cur.u16("height");
    h.frame_count = cur.u32("frame_count");
    h.scale = cur.u8("scale");
    h.block_size = cur.u16("block_size");
    h.rows = cur.u16("rows");
    h.cols = cur.u16("cols");
    h.threshold = cur.u16("threshold");
    h.seed = cur.u64("seed");
    h.solver_hint = cur.u8("solver_hint");
    return h;
}

// Structural checks on an in-memory stream before it is written out.
void check_stream(const CompressedStream& stream) {
    const StreamHeader& h = stream.header;
    validate_header(h);
    if (stream.frames.size() != h.frame_count)
        throw ParameterError("stream holds " + std::to_string(stream.frames.size()) +
                             " frames but the header declares " + std::to_string(h.frame_count));
    for (std::size_t f = 0; f < stream.frames.size(); ++f) {
        const FramePayload& frame = stream.frames[f];
        const std::string where = "frame " + std::to_string(f);
        if (frame.base.size() != h.base_bytes_per_frame())
            throw ParameterError(where + " base raster holds " + std::to_string(frame.base.size()) +
                                 " bytes, expected " + std::to_string(h.base_bytes_per_frame()));
        if (frame.blocks.size() != h.blocks_per_frame())
            throw ParameterError(where + " holds " + std::to_string(frame.blocks.size()) +
                                 " block records, expected " +
                                 std::to_string(h.blocks_per_frame()));
        for (std::size_t b = 0; b < frame.blocks.size(); ++b) {
            const BlockRecord& rec = frame.blocks[b];
            const std::string tag = where + " block " + std::to_string(b);
            if (rec.skip > 1) throw ParameterError(tag + " skip flag must be 0 or 1");
            if (rec.skip == 1 && rec.k != 0)
                throw ParameterError(tag + " is skipped but declares sparsity " +
                                     std::to_string(rec.k));
            if (rec.skip == 1 && !rec.measurements.empty())
                throw ParameterError(tag + " is skipped but carries measurements");
            if (rec.skip == 0 && rec.measurements.size() != h.rows)
                throw ParameterError(tag + " carries " + std::to_string(rec.measurements.size()) +
                                     " measurements, expected " + std::to_string(h.rows));
            if (rec.k > h.cols)
                throw ParameterError(tag + " sparsity " + std::to_string(rec.k) +
                                     " exceeds block length " + std::to_string(h.cols));
        }
    }
}

}  // namespace

void validate_header(const StreamHeader& h) {
    if (h.version != kStreamVersion)
        throw CorruptHeaderError("version", "expected " + std::to_string(kStreamVersion) +
                                                ", got " + std::to_string(h.version));
    if (h.width == 0 || h.height == 0)
        throw CorruptHeaderError(h.width == 0 ? "width" : "height", "must be positive");
    if (h.scale == 0) throw CorruptHeaderError("scale", "must be >= 1");
    if (h.block_size == 0) throw CorruptHeaderError("block_size", "must be >= 1");

    const long tile = static_cast<long>(h.scale) * static_cast<long>(h.block_size);
    if (h.width % tile != 0)
        throw CorruptHeaderError("width", std::to_string(h.width) + " is not a multiple of scale*block_size = " +
                                              std::to_string(tile));
    if (h.height % tile != 0)
        throw CorruptHeaderError("height", std::to_string(h.height) +
                                               " is not a multiple of scale*block_size = " +
                                               std::to_string(tile));

    const long n = static_cast<long>(h.block_size) * static_cast<long>(h.block_size);
    if (n != static_cast<long>(h.cols))
        throw CorruptHeaderError("cols", "must equal block_size^2 = " + std::to_string(n) +
                                             ", got " + std::to_string(h.cols));
    if (h.rows == 0) throw CorruptHeaderError("rows", "must be >= 1");
    if (h.rows >= h.cols)
        throw CorruptHeaderError("rows", "measurement count " + std::to_string(h.rows) +
                                             " must be below block length " +
                                             std::to_string(h.cols));
    if (h.solver_hint > 2)
        throw CorruptHeaderError("solver_hint", "must be 0 (omp), 1 (cosamp) or 2 (bp)");
}

std::vector<std::uint8_t> serialize_bytes(const CompressedStream& stream) {
    check_stream(stream);
    const StreamHeader& h = stream.header;

    std::size_t size = kHeaderBytes;
    for (const FramePayload& frame : stream.frames) {
        size += frame.base.size();
        for (const BlockRecord& rec : frame.blocks) size += 3 + 4 * rec.measurements.size();
    }

    std::vector<std::uint8_t> out;
    out.reserve(size);
    append_header(out, h);
    for (const FramePayload& frame : stream.frames) {
        out.insert(out.end(), frame.base.begin(), frame.base.end());
        for (const BlockRecord& rec : frame.blocks) {
            out.push_back(rec.skip);
            put_u16(out, rec.k);
            for (const float v : rec.measurements) put_f32(out, v);
        }
    }
    return out;
}

void serialize(const CompressedStream& stream, std::ostream& sink) {
    const std::vector<std::uint8_t> bytes = serialize_bytes(stream);
    sink.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    if (!sink) throw IoError("write failure while emitting compressed stream");
}

void serialize_file(const CompressedStream& stream, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    serialize(stream, out);
}

CompressedStream deserialize_bytes(const std::vector<std::uint8_t>& bytes) {
    Cursor cur(bytes);
    CompressedStream stream;
    stream.header = parse_header(cur);
    validate_header(stream.header);  // every invariant holds before payload reads

    const StreamHeader& h = stream.header;
    stream.frames.reserve(h.frame_count);
    for (std::uint32_t f = 0; f < h.frame_count; ++f) {
        const std::string where = "frame " + std::to_string(f);
        FramePayload frame;
        frame.base.resize(h.base_bytes_per_frame());
        cur.raw(frame.base.data(), frame.base.size(), where + " base raster");

        frame.blocks.resize(h.blocks_per_frame());
        for (std::size_t b = 0; b < frame.blocks.size(); ++b) {
            const std::string tag = where + " block " + std::to_string(b);
            BlockRecord& rec = frame.blocks[b];
            rec.skip = cur.u8(tag + " skip flag");
            if (rec.skip > 1)
                throw FormatError(tag + " skip flag must be 0 or 1, got " +
                                  std::to_string(rec.skip));
            rec.k = cur.u16(tag + " sparsity");
            if (rec.skip == 1 && rec.k != 0)
                throw FormatError(tag + " is skipped but declares sparsity " +
                                  std::to_string(rec.k));
            if (rec.k > h.cols)
                throw FormatError(tag + " sparsity " + std::to_string(rec.k) +
                                  " exceeds block length " + std::to_string(h.cols));
            if (rec.skip == 0) {
                rec.measurements.resize(h.rows);
                cur.require(4 * static_cast<std::size_t>(h.rows), tag + " measurements");
                for (std::uint16_t i = 0; i < h.rows; ++i)
                    rec.measurements[i] = cur.f32(tag + " measurements");
            }
        }
        stream.frames.push_back(std::move(frame));
    }

    if (cur.remaining() != 0)
        throw TruncationError("stream continues past the declared final frame", cur.position(),
                              bytes.size());
    return stream;
}

CompressedStream deserialize(std::istream& source) {
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(source),
                                    std::istreambuf_iterator<char>()};
    return deserialize_bytes(bytes);
}

CompressedStream deserialize_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return deserialize(in);
}

StreamHeader read_header(std::istream& source) {
    std::vector<std::uint8_t> bytes(kHeaderBytes);
    source.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(kHeaderBytes));
    bytes.resize(static_cast<std::size_t>(source.gcount()));
    Cursor cur(bytes);
    StreamHeader h = parse_header(cur);
    validate_header(h);
    return h;
}

PayloadAccounting payload_accounting(const CompressedStream& stream) {
    const StreamHeader& h = stream.header;
    PayloadAccounting acc;
    acc.per_frame.reserve(stream.frames.size());
    const std::uint64_t samples_per_frame =
        static_cast<std::uint64_t>(h.width) * static_cast<std::uint64_t>(h.height);

    for (const FramePayload& frame : stream.frames) {
        FrameAccounting fa;
        for (const BlockRecord& rec : frame.blocks) {
            fa.super_bytes += 3 + 4 * static_cast<std::uint64_t>(rec.measurements.size());
            if (rec.skip == 1) {
                ++fa.skipped_blocks;
            } else {
                fa.measurement_count += rec.measurements.size();
            }
        }
        fa.ratio = samples_per_frame > 0
                       ? static_cast<double>(fa.measurement_count) / samples_per_frame
                       : 0.0;
        acc.base_bytes += frame.base.size();
        acc.super_bytes += fa.super_bytes;
        acc.measurement_count += fa.measurement_count;
        acc.residual_samples += samples_per_frame;
        acc.skipped_blocks += fa.skipped_blocks;
        acc.per_frame.push_back(fa);
    }
    acc.ratio_vs_full_residual =
        acc.residual_samples > 0 ? static_cast<double>(acc.measurement_count) / acc.residual_samples
                                 : 0.0;
    return acc;
}

}  // namespace cssr

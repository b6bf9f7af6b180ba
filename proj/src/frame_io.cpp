#include "cssr/frame_io.hpp"

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cssr/errors.hpp"

namespace cssr {

namespace {

// Reads up to count bytes; returns how many actually arrived.
std::size_t read_bytes(std::istream& in, std::uint8_t* dst, std::size_t count) {
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count));
    return static_cast<std::size_t>(in.gcount());
}

// Reads one '\n'-terminated line, consuming the terminator. Returns false on
// immediate end of stream. A line that hits EOF before its newline is an error.
bool read_line(std::istream& in, std::string& line, std::uint64_t& offset) {
    line.clear();
    int ch = in.get();
    if (ch == std::char_traits<char>::eof()) return false;
    while (ch != std::char_traits<char>::eof()) {
        ++offset;
        if (ch == '\n') return true;
        line.push_back(static_cast<char>(ch));
        if (line.size() > 4096) throw ParseError("header line exceeds 4096 bytes", offset);
        ch = in.get();
    }
    throw ParseError("stream ended inside a header line", offset);
}

long parse_decimal(const std::string& text, const char* what, std::uint64_t offset) {
    if (text.empty()) throw ParseError(std::string("empty ") + what, offset);
    long value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw ParseError(std::string("non-numeric ") + what, offset);
        value = value * 10 + (c - '0');
        if (value > 1000000000L) throw ParseError(std::string(what) + " out of range", offset);
    }
    return value;
}

struct StreamParams {
    int width = 0;
    int height = 0;
    FrameRate rate;
    ChromaFormat chroma = ChromaFormat::C420;
};

StreamParams parse_stream_header(const std::string& line, std::uint64_t offset) {
    std::istringstream tokens(line);
    std::string tok;
    tokens >> tok;
    if (tok != "YUV4MPEG2") throw ParseError("missing YUV4MPEG2 signature", 0);

    StreamParams p;
    bool have_w = false, have_h = false;
    while (tokens >> tok) {
        const std::string body = tok.substr(1);
        switch (tok[0]) {
            case 'W':
                p.width = static_cast<int>(parse_decimal(body, "width", offset));
                have_w = true;
                break;
            case 'H':
                p.height = static_cast<int>(parse_decimal(body, "height", offset));
                have_h = true;
                break;
            case 'F': {
                const auto colon = body.find(':');
                if (colon == std::string::npos)
                    throw ParseError("frame rate lacks ':' separator", offset);
                p.rate.num = static_cast<std::uint32_t>(
                    parse_decimal(body.substr(0, colon), "frame rate numerator", offset));
                p.rate.den = static_cast<std::uint32_t>(
                    parse_decimal(body.substr(colon + 1), "frame rate denominator", offset));
                if (p.rate.num == 0 || p.rate.den == 0)
                    throw ParseError("frame rate must be positive", offset);
                break;
            }
            case 'C':
                if (body == "420" || body == "420jpeg" || body == "420mpeg2" ||
                    body == "420paldv") {
                    p.chroma = ChromaFormat::C420;
                } else if (body == "mono" || body == "400") {
                    p.chroma = ChromaFormat::C400;
                } else {
                    throw ParseError("unsupported chroma tag C" + body, offset);
                }
                break;
            case 'I':
            case 'A':
            case 'X':
                break;  // interlace/aspect/extension tags carry nothing we need
            default:
                throw ParseError("unrecognized stream tag '" + tok + "'", offset);
        }
    }
    if (!have_w || !have_h) throw ParseError("stream header lacks W or H tag", offset);
    if (p.width <= 0 || p.height <= 0) throw ParseError("frame dimensions must be positive", offset);
    if (p.chroma == ChromaFormat::C420 && (p.width % 2 != 0 || p.height % 2 != 0))
        throw ParseError("4:2:0 streams need even dimensions", offset);
    return p;
}

std::size_t chroma_bytes(int width, int height, ChromaFormat format) {
    if (format == ChromaFormat::C400) return 0;
    return 2 * (static_cast<std::size_t>(width) / 2) * (static_cast<std::size_t>(height) / 2);
}

}  // namespace

VideoSequence load_y4m(std::istream& source) {
    std::uint64_t offset = 0;
    std::string line;
    if (!read_line(source, line, offset)) throw ParseError("empty stream", 0);
    const StreamParams params = parse_stream_header(line, offset);

    VideoSequence video;
    video.frame_rate = params.rate;
    const std::size_t luma_size =
        static_cast<std::size_t>(params.width) * static_cast<std::size_t>(params.height);
    const std::size_t skip_size = chroma_bytes(params.width, params.height, params.chroma);
    std::vector<std::uint8_t> skip(skip_size);

    std::size_t frame_index = 0;
    while (read_line(source, line, offset)) {
        if (line.rfind("FRAME", 0) != 0)
            throw ParseError("expected FRAME marker for frame " + std::to_string(frame_index),
                             offset - line.size() - 1);
        if (line.size() > 5 && line[5] != ' ')
            throw ParseError("malformed FRAME marker", offset - line.size() - 1);

        VideoFrame frame(params.width, params.height);
        const std::size_t got = read_bytes(source, frame.luma.data(), luma_size);
        offset += got;
        if (got != luma_size)
            throw TruncationError("frame " + std::to_string(frame_index) + " luma plane",
                                  luma_size, got);
        if (skip_size > 0) {
            const std::size_t got_c = read_bytes(source, skip.data(), skip_size);
            offset += got_c;
            if (got_c != skip_size)
                throw TruncationError("frame " + std::to_string(frame_index) + " chroma planes",
                                      skip_size, got_c);
        }
        video.frames.push_back(std::move(frame));
        ++frame_index;
    }
    if (video.frames.empty()) throw ParseError("stream holds no frames", offset);
    return video;
}

VideoSequence load_y4m_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return load_y4m(in);
}

VideoSequence load_raw_yuv(std::istream& source, int width, int height, ChromaFormat format) {
    if (width <= 0 || height <= 0) throw ParameterError("frame dimensions must be positive");
    if (format == ChromaFormat::C420 && (width % 2 != 0 || height % 2 != 0))
        throw ParameterError("4:2:0 raw input needs even dimensions");

    const std::size_t luma_size = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t skip_size = chroma_bytes(width, height, format);
    const std::size_t frame_size = luma_size + skip_size;
    std::vector<std::uint8_t> skip(skip_size);

    VideoSequence video;
    std::uint64_t consumed = 0;
    for (std::size_t frame_index = 0;; ++frame_index) {
        VideoFrame frame(width, height);
        const std::size_t got = read_bytes(source, frame.luma.data(), luma_size);
        if (got == 0) break;
        consumed += got;
        std::size_t got_c = 0;
        if (got == luma_size && skip_size > 0) {
            got_c = read_bytes(source, skip.data(), skip_size);
            consumed += got_c;
        }
        if (got != luma_size || (skip_size > 0 && got_c != skip_size)) {
            const std::uint64_t expected = (frame_index + 1) * static_cast<std::uint64_t>(frame_size);
            throw TruncationError("raw stream is not a whole number of frames", expected, consumed);
        }
        video.frames.push_back(std::move(frame));
    }
    if (video.frames.empty())
        throw TruncationError("raw stream holds no complete frame", frame_size, 0);
    return video;
}

VideoSequence load_raw_yuv_file(const std::string& path, int width, int height,
                                ChromaFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return load_raw_yuv(in, width, height, format);
}

void write_y4m(const VideoSequence& sequence, std::ostream& sink) {
    if (sequence.frames.empty()) throw ParameterError("refusing to write an empty sequence");
    for (const VideoFrame& frame : sequence.frames) {
        if (frame.width != sequence.width() || frame.height != sequence.height())
            throw DimensionError("all frames must share one geometry");
    }
    sink << "YUV4MPEG2 W" << sequence.width() << " H" << sequence.height() << " F"
         << sequence.frame_rate.num << ":" << sequence.frame_rate.den << " Ip A1:1 Cmono\n";
    for (const VideoFrame& frame : sequence.frames) {
        sink << "FRAME\n";
        sink.write(reinterpret_cast<const char*>(frame.luma.data()),
                   static_cast<std::streamsize>(frame.luma.size()));
    }
    if (!sink) throw IoError("write failure while emitting Y4M stream");
}

void write_y4m_file(const VideoSequence& sequence, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_y4m(sequence, out);
}

}  // namespace cssr

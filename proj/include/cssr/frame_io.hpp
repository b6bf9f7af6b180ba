#pragma once

#include <iosfwd>
#include <string>

#include "cssr/frame.hpp"

namespace cssr {

enum class ChromaFormat { C420, C400 };

// Reads a YUV4MPEG2 stream and returns the luma planes. 4:2:0 chroma is read
// and discarded; 4:0:0 carries no chroma. Throws ParseError (with byte offset)
// on malformed headers and TruncationError (naming the frame) on short frames.
VideoSequence load_y4m(std::istream& source);
VideoSequence load_y4m_file(const std::string& path);

// Headerless planar YUV, frame-major. The stream length must be an exact
// multiple of the per-frame byte count implied by (width, height, format).
VideoSequence load_raw_yuv(std::istream& source, int width, int height, ChromaFormat format);
VideoSequence load_raw_yuv_file(const std::string& path, int width, int height, ChromaFormat format);

// Emits a monochrome (4:0:0) Y4M stream. load_y4m(write_y4m(S)) reproduces S
// bit-exactly on luma, dimensions and frame rate.
void write_y4m(const VideoSequence& sequence, std::ostream& sink);
void write_y4m_file(const VideoSequence& sequence, const std::string& path);

}  // namespace cssr

#include "cssr/cs_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cssr/errors.hpp"
#include "cssr/rng.hpp"

namespace cssr {

SensingMatrix make_sensing_matrix(int rows, int cols, std::uint64_t seed) {
    if (rows <= 0) throw ParameterError("sensing matrix needs at least one row");
    if (rows >= cols)
        throw ParameterError("sensing matrix must be wide: rows " + std::to_string(rows) +
                             " >= cols " + std::to_string(cols));

    SensingMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.seed = seed;
    m.entries.resize(rows, cols);

    // Row-major fill from one stream; the 1/sqrt(M) scale gives every column
    // unit expected squared norm, which the recovery guarantees assume.
    GaussianStream gauss(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m.entries(r, c) = scale * gauss.next();
    return m;
}

std::pair<SparseBlockVector, ZeroForcingMask> zero_force(std::span<const std::int16_t> block,
                                                         int threshold) {
    if (threshold < 0) throw ParameterError("zero-forcing threshold must be >= 0");

    SparseBlockVector sparse;
    sparse.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(block.size()));
    ZeroForcingMask mask;
    mask.bits.assign(block.size(), 0);

    for (std::size_t i = 0; i < block.size(); ++i) {
        const int v = block[i];
        if (std::abs(v) >= threshold) {
            mask.bits[i] = 1;
            if (v != 0) {
                sparse.values(static_cast<Eigen::Index>(i)) = static_cast<double>(v);
                sparse.support.push_back(static_cast<int>(i));
            }
        }
    }
    sparse.k = static_cast<int>(sparse.support.size());
    return {std::move(sparse), std::move(mask)};
}

int estimate_sparsity(std::span<const std::int16_t> block, int threshold) {
    if (threshold < 0) throw ParameterError("zero-forcing threshold must be >= 0");
    int k = 0;
    for (const std::int16_t v : block)
        if (v != 0 && std::abs(v) >= threshold) ++k;
    return k;
}

BlockMeasurement measure(const SensingMatrix& matrix, const SparseBlockVector& sparse) {
    if (sparse.values.size() != matrix.cols)
        throw DimensionError("block length " + std::to_string(sparse.values.size()) +
                             " does not match sensing matrix cols " + std::to_string(matrix.cols));
    BlockMeasurement out;
    out.y = matrix.entries * sparse.values;
    out.k_hint = sparse.k;
    return out;
}

int suggest_measurements(int k, int n, double multiplier, int floor) {
    if (n < 2) throw ParameterError("block length must be >= 2");
    if (k < 0 || k > n) throw ParameterError("sparsity must lie in [0, n]");
    if (multiplier <= 0.0) throw ParameterError("measurement multiplier must be positive");
    if (floor < 1) throw ParameterError("measurement floor must be >= 1");

    const long suggested = std::lround(multiplier * static_cast<double>(k));
    long m = std::max(static_cast<long>(floor), suggested);
    m = std::clamp(m, 1L, static_cast<long>(n - 1));
    return static_cast<int>(m);
}

namespace {

void check_block_geometry(const ResidualFrame& frame, int block_row, int block_col,
                          int block_size) {
    if (block_size < 1) throw ParameterError("block size must be >= 1");
    if (frame.width % block_size != 0 || frame.height % block_size != 0)
        throw DimensionError("frame " + std::to_string(frame.width) + "x" +
                             std::to_string(frame.height) + " is not tiled by block size " +
                             std::to_string(block_size));
    const int bx = frame.width / block_size;
    const int by = frame.height / block_size;
    if (block_col < 0 || block_col >= bx || block_row < 0 || block_row >= by)
        throw IndexError("block (" + std::to_string(block_row) + "," + std::to_string(block_col) +
                         ") outside " + std::to_string(by) + "x" + std::to_string(bx) + " grid");
}

}  // namespace

std::vector<std::int16_t> vectorize_block(const ResidualFrame& frame, int block_row, int block_col,
                                          int block_size) {
    check_block_geometry(frame, block_row, block_col, block_size);
    const int x0 = block_col * block_size;
    const int y0 = block_row * block_size;
    std::vector<std::int16_t> out(static_cast<std::size_t>(block_size) * block_size);
    std::size_t i = 0;
    for (int c = 0; c < block_size; ++c)
        for (int r = 0; r < block_size; ++r) out[i++] = frame.at(x0 + c, y0 + r);
    return out;
}

void devectorize_block(std::span<const std::int16_t> values, ResidualFrame& frame, int block_row,
                       int block_col, int block_size) {
    check_block_geometry(frame, block_row, block_col, block_size);
    if (values.size() != static_cast<std::size_t>(block_size) * block_size)
        throw DimensionError("vector length " + std::to_string(values.size()) +
                             " does not match block area " +
                             std::to_string(block_size * block_size));
    const int x0 = block_col * block_size;
    const int y0 = block_row * block_size;
    std::size_t i = 0;
    for (int c = 0; c < block_size; ++c)
        for (int r = 0; r < block_size; ++r) frame.at(x0 + c, y0 + r) = values[i++];
}

}  // namespace cssr

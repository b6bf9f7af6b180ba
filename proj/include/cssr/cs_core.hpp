#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cssr/frame.hpp"

namespace cssr {

// Seeded M x N Gaussian measurement operator. Entries are a pure function of
// (seed, rows, cols): a SplitMix64/Box-Muller stream fills the matrix row by
// row, scaled by 1/sqrt(M) so columns have unit expected squared norm. The
// matrix is never transmitted; both codec ends regenerate it from the seed.
struct SensingMatrix {
    int rows = 0;
    int cols = 0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd entries;
};

// Requires 0 < rows < cols.
SensingMatrix make_sensing_matrix(int rows, int cols, std::uint64_t seed);

// bits[i] == 1 iff |input[i]| >= threshold; strictly-below values are zeroed.
struct ZeroForcingMask {
    std::vector<std::uint8_t> bits;

    bool operator==(const ZeroForcingMask&) const = default;
};

// A thresholded residual block: dense values plus the explicit support.
struct SparseBlockVector {
    Eigen::VectorXd values;    // length N, zero off support
    std::vector<int> support;  // strictly increasing positions of nonzeros
    int k = 0;                 // == support.size()
};

struct BlockMeasurement {
    Eigen::VectorXd y;  // length M
    int block_row = 0;
    int block_col = 0;
    int k_hint = 0;  // sparsity estimate used at encode time
};

// Zeroes every entry with |value| < threshold. The mask reflects the threshold
// test on the input; the support lists the nonzeros of the output (exact input
// zeros never enter the support). threshold must be >= 0.
std::pair<SparseBlockVector, ZeroForcingMask> zero_force(std::span<const std::int16_t> block,
                                                         int threshold);

// Nonzero count after zero-forcing with the given threshold.
int estimate_sparsity(std::span<const std::int16_t> block, int threshold);

// y = A * s. Requires s.values.size() == A.cols.
BlockMeasurement measure(const SensingMatrix& matrix, const SparseBlockVector& sparse);

// Measurement count for a block of sparsity k:
//   clamp(max(floor, round(multiplier * k)), 1, n - 1).
// The empirical rule of thumb puts multiplier at three to four times k.
int suggest_measurements(int k, int n, double multiplier = 4.0, int floor = 4);

// Column-major scan of the block_size x block_size tile at block grid position
// (block_row, block_col). devectorize_block is its exact inverse.
std::vector<std::int16_t> vectorize_block(const ResidualFrame& frame, int block_row, int block_col,
                                          int block_size);
void devectorize_block(std::span<const std::int16_t> values, ResidualFrame& frame, int block_row,
                       int block_col, int block_size);

}  // namespace cssr

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "cssr/cs_core.hpp"
#include "cssr/errors.hpp"
#include "cssr/rng.hpp"
#include "oracles.hpp"

using namespace cssr;

namespace {

std::vector<std::int16_t> random_block(std::uint64_t seed, std::size_t n) {
    SplitMix64 rng(seed);
    std::vector<std::int16_t> block(n);
    for (auto& v : block) v = static_cast<std::int16_t>(static_cast<int>(rng.next() % 511) - 255);
    return block;
}

std::vector<std::int16_t> to_i16(const Eigen::VectorXd& v) {
    std::vector<std::int16_t> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = static_cast<std::int16_t>(v(i));
    return out;
}

std::vector<std::vector<double>> to_rows(const SensingMatrix& a) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(a.rows),
                                          std::vector<double>(static_cast<std::size_t>(a.cols)));
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c)
            rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = a.entries(r, c);
    return rows;
}

bool bitwise_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("sensing matrices are seed-deterministic") {
    const SensingMatrix a = make_sensing_matrix(8, 32, 1);
    const SensingMatrix b = make_sensing_matrix(8, 32, 1);
    CHECK(bitwise_equal(a.entries, b.entries));
    const SensingMatrix c = make_sensing_matrix(8, 32, 2);
    CHECK_FALSE(bitwise_equal(a.entries, c.entries));
    CHECK(a.rows == 8);
    CHECK(a.cols == 32);
    CHECK(a.seed == 1);
}

TEST_CASE("shape validation and the 0.3 operating point") {
    CHECK_THROWS_AS(make_sensing_matrix(32, 32, 1), ParameterError);
    CHECK_THROWS_AS(make_sensing_matrix(33, 32, 1), ParameterError);
    CHECK_THROWS_AS(make_sensing_matrix(0, 32, 1), ParameterError);
    const SensingMatrix m = make_sensing_matrix(307, 1024, 1);
    CHECK(static_cast<double>(m.rows) / m.cols == doctest::Approx(0.2998).epsilon(1e-3));
}

TEST_CASE("entry statistics match N(0, 1/M) scaling") {
    const int rows = 64, cols = 256;
    const SensingMatrix a = make_sensing_matrix(rows, cols, 7);
    const double n = static_cast<double>(rows) * cols;
    const double mean = a.entries.sum() / n;
    CHECK(std::abs(mean) < 4e-3);  // sd of the sample mean ~ 1/sqrt(M*rows*cols) ~ 1e-3
    const double var = (a.entries.array() - mean).square().sum() / (n - 1);
    CHECK(var == doctest::Approx(1.0 / rows).epsilon(0.05));
    // expected squared column norm is 1
    double col_sq = 0.0;
    for (int c = 0; c < cols; ++c) col_sq += a.entries.col(c).squaredNorm();
    CHECK(col_sq / cols == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("zero_force pinned example at CT=15") {
    const std::vector<std::int16_t> block{3, 20, -7, 40, -16};
    const auto [sparse, mask] = zero_force(block, 15);
    REQUIRE(sparse.values.size() == 5);
    CHECK(sparse.values(0) == 0.0);
    CHECK(sparse.values(1) == 20.0);
    CHECK(sparse.values(2) == 0.0);
    CHECK(sparse.values(3) == 40.0);
    CHECK(sparse.values(4) == -16.0);
    CHECK(sparse.k == 3);
    CHECK(sparse.support == std::vector<int>{1, 3, 4});
    CHECK(mask.bits == std::vector<std::uint8_t>{0, 1, 0, 1, 1});
}

TEST_CASE("zero_force threshold extremes") {
    const std::vector<std::int16_t> block{0, -1, 1, 255, -255, 14, -15};
    const auto [at0, mask0] = zero_force(block, 0);
    for (std::size_t i = 0; i < block.size(); ++i)
        CHECK(at0.values(static_cast<Eigen::Index>(i)) == static_cast<double>(block[i]));
    CHECK(at0.k == 6);  // the exact zero never enters the support
    CHECK(at0.support == std::vector<int>{1, 2, 3, 4, 5, 6});
    CHECK(mask0.bits == std::vector<std::uint8_t>{1, 1, 1, 1, 1, 1, 1});

    const auto [at256, mask256] = zero_force(block, 256);
    CHECK(at256.k == 0);
    CHECK(at256.support.empty());
    CHECK(at256.values.cwiseAbs().maxCoeff() == 0.0);
    for (auto b : mask256.bits) CHECK(b == 0);
}

TEST_CASE("zero_force is idempotent and monotone in CT") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto block = random_block(seed, 128);
        int prev_k = static_cast<int>(block.size()) + 1;
        for (int ct : {0, 5, 15, 35, 75, 150, 256}) {
            const auto [sparse, mask] = zero_force(block, ct);
            const auto [again, mask_again] = zero_force(to_i16(sparse.values), ct);
            CHECK(bitwise_equal(again.values, sparse.values));
            CHECK(again.k == sparse.k);
            CHECK(again.support == sparse.support);
            CHECK(sparse.k <= prev_k);
            prev_k = sparse.k;
            // support lists exactly the nonzero survivors; mask covers them
            int nonzeros = 0;
            for (Eigen::Index i = 0; i < sparse.values.size(); ++i) {
                if (sparse.values(i) != 0.0) {
                    ++nonzeros;
                    CHECK(mask.bits[static_cast<std::size_t>(i)] == 1);
                    CHECK(std::abs(static_cast<int>(block[static_cast<std::size_t>(i)])) >= ct);
                }
            }
            CHECK(nonzeros == sparse.k);
            CHECK(static_cast<int>(sparse.support.size()) == sparse.k);
        }
    }
}

TEST_CASE("estimate_sparsity agrees with zero_force and a direct scan") {
    CHECK(estimate_sparsity(std::vector<std::int16_t>(64, 0), 15) == 0);
    CHECK(estimate_sparsity(std::vector<std::int16_t>{3, 20, -7, 40, -16}, 15) == 3);
    for (std::uint64_t seed = 11; seed <= 16; ++seed) {
        const auto block = random_block(seed, 256);
        for (int ct : {0, 15, 55}) {
            int direct = 0;
            for (auto v : block)
                if (v != 0 && std::abs(static_cast<int>(v)) >= ct) ++direct;
            CHECK(estimate_sparsity(block, ct) == direct);
            CHECK(estimate_sparsity(block, ct) == zero_force(block, ct).first.k);
        }
    }
}

TEST_CASE("measure: zero vector, unit vectors, oracle matvec") {
    const SensingMatrix a = make_sensing_matrix(16, 64, 5);

    SparseBlockVector zero;
    zero.values = Eigen::VectorXd::Zero(64);
    const BlockMeasurement y0 = measure(a, zero);
    REQUIRE(y0.y.size() == 16);
    CHECK(y0.y.norm() == 0.0);
    CHECK(y0.k_hint == 0);

    for (int i : {0, 17, 63}) {
        SparseBlockVector ei;
        ei.values = Eigen::VectorXd::Zero(64);
        ei.values(i) = 1.0;
        ei.support = {i};
        ei.k = 1;
        const BlockMeasurement y = measure(a, ei);
        for (int r = 0; r < 16; ++r) CHECK(y.y(r) == a.entries(r, i));
    }

    SparseBlockVector s3;
    s3.values = Eigen::VectorXd::Zero(64);
    s3.values(4) = 120.0;
    s3.values(20) = -77.0;
    s3.values(63) = 3.0;
    s3.support = {4, 20, 63};
    s3.k = 3;
    const BlockMeasurement y3 = measure(a, s3);
    CHECK(y3.k_hint == 3);
    std::vector<double> dense(64, 0.0);
    dense[4] = 120.0;
    dense[20] = -77.0;
    dense[63] = 3.0;
    const std::vector<double> ref = oracle::matvec(to_rows(a), dense);
    for (int r = 0; r < 16; ++r) CHECK(std::abs(y3.y(r) - ref[static_cast<std::size_t>(r)]) < 1e-12);

    SparseBlockVector wrong;
    wrong.values = Eigen::VectorXd::Zero(32);
    CHECK_THROWS_AS(measure(a, wrong), DimensionError);
}

TEST_CASE("measurement is linear") {
    const SensingMatrix a = make_sensing_matrix(12, 48, 9);
    const auto b1 = random_block(21, 48);
    const auto b2 = random_block(22, 48);
    SparseBlockVector s1, s2, sum;
    s1.values.resize(48);
    s2.values.resize(48);
    sum.values.resize(48);
    for (int i = 0; i < 48; ++i) {
        s1.values(i) = b1[static_cast<std::size_t>(i)];
        s2.values(i) = b2[static_cast<std::size_t>(i)];
        sum.values(i) = s1.values(i) + s2.values(i);
    }
    const auto y1 = measure(a, s1), y2 = measure(a, s2), ys = measure(a, sum);
    CHECK((ys.y - (y1.y + y2.y)).norm() < 1e-9);
}

TEST_CASE("suggest_measurements policy") {
    CHECK(suggest_measurements(8, 1024, 4.0, 4) == 32);
    CHECK(suggest_measurements(0, 1024, 4.0, 4) == 4);
    CHECK(suggest_measurements(1024, 1024, 4.0, 4) == 1023);
    CHECK(suggest_measurements(300, 1024, 4.0, 4) == 1023);  // clamped to N-1
    CHECK(suggest_measurements(0, 2, 4.0, 1) == 1);
    CHECK(suggest_measurements(8, 1024) == 32);  // defaults: multiplier 4, floor 4
    CHECK_THROWS_AS(suggest_measurements(8, 1, 4.0, 4), ParameterError);
    CHECK_THROWS_AS(suggest_measurements(9, 8, 4.0, 4), ParameterError);
    CHECK_THROWS_AS(suggest_measurements(-1, 8, 4.0, 4), ParameterError);
    CHECK_THROWS_AS(suggest_measurements(8, 1024, 0.0, 4), ParameterError);
    CHECK_THROWS_AS(suggest_measurements(8, 1024, 4.0, 0), ParameterError);
}

TEST_CASE("column-major block vectorization") {
    ResidualFrame frame(4, 2);
    frame.values = {1, 2, 5, 6,  //
                    3, 4, 7, 8};
    // block (0,0) holds the [[1,2],[3,4]] tile
    CHECK(vectorize_block(frame, 0, 0, 2) == std::vector<std::int16_t>{1, 3, 2, 4});
    CHECK(vectorize_block(frame, 0, 1, 2) == std::vector<std::int16_t>{5, 7, 6, 8});
    CHECK_THROWS_AS(vectorize_block(frame, 0, 2, 2), IndexError);
    CHECK_THROWS_AS(vectorize_block(frame, 1, 0, 2), IndexError);
    CHECK_THROWS_AS(vectorize_block(frame, -1, 0, 2), IndexError);
    CHECK_THROWS_AS(vectorize_block(frame, 0, 0, 3), DimensionError);
    CHECK_THROWS_AS(vectorize_block(frame, 0, 0, 0), ParameterError);
}

TEST_CASE("devectorize inverts vectorize over every block size") {
    for (std::uint64_t seed = 31; seed <= 34; ++seed) {
        ResidualFrame r(8, 8);
        r.values = random_block(seed, 64);
        for (int b : {2, 4, 8}) {
            ResidualFrame out(8, 8);
            for (int br = 0; br < 8 / b; ++br)
                for (int bc = 0; bc < 8 / b; ++bc)
                    devectorize_block(vectorize_block(r, br, bc, b), out, br, bc, b);
            CHECK(out.values == r.values);
        }
    }
}

TEST_CASE("whole-frame vectorization is the column-major scan of the frame") {
    ResidualFrame r(2, 2);
    r.values = {1, 2, 3, 4};
    CHECK(vectorize_block(r, 0, 0, 2) == std::vector<std::int16_t>{1, 3, 2, 4});
}

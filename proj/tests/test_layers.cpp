#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cssr/errors.hpp"
#include "cssr/layers.hpp"
#include "cssr/rng.hpp"
#include "oracles.hpp"

using namespace cssr;

namespace {

VideoFrame random_frame(std::uint64_t seed, int w, int h) {
    SplitMix64 rng(seed);
    VideoFrame f(w, h);
    for (auto& px : f.luma) px = static_cast<std::uint8_t>(rng.next() & 0xFF);
    return f;
}

}  // namespace

TEST_CASE("constant frames are fixed points of both resamplers") {
    const VideoFrame flat(8, 8, 77);
    const VideoFrame down = downsample(flat, ScaleFactor{2});
    CHECK(down.width == 4);
    CHECK(down.height == 4);
    for (auto px : down.luma) CHECK(px == 77);
    const VideoFrame up = upsample(down, ScaleFactor{2});
    CHECK(up == flat);
}

TEST_CASE("scale 1 is the identity") {
    const VideoFrame f = random_frame(3, 6, 4);
    CHECK(downsample(f, ScaleFactor{1}) == f);
    CHECK(upsample(f, ScaleFactor{1}) == f);
}

TEST_CASE("4x4 quadrant frame downsamples to the 2x2 of its block means") {
    VideoFrame f(4, 4);
    f.luma = {0, 0, 100, 100,  //
              0, 0, 100, 100,  //
              200, 200, 50, 50,  //
              200, 200, 50, 50};
    const VideoFrame down = downsample(f, ScaleFactor{2});
    REQUIRE(down.width == 2);
    REQUIRE(down.height == 2);
    CHECK(down.at(0, 0) == 0);
    CHECK(down.at(1, 0) == 100);
    CHECK(down.at(0, 1) == 200);
    CHECK(down.at(1, 1) == 50);
}

TEST_CASE("exact .5 cell means round up") {
    VideoFrame f(2, 2);
    f.luma = {10, 11, 11, 12};  // mean 11.0
    CHECK(downsample(f, ScaleFactor{2}).at(0, 0) == 11);
    f.luma = {10, 10, 11, 11};  // mean 10.5 rounds up
    CHECK(downsample(f, ScaleFactor{2}).at(0, 0) == 11);
}

TEST_CASE("downsample matches the scalar box-mean oracle") {
    for (int m : {2, 3, 4}) {
        const VideoFrame f = random_frame(40 + static_cast<std::uint64_t>(m), 12 * m, 6 * m);
        const VideoFrame down = downsample(f, ScaleFactor{m});
        for (int y = 0; y < down.height; ++y)
            for (int x = 0; x < down.width; ++x) CHECK(down.at(x, y) == oracle::box_mean(f, m, x, y));
    }
}

TEST_CASE("2x2 upsample of a pinned base matches the bilinear oracle") {
    VideoFrame base(2, 2);
    base.luma = {0, 100, 200, 50};
    const VideoFrame up = upsample(base, ScaleFactor{2});
    REQUIRE(up.width == 4);
    REQUIRE(up.height == 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) CHECK(up.at(x, y) == oracle::bilinear_at(base, 2, x, y));
    // corners replicate the base samples (edge clamp)
    CHECK(up.at(0, 0) == 0);
    CHECK(up.at(3, 0) == 100);
    CHECK(up.at(0, 3) == 200);
    CHECK(up.at(3, 3) == 50);
}

TEST_CASE("upsample matches the scalar bilinear oracle") {
    for (int m : {2, 3, 4}) {
        const VideoFrame base = random_frame(70 + static_cast<std::uint64_t>(m), 9, 5);
        const VideoFrame up = upsample(base, ScaleFactor{m});
        REQUIRE(up.width == 9 * m);
        REQUIRE(up.height == 5 * m);
        for (int y = 0; y < up.height; ++y)
            for (int x = 0; x < up.width; ++x) CHECK(up.at(x, y) == oracle::bilinear_at(base, m, x, y));
    }
}

TEST_CASE("residual extremes and dimension checks") {
    const VideoFrame a(4, 4, 255), b(4, 4, 0);
    const ResidualFrame r = compute_residual(a, b);
    for (auto v : r.values) CHECK(v == 255);
    const ResidualFrame r2 = compute_residual(b, a);
    for (auto v : r2.values) CHECK(v == -255);
    const ResidualFrame zero = compute_residual(a, a);
    for (auto v : zero.values) CHECK(v == 0);
    const VideoFrame c(8, 4, 0);
    CHECK_THROWS_AS(compute_residual(a, c), DimensionError);
}

TEST_CASE("super_resolve clamps and inverts") {
    VideoFrame base(2, 2, 200);
    ResidualFrame r(2, 2);
    r.values = {100, -300, 0, 55};
    const VideoFrame out = super_resolve(base, r);
    CHECK(out.at(0, 0) == 255);  // 300 clamps high
    CHECK(out.at(1, 0) == 0);    // -100 clamps low
    CHECK(out.at(0, 1) == 200);
    CHECK(out.at(1, 1) == 255);
    const ResidualFrame bad(4, 4);
    CHECK_THROWS_AS(super_resolve(base, bad), DimensionError);
}

TEST_CASE("base 200 with residual 100 clamps to 255 everywhere") {
    const VideoFrame base(4, 4, 200);
    const ResidualFrame r(4, 4, 100);
    const VideoFrame out = super_resolve(base, r);
    for (auto px : out.luma) CHECK(px == 255);
}

TEST_CASE("lossless identity: residual then super_resolve reproduces any frame") {
    for (int m : {2, 3, 4}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const int w = 4 * m, h = 3 * m;
            const VideoFrame original = random_frame(seed * 1000 + static_cast<std::uint64_t>(m), w, h);
            const ScaleFactor scale{m};
            const VideoFrame up = upsample(downsample(original, scale), scale);
            const ResidualFrame residual = compute_residual(original, up);
            for (auto v : residual.values) {
                CHECK(v >= -255);
                CHECK(v <= 255);
            }
            CHECK(super_resolve(up, residual) == original);
        }
    }
}

TEST_CASE("downsample of an upsampled constant returns the constant") {
    const VideoFrame flat(4, 4, 123);
    const VideoFrame up = upsample(flat, ScaleFactor{3});
    CHECK(downsample(up, ScaleFactor{3}) == flat);
}

TEST_CASE("geometry validation") {
    const VideoFrame f(5, 4, 0);
    CHECK_THROWS_AS(downsample(f, ScaleFactor{2}), DimensionError);
    CHECK_THROWS_AS(downsample(f, ScaleFactor{0}), ParameterError);
    CHECK_THROWS_AS(upsample(f, ScaleFactor{0}), ParameterError);
}

#include <gtest/gtest.h>

#include <cstdint>
#include <set>

#include "robmean/random.hpp"

using namespace robmean;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswers) {
    EXPECT_EQ(Philox4x32::apply({0, 0, 0, 0}, {0, 0}),
              (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(Philox4x32::apply({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Stream, DeterministicPerSeedAndStream) {
    Stream a = substream(42, 3);
    Stream b = substream(42, 3);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Stream, DistinctStreamsAndSeedsDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t s = 0; s < 4; ++s)
        for (std::uint64_t id = 0; id < 64; ++id) firsts.insert(substream(s, id)());
    EXPECT_EQ(firsts.size(), 4u * 64u);
}

TEST(Stream, WordsComeFromTheCounterBlock) {
    Stream s(0x0123456789abcdefULL, 5);
    const auto block = Philox4x32::apply({0, 0, 5, 0}, {0x89abcdefu, 0x01234567u});
    EXPECT_EQ(s(), std::uint64_t{block[0]} | (std::uint64_t{block[1]} << 32));
    EXPECT_EQ(s(), std::uint64_t{block[2]} | (std::uint64_t{block[3]} << 32));
    EXPECT_EQ(s.seed(), 0x0123456789abcdefULL);
}

TEST(Uniform, RangeAndMean) {
    Stream s(1);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = uniform01(s);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    // sd of the mean is sqrt(1/12 / n) ~ 6.5e-4
    EXPECT_NEAR(sum / n, 0.5, 4 * 6.5e-4);
}

TEST(Normal, FirstTwoMoments) {
    Stream s(2);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = standard_normal(s);
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 4 / std::sqrt(double(n)));
    EXPECT_NEAR(sq / n, 1.0, 4 * std::sqrt(2.0 / n));
}

#include "shockflow/error.hpp"
#include "shockflow/synth.hpp"
#include "shockflow/te.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace shockflow;

namespace {

const double kLog2Of3 = std::log2(3.0);

DiscreteSeries named(DiscreteSeries s, std::string name)
{
    s.name = std::move(name);
    return s;
}

DiscreteSeries from(std::vector<std::uint8_t> symbols, std::string name = "s")
{
    DiscreteSeries s;
    s.name = std::move(name);
    s.symbols = std::move(symbols);
    return s;
}

DiscreteSeries relabel(const DiscreteSeries& s, const std::array<std::uint8_t, 3>& perm)
{
    auto out = s;
    for (auto& c : out.symbols) c = perm[c - 1];
    return out;
}

} // namespace

TEST(JointHistogram, CountsSumToSamples)
{
    const auto x = synth::iid_series(500, 1);
    const auto y = synth::iid_series(500, 2);
    for (int k = 1; k <= 6; ++k) {
        const auto h = joint_histogram(x, y, k);
        EXPECT_EQ(h.n_samples, 500u - static_cast<std::size_t>(k));
        std::size_t total = 0;
        for (const auto& c : h.cells) {
            total += c.count;
            EXPECT_GE(c.next, 1);
            EXPECT_LE(c.next, 3);
            EXPECT_GE(c.source, 1);
            EXPECT_LE(c.source, 3);
        }
        EXPECT_EQ(total, h.n_samples);
    }
}

TEST(TransferEntropy, MatchesCellEnumerationOracle)
{
    synth::SplitMix64 rng(12345);
    for (int trial = 0; trial < 300; ++trial) {
        const auto len = 8 + static_cast<std::size_t>(rng.below(193));
        const auto x = synth::iid_series(len, rng.next());
        auto y = synth::coupled_markov({0.6, len, rng.next()}).target;  // some dependence, some noise
        if (trial % 2) y = synth::iid_series(len, rng.next());
        for (int k = 1; k <= 5; ++k) {
            if (len <= static_cast<std::size_t>(k)) continue;
            const double ours = transfer_entropy(x, y, k).value_bits;
            const double ref = std::max(0.0, oracle::transfer_entropy(x.symbols, y.symbols, k));
            EXPECT_NEAR(ours, ref, 1e-12) << "trial " << trial << " k " << k;
        }
    }
}

TEST(TransferEntropy, CopyProcessRecoversLog3)
{
    const auto pair = synth::coupled_markov({1.0, 100000, 8});
    const auto r = transfer_entropy(pair.source, pair.target, 1);
    EXPECT_NEAR(r.value_bits, kLog2Of3, 0.02);
    EXPECT_EQ(r.n_samples, 99999u);
    EXPECT_EQ(r.k, 1);
    EXPECT_FALSE(r.undersampled);
}

TEST(TransferEntropy, IndependentSeriesStayUnderFloor)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r = transfer_entropy(synth::iid_series(100000, 2 * seed), synth::iid_series(100000, 2 * seed + 1), 1);
        EXPECT_LT(r.value_bits, kBiasFloorBits);
    }
}

TEST(TransferEntropy, SelfDrivenTargetCarriesNothing)
{
    // y cycles 1 -> 2 -> 3 -> 1; its own past fixes the next symbol.
    std::vector<std::uint8_t> y(1000);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<std::uint8_t>(i % 3 + 1);
    const auto x = synth::iid_series(1000, 4);
    EXPECT_NEAR(transfer_entropy(x, from(y), 1).value_bits, 0.0, 1e-12);
    EXPECT_NEAR(transfer_entropy(x, from(y), 3).value_bits, 0.0, 1e-12);
}

TEST(TransferEntropy, BoundsAndDeterminism)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto pair = synth::coupled_markov({static_cast<double>(seed % 5) / 4.0, 400, seed});
        for (int k = 1; k <= 4; ++k) {
            const double v = transfer_entropy(pair.source, pair.target, k).value_bits;
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, kLog2Of3 + 1e-12);
            EXPECT_EQ(v, transfer_entropy(pair.source, pair.target, k).value_bits);
        }
    }
}

TEST(TransferEntropy, RelabelingInvariance)
{
    const std::array<std::array<std::uint8_t, 3>, 3> perms{{{2, 3, 1}, {3, 1, 2}, {1, 3, 2}}};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto pair = synth::coupled_markov({0.4, 3000, seed});
        for (int k = 1; k <= 3; ++k) {
            const double base = transfer_entropy(pair.source, pair.target, k).value_bits;
            for (const auto& p : perms) {
                EXPECT_NEAR(transfer_entropy(relabel(pair.source, p), pair.target, k).value_bits, base, 1e-12);
                EXPECT_NEAR(transfer_entropy(pair.source, relabel(pair.target, p), k).value_bits, base, 1e-12);
            }
        }
    }
}

TEST(TransferEntropy, Errors)
{
    const auto a = synth::iid_series(10, 1);
    const auto b = synth::iid_series(11, 2);
    EXPECT_THROW(transfer_entropy(a, b, 1), InputError);
    try {
        transfer_entropy(a, a, 10);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("insufficient samples"), std::string::npos);
    }
    EXPECT_NO_THROW(transfer_entropy(a, a, 9));
    EXPECT_THROW(transfer_entropy(a, a, 0), ConfigError);
    EXPECT_THROW(transfer_entropy(synth::iid_series(100, 1), synth::iid_series(100, 2), kMaxHistory + 1),
                 ConfigError);
    EXPECT_THROW(transfer_entropy(from({1, 2, 4}), from({1, 2, 3}), 1), InputError);
}

TEST(TransferEntropy, UndersampledAnnotation)
{
    EXPECT_TRUE(is_undersampled(269, 1));
    EXPECT_FALSE(is_undersampled(270, 1));
    EXPECT_TRUE(is_undersampled(100000, 7));   // 10 * 3^9 = 196830
    EXPECT_FALSE(is_undersampled(196830, 7));
}

TEST(TotalTransferEntropy, AntisymmetryAndSelfNull)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto pair = synth::coupled_markov({0.3, 600, seed});
        for (int k = 1; k <= 5; ++k) {
            const auto xy = total_transfer_entropy(pair.source, pair.target, k);
            const auto yx = total_transfer_entropy(pair.target, pair.source, k);
            EXPECT_EQ(xy.value_bits, -yx.value_bits);
            EXPECT_EQ(total_transfer_entropy(pair.source, pair.source, k).value_bits, 0.0);
        }
    }
}

TEST(TotalTransferEntropy, CopyProcessForwardDominates)
{
    const auto pair = synth::coupled_markov({1.0, 100000, 21});
    const auto r = total_transfer_entropy(named(pair.source, "x"), named(pair.target, "y"), 1);
    EXPECT_NEAR(r.value_bits, kLog2Of3, 0.05);
    EXPECT_EQ(r.source, "x");
    EXPECT_EQ(r.target, "y");
}

TEST(KSweep, SingleElementRange)
{
    const auto pair = synth::coupled_markov({0.5, 2000, 3});
    const auto s = k_sweep(pair.source, pair.target, 1, 1, SweepMode::te);
    ASSERT_EQ(s.results.size(), 1u);
    EXPECT_EQ(s.argmax_k, 1);
    EXPECT_EQ(s.max_bits, s.results[0].value_bits);
}

TEST(KSweep, OrderedAndThreadCountIndependent)
{
    const auto pair = synth::coupled_markov({0.5, 20000, 5});
    const auto one = k_sweep(pair.source, pair.target, 1, 12, SweepMode::tte, {1, kBiasFloorBits});
    const auto many = k_sweep(pair.source, pair.target, 1, 12, SweepMode::tte, {5, kBiasFloorBits});
    ASSERT_EQ(one.results.size(), 12u);
    for (std::size_t i = 0; i < one.results.size(); ++i) {
        EXPECT_EQ(one.results[i].k, static_cast<int>(i) + 1);
        EXPECT_EQ(one.results[i].value_bits, many.results[i].value_bits);
        EXPECT_EQ(one.results[i].value_bits,
                  total_transfer_entropy(pair.source, pair.target, static_cast<int>(i) + 1).value_bits);
    }
    EXPECT_EQ(one.argmax_k, many.argmax_k);
}

TEST(KSweep, CopyProcessPeaksEarlyThenDilutes)
{
    const auto pair = synth::coupled_markov({1.0, 50000, 6});
    const auto s = k_sweep(pair.source, pair.target, 1, 8, SweepMode::te);
    EXPECT_EQ(s.argmax_k, 1);
    EXPECT_FALSE(s.below_floor);
    EXPECT_GT(s.results.front().value_bits, s.results.back().value_bits);
}

TEST(KSweep, TiesGoToSmallestK)
{
    // Identical series: every TTE is exactly zero.
    const auto x = synth::iid_series(3000, 9);
    const auto s = k_sweep(x, x, 2, 6, SweepMode::tte);
    EXPECT_EQ(s.argmax_k, 2);
    EXPECT_EQ(s.max_bits, 0.0);
    EXPECT_TRUE(s.below_floor);
}

TEST(KSweep, IndependentFlaggedBelowFloor)
{
    const auto s = k_sweep(synth::iid_series(100000, 1), synth::iid_series(100000, 2), 1, 3, SweepMode::te);
    EXPECT_TRUE(s.below_floor);
    EXPECT_TRUE(s.degenerate());
    EXPECT_FALSE(s.constant_source);
}

TEST(KSweep, ConstantSourceFlagged)
{
    const auto s = k_sweep(from(std::vector<std::uint8_t>(500, 2)), synth::iid_series(500, 3), 1, 3, SweepMode::te);
    EXPECT_TRUE(s.constant_source);
    EXPECT_TRUE(s.degenerate());
    for (const auto& r : s.results) EXPECT_EQ(r.value_bits, 0.0);
}

TEST(KSweep, BadRange)
{
    const auto x = synth::iid_series(100, 1);
    EXPECT_THROW(k_sweep(x, x, 0, 3, SweepMode::te), ConfigError);
    EXPECT_THROW(k_sweep(x, x, 4, 3, SweepMode::te), ConfigError);
    EXPECT_THROW(k_sweep(x, x, 1, 100, SweepMode::te), std::exception);
}

TEST(Segment, PaperSplit)
{
    std::pair<DiscreteSeries, DiscreteSeries> pair{synth::iid_series(90, 1), synth::iid_series(90, 2)};
    const auto seg = segment(pair, 33);
    EXPECT_EQ(seg.before.first.size(), 33u);
    EXPECT_EQ(seg.before.second.size(), 33u);
    EXPECT_EQ(seg.after.first.size(), 57u);
    EXPECT_EQ(seg.after.second.size(), 57u);
}

TEST(Segment, MinimalCutAndPartition)
{
    std::pair<DiscreteSeries, DiscreteSeries> pair{synth::iid_series(40, 1), synth::iid_series(40, 2)};
    EXPECT_EQ(segment(pair, 1).before.first.size(), 1u);
    for (std::size_t b = 1; b < 40; ++b) {
        const auto seg = segment(pair, b);
        auto first = seg.before.first.symbols;
        first.insert(first.end(), seg.after.first.symbols.begin(), seg.after.first.symbols.end());
        auto second = seg.before.second.symbols;
        second.insert(second.end(), seg.after.second.symbols.begin(), seg.after.second.symbols.end());
        EXPECT_EQ(first, pair.first.symbols);
        EXPECT_EQ(second, pair.second.symbols);
    }
}

TEST(Segment, TimeSeriesKeepsOrigin)
{
    TimeSeries a;
    a.origin = 100;
    a.bin_width_s = 60;
    a.values.assign(10, 1.0);
    a.counts.assign(10, 1);
    const auto seg = segment(std::pair{a, a}, 4);
    EXPECT_EQ(seg.after.first.origin, 100 + 4 * 60);
    EXPECT_EQ(seg.after.first.size(), 6u);
}

TEST(Segment, OutOfRange)
{
    std::pair<DiscreteSeries, DiscreteSeries> pair{synth::iid_series(10, 1), synth::iid_series(10, 2)};
    EXPECT_THROW(segment(pair, 0), ConfigError);
    EXPECT_THROW(segment(pair, 10), ConfigError);
}

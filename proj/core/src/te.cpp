#include "shockflow/te.hpp"

#include "shockflow/error.hpp"
#include "shockflow/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace shockflow {

namespace {

std::uint64_t pow3(int e)
{
    std::uint64_t p = 1;
    for (int i = 0; i < e; ++i) p *= 3;
    return p;
}

void check_symbols(const DiscreteSeries& s)
{
    for (auto v : s.symbols) {
        if (v < 1 || v > 3) throw InputError("te", "symbol outside {1,2,3} in '" + s.name + "'");
    }
}

void check_inputs(const DiscreteSeries& source, const DiscreteSeries& target, int k)
{
    if (k < 1 || k > kMaxHistory) throw ConfigError("history length k must be in [1, 40]");
    if (source.size() != target.size()) {
        throw InputError("te", "series length mismatch (" + std::to_string(source.size()) + " vs " +
                                   std::to_string(target.size()) + ")");
    }
    if (target.size() <= static_cast<std::size_t>(k)) throw InputError("te", "insufficient samples");
}

} // namespace

JointHistogram joint_histogram(const DiscreteSeries& source, const DiscreteSeries& target, int k)
{
    check_inputs(source, target, k);
    check_symbols(source);
    check_symbols(target);

    const auto& x = source.symbols;
    const auto& y = target.symbols;
    const std::size_t len = y.size();
    const std::uint64_t modulus = pow3(k - 1);  // weight of the oldest history symbol

    struct Key {
        std::uint64_t history;
        std::uint8_t next_source;  // (next-1)*3 + (source-1)
    };
    std::vector<Key> keys;
    keys.reserve(len - static_cast<std::size_t>(k));

    std::uint64_t h = 0;
    for (int j = 0; j < k - 1; ++j) h = h * 3 + (y[static_cast<std::size_t>(j)] - 1u);
    for (std::size_t i = static_cast<std::size_t>(k) - 1; i + 1 < len; ++i) {
        h = h * 3 + (y[i] - 1u);
        keys.push_back({h, static_cast<std::uint8_t>((y[i + 1] - 1) * 3 + (x[i] - 1))});
        h %= modulus;  // drop the oldest symbol before the next shift
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        return a.history != b.history ? a.history < b.history : a.next_source < b.next_source;
    });

    JointHistogram hist;
    hist.k = k;
    hist.n_samples = keys.size();
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j].history == keys[i].history && keys[j].next_source == keys[i].next_source) ++j;
        hist.cells.push_back({keys[i].history, static_cast<std::uint8_t>(keys[i].next_source / 3 + 1),
                              static_cast<std::uint8_t>(keys[i].next_source % 3 + 1), j - i});
        i = j;
    }
    return hist;
}

double transfer_entropy_bits(const JointHistogram& histogram)
{
    const auto& cells = histogram.cells;
    const double n = static_cast<double>(histogram.n_samples);
    double total = 0.0;
    for (std::size_t i = 0; i < cells.size();) {
        std::size_t j = i;
        std::array<std::array<std::size_t, 3>, 3> joint{};
        std::array<std::size_t, 3> by_next{};
        std::array<std::size_t, 3> by_source{};
        std::size_t in_history = 0;
        for (; j < cells.size() && cells[j].history == cells[i].history; ++j) {
            const auto& c = cells[j];
            joint[c.next - 1][c.source - 1] += c.count;
            by_next[c.next - 1] += c.count;
            by_source[c.source - 1] += c.count;
            in_history += c.count;
        }
        double group = 0.0;
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) {
                const std::size_t c = joint[a][b];
                if (c == 0) continue;
                const double ratio = (static_cast<double>(c) * static_cast<double>(in_history)) /
                                     (static_cast<double>(by_next[a]) * static_cast<double>(by_source[b]));
                group += static_cast<double>(c) * std::log2(ratio);
            }
        }
        total += group;
        i = j;
    }
    return std::max(0.0, total / n);
}

bool is_undersampled(std::size_t n_samples, int k)
{
    // 10 * 3^(k+2) exceeds any realistic sample count long before it overflows.
    if (k + 2 > 38) return true;
    return n_samples < 10 * pow3(k + 2);
}

TEResult transfer_entropy(const DiscreteSeries& source, const DiscreteSeries& target, int k)
{
    const auto hist = joint_histogram(source, target, k);
    TEResult r;
    r.value_bits = transfer_entropy_bits(hist);
    r.k = k;
    r.n_samples = hist.n_samples;
    r.source = source.name;
    r.target = target.name;
    r.undersampled = is_undersampled(hist.n_samples, k);
    return r;
}

TEResult total_transfer_entropy(const DiscreteSeries& x, const DiscreteSeries& y, int k)
{
    const auto forward = transfer_entropy(x, y, k);
    const auto backward = transfer_entropy(y, x, k);
    TEResult r = forward;
    r.value_bits = forward.value_bits - backward.value_bits;
    return r;
}

std::optional<SweepMode> parse_sweep_mode(std::string_view token)
{
    if (token == "te") return SweepMode::te;
    if (token == "tte") return SweepMode::tte;
    return std::nullopt;
}

std::string_view to_string(SweepMode mode)
{
    return mode == SweepMode::te ? "te" : "tte";
}

SweepResult k_sweep(const DiscreteSeries& source, const DiscreteSeries& target, int k_min, int k_max, SweepMode mode,
                    const SweepOptions& options)
{
    if (k_min < 1 || k_max < k_min) throw ConfigError("k range must satisfy 1 <= k_min <= k_max");
    check_inputs(source, target, k_max);

    const auto count = static_cast<std::size_t>(k_max - k_min + 1);
    SweepResult out;
    out.mode = mode;
    out.source = source.name;
    out.target = target.name;
    out.results = parallel_map(
        count,
        [&](std::size_t i) {
            const int k = k_min + static_cast<int>(i);
            return mode == SweepMode::te ? transfer_entropy(source, target, k)
                                         : total_transfer_entropy(source, target, k);
        },
        options.threads);

    out.argmax_k = out.results.front().k;
    out.max_bits = out.results.front().value_bits;
    for (const auto& r : out.results) {
        if (r.value_bits > out.max_bits) {
            out.max_bits = r.value_bits;
            out.argmax_k = r.k;
        }
    }
    out.below_floor = out.max_bits < options.floor_bits;
    out.constant_source = std::all_of(source.symbols.begin(), source.symbols.end(),
                                      [&](std::uint8_t s) { return s == source.symbols.front(); });
    return out;
}

TimeSeries slice(const TimeSeries& series, std::size_t begin, std::size_t end)
{
    if (!series.uniform()) throw InputError("te", "cannot segment a nonuniform series");
    if (begin > end || end > series.size()) throw ConfigError("slice out of range");
    TimeSeries out;
    out.name = series.name;
    out.origin = series.bin_start(begin);
    out.bin_width_s = series.bin_width_s;
    out.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(begin),
                      series.values.begin() + static_cast<std::ptrdiff_t>(end));
    out.counts.assign(series.counts.begin() + static_cast<std::ptrdiff_t>(begin),
                      series.counts.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

DiscreteSeries slice(const DiscreteSeries& series, std::size_t begin, std::size_t end)
{
    if (begin > end || end > series.size()) throw ConfigError("slice out of range");
    DiscreteSeries out;
    out.name = series.name;
    out.source_bin_width_s = series.source_bin_width_s;
    out.symbols.assign(series.symbols.begin() + static_cast<std::ptrdiff_t>(begin),
                       series.symbols.begin() + static_cast<std::ptrdiff_t>(end));
    return out;
}

template <typename Series>
SegmentedPair<Series> segment(const std::pair<Series, Series>& pair, std::size_t boundary_bin)
{
    const std::size_t len = pair.first.size();
    if (pair.second.size() != len) throw InputError("te", "segment needs equal-length series");
    if (boundary_bin < 1 || boundary_bin >= len) {
        throw ConfigError("segment boundary " + std::to_string(boundary_bin) + " outside [1, " +
                          std::to_string(len) + ")");
    }
    SegmentedPair<Series> out;
    out.before = {slice(pair.first, 0, boundary_bin), slice(pair.second, 0, boundary_bin)};
    out.after = {slice(pair.first, boundary_bin, len), slice(pair.second, boundary_bin, len)};
    return out;
}

template SegmentedPair<TimeSeries> segment(const std::pair<TimeSeries, TimeSeries>&, std::size_t);
template SegmentedPair<DiscreteSeries> segment(const std::pair<DiscreteSeries, DiscreteSeries>&, std::size_t);

} // namespace shockflow

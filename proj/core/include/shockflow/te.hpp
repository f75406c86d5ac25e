#pragma once

#include "shockflow/series.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shockflow {

inline constexpr int kMaxHistory = 40;  // 3^40 target histories still fit a 64-bit code
inline constexpr double kBiasFloorBits = 0.01;

// Counts of (target history, target next, source current) over the L - k usable samples.
// History codes are base-3 with the oldest symbol most significant; cells are sorted by
// (history, next, source) and only nonzero cells are stored.
struct JointHistogram {
    struct Cell {
        std::uint64_t history = 0;
        std::uint8_t next = 0;
        std::uint8_t source = 0;
        std::size_t count = 0;
    };

    int k = 1;
    std::size_t n_samples = 0;
    std::vector<Cell> cells;
};

JointHistogram joint_histogram(const DiscreteSeries& source, const DiscreteSeries& target, int k);

// Plug-in conditional mutual information I(next; source | history) in bits.
double transfer_entropy_bits(const JointHistogram& histogram);

struct TEResult {
    double value_bits = 0.0;
    int k = 1;
    std::size_t n_samples = 0;
    std::string source;
    std::string target;
    bool undersampled = false;
};

// True when n_samples < 10 * 3^(k+2).
bool is_undersampled(std::size_t n_samples, int k);

// T_{source -> target}: how much source[i] reduces uncertainty about target[i+1] beyond target's
// own last k symbols.
TEResult transfer_entropy(const DiscreteSeries& source, const DiscreteSeries& target, int k);

// T_{x -> y} - T_{y -> x}, reported with direction (x, y).
TEResult total_transfer_entropy(const DiscreteSeries& x, const DiscreteSeries& y, int k);

enum class SweepMode { te, tte };

std::optional<SweepMode> parse_sweep_mode(std::string_view token);
std::string_view to_string(SweepMode mode);

struct SweepOptions {
    unsigned threads = 0;  // 0: hardware concurrency
    double floor_bits = kBiasFloorBits;
};

struct SweepResult {
    SweepMode mode = SweepMode::te;
    std::string source;
    std::string target;
    std::vector<TEResult> results;  // ordered by k
    int argmax_k = 0;               // ties go to the smallest k
    double max_bits = 0.0;
    bool below_floor = false;       // max_bits < floor: argmax is not meaningful
    bool constant_source = false;   // source is a single repeated symbol

    bool degenerate() const { return below_floor || constant_source; }
};

SweepResult k_sweep(const DiscreteSeries& source, const DiscreteSeries& target, int k_min, int k_max, SweepMode mode,
                    const SweepOptions& options = {});

TimeSeries slice(const TimeSeries& series, std::size_t begin, std::size_t end);
DiscreteSeries slice(const DiscreteSeries& series, std::size_t begin, std::size_t end);

template <typename Series>
struct SegmentedPair {
    std::pair<Series, Series> before;  // bins [0, boundary)
    std::pair<Series, Series> after;   // bins [boundary, end)
};

// Cuts both members of an equal-length pair at the same bin. Requires 1 <= boundary < length.
template <typename Series>
SegmentedPair<Series> segment(const std::pair<Series, Series>& pair, std::size_t boundary_bin);

extern template SegmentedPair<TimeSeries> segment(const std::pair<TimeSeries, TimeSeries>&, std::size_t);
extern template SegmentedPair<DiscreteSeries> segment(const std::pair<DiscreteSeries, DiscreteSeries>&, std::size_t);

} // namespace shockflow

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shockflow {

// What an empty bin carries. `drop` removes the bin, which makes the series nonuniform.
enum class FillPolicy { zero, hold_last, drop };

std::optional<FillPolicy> parse_fill_policy(std::string_view token);
std::string_view to_string(FillPolicy policy);

// Uniform binning of epoch seconds: bin i covers [origin + i*width, origin + (i+1)*width).
struct BinGrid {
    std::int64_t origin = 0;
    std::int64_t bin_width_s = 1;
    std::size_t n_bins = 0;

    // Smallest grid starting at first_t that contains last_t.
    static BinGrid covering(std::int64_t first_t, std::int64_t last_t, std::int64_t bin_width_s);
    // Half-open window [start, end).
    static BinGrid window(std::int64_t start, std::int64_t end, std::int64_t bin_width_s);

    std::optional<std::size_t> index_of(std::int64_t t) const;
    std::int64_t bin_start(std::size_t i) const {
        return origin + static_cast<std::int64_t>(i) * bin_width_s;
    }
    bool operator==(const BinGrid&) const = default;
};

struct TimeSeries {
    std::string name;
    std::int64_t origin = 0;
    std::int64_t bin_width_s = 1;
    std::vector<double> values;
    std::vector<std::size_t> counts;   // observations per bin; 0 marks a filled bin
    bool dropped = false;              // empty bins removed; see kept_bins
    std::vector<std::size_t> kept_bins;

    std::size_t size() const { return values.size(); }
    bool uniform() const { return !dropped; }
    std::int64_t bin_start(std::size_t i) const;
};

struct DiscreteSeries {
    std::string name;
    std::int64_t source_bin_width_s = 1;
    std::vector<std::uint8_t> symbols;  // alphabet {1, 2, 3}

    std::size_t size() const { return symbols.size(); }
};

struct Observation {
    std::int64_t t = 0;
    double value = 0.0;
};

// Mean of the observations falling in each grid bin; observations outside the grid are ignored.
// hold_last fills leading empty bins with 0.
TimeSeries bin_mean(std::span<const Observation> observations, const BinGrid& grid, FillPolicy fill,
                    std::string name = {});

} // namespace shockflow

#include "shockflow/series.hpp"

#include "shockflow/error.hpp"

#include <stdexcept>

namespace shockflow {

std::optional<FillPolicy> parse_fill_policy(std::string_view token)
{
    if (token == "zero") return FillPolicy::zero;
    if (token == "hold_last") return FillPolicy::hold_last;
    if (token == "drop") return FillPolicy::drop;
    return std::nullopt;
}

std::string_view to_string(FillPolicy policy)
{
    switch (policy) {
    case FillPolicy::zero: return "zero";
    case FillPolicy::hold_last: return "hold_last";
    case FillPolicy::drop: return "drop";
    }
    return "?";
}

BinGrid BinGrid::covering(std::int64_t first_t, std::int64_t last_t, std::int64_t bin_width_s)
{
    if (bin_width_s < 1) throw ConfigError("bin width must be >= 1");
    if (last_t < first_t) throw ConfigError("grid end precedes grid start");
    const std::int64_t span = last_t - first_t + 1;
    return BinGrid{first_t, bin_width_s, static_cast<std::size_t>((span + bin_width_s - 1) / bin_width_s)};
}

BinGrid BinGrid::window(std::int64_t start, std::int64_t end, std::int64_t bin_width_s)
{
    if (bin_width_s < 1) throw ConfigError("bin width must be >= 1");
    if (end <= start) throw ConfigError("window end must be after window start");
    const std::int64_t span = end - start;
    return BinGrid{start, bin_width_s, static_cast<std::size_t>((span + bin_width_s - 1) / bin_width_s)};
}

std::optional<std::size_t> BinGrid::index_of(std::int64_t t) const
{
    if (t < origin) return std::nullopt;
    const auto i = static_cast<std::size_t>((t - origin) / bin_width_s);
    if (i >= n_bins) return std::nullopt;
    return i;
}

std::int64_t TimeSeries::bin_start(std::size_t i) const
{
    const std::size_t bin = dropped ? kept_bins.at(i) : i;
    return origin + static_cast<std::int64_t>(bin) * bin_width_s;
}

TimeSeries bin_mean(std::span<const Observation> observations, const BinGrid& grid, FillPolicy fill,
                    std::string name)
{
    if (grid.bin_width_s < 1) throw ConfigError("bin width must be >= 1");

    std::vector<double> sums(grid.n_bins, 0.0);
    std::vector<std::size_t> counts(grid.n_bins, 0);
    for (const auto& obs : observations) {
        if (auto i = grid.index_of(obs.t)) {
            sums[*i] += obs.value;
            ++counts[*i];
        }
    }

    TimeSeries out;
    out.name = std::move(name);
    out.origin = grid.origin;
    out.bin_width_s = grid.bin_width_s;

    double held = 0.0;
    for (std::size_t i = 0; i < grid.n_bins; ++i) {
        if (counts[i] > 0) {
            held = sums[i] / static_cast<double>(counts[i]);
            out.values.push_back(held);
            out.counts.push_back(counts[i]);
            if (fill == FillPolicy::drop) out.kept_bins.push_back(i);
            continue;
        }
        switch (fill) {
        case FillPolicy::zero:
            out.values.push_back(0.0);
            out.counts.push_back(0);
            break;
        case FillPolicy::hold_last:
            out.values.push_back(held);
            out.counts.push_back(0);
            break;
        case FillPolicy::drop:
            break;
        }
    }
    out.dropped = fill == FillPolicy::drop;
    return out;
}

} // namespace shockflow

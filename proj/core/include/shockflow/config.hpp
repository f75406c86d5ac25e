#pragma once

#include "shockflow/cascade.hpp"
#include "shockflow/events.hpp"
#include "shockflow/series.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shockflow {

enum class OutputFormat { csv, json };

std::optional<OutputFormat> parse_output_format(std::string_view token);
std::string_view to_string(OutputFormat format);

struct KRange {
    int min = 1;
    int max = 1;
    bool operator==(const KRange&) const = default;
};

// Flat key=value text; '#' starts a comment line. Later duplicates override earlier ones.
std::map<std::string, std::string> parse_config_text(std::string_view text);

struct PipelineConfig {
    std::filesystem::path tweets;
    std::filesystem::path transcript;
    std::optional<std::int64_t> window_start;   // unset: first tweet
    std::optional<std::int64_t> window_end;     // unset: one past the last tweet
    std::optional<std::int64_t> kickoff;        // epoch second of game time 0; unset: window start
    std::int64_t dynamics_bin_s = 1;
    std::int64_t sentiment_bin_s = 60;
    KRange dynamics_k{1, 35};
    KRange sentiment_k{1, 10};
    std::size_t boundary_bin = 33;
    std::vector<std::string> languages{"en", "es", "de"};
    FillPolicy metric_fill = FillPolicy::hold_last;
    FillPolicy sentiment_fill = FillPolicy::hold_last;
    double epsilon = 0.0;
    OrphanPolicy orphan_policy = OrphanPolicy::drop;
    double floor_bits = 0.01;
    unsigned threads = 0;
    EventRuleSet rules = EventRuleSet::defaults();
    std::filesystem::path out_dir = "out";
    OutputFormat format = OutputFormat::csv;

    // Throws ConfigError on unknown keys, unparsable values or settings that fail validate().
    static PipelineConfig from_entries(const std::map<std::string, std::string>& entries);
    void apply(const std::map<std::string, std::string>& entries);

    // Every setting that affects results, spelled out. `threads` and `output.dir` are not included.
    std::map<std::string, std::string> resolved() const;
    void validate() const;
};

std::string format_config(const std::map<std::string, std::string>& entries);

} // namespace shockflow

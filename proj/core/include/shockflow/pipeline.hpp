#pragma once

#include "shockflow/cascade.hpp"
#include "shockflow/config.hpp"
#include "shockflow/events.hpp"
#include "shockflow/te.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace shockflow {

// Everything derived from the inputs before any entropy is estimated.
struct PreparedData {
    PipelineConfig config;             // with window and kickoff resolved
    std::string tweets_sha256;
    std::string transcript_sha256;
    std::size_t tweets_outside_window = 0;
    ForestReport forest_report;
    std::vector<CascadeTree> forest;
    Transcript transcript;

    BinGrid dynamics_grid;
    BinGrid sentiment_grid;
    EventScoreSeries events;           // on the dynamics grid
    std::vector<MetricSeries> metrics; // volume, virality, responsiveness
    TimeSeries followers;
    std::optional<TimeSeries> transcript_sentiment;
    std::vector<std::pair<std::string, std::optional<TimeSeries>>> tweet_sentiment;  // "all", then languages
};

PreparedData prepare(const PipelineConfig& config);

struct DynamicsResults {
    std::vector<SweepResult> sweeps;  // metric-major: 3 metrics x {team_a, team_b, combined, followers}
};

struct SentimentCell {
    std::string language;  // "all" or a language code
    std::string segment;   // full, before, after
    std::optional<SweepResult> sweep;
    std::string status;    // ok, empty
};

struct SentimentResults {
    std::vector<SentimentCell> cells;  // (languages + 1) x 3
};

DynamicsResults run_dynamics_analysis(const PreparedData& data);
DynamicsResults run_dynamics_analysis(const PipelineConfig& config);
SentimentResults run_sentiment_analysis(const PreparedData& data);
SentimentResults run_sentiment_analysis(const PipelineConfig& config);

// Throws InputError if dir cannot be created or written.
void ensure_writable_dir(const std::filesystem::path& dir);

// Writes every plot-data file, result table and manifest.json below outdir.
void emit_plot_data(const PreparedData& data, const DynamicsResults* dynamics, const SentimentResults* sentiment,
                    const std::filesystem::path& outdir, OutputFormat format);

struct RunAllResult {
    PreparedData data;
    DynamicsResults dynamics;
    SentimentResults sentiment;
};

RunAllResult run_all(const PipelineConfig& config);

std::string sweep_table(const SweepResult& sweep, OutputFormat format);

} // namespace shockflow

#include "shockflow/pipeline.hpp"

#include "shockflow/discretize.hpp"
#include "shockflow/error.hpp"
#include "shockflow/io.hpp"
#include "shockflow/parallel.hpp"
#include "shockflow/sentiment.hpp"
#include "shockflow/series_io.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>
#endif

#include <algorithm>
#include <array>
#include <sstream>

namespace shockflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<Metric, 3> kMetrics = {Metric::volume, Metric::virality, Metric::responsiveness};
constexpr std::array<std::string_view, 3> kSegments = {"full", "before", "after"};

} // namespace

PreparedData prepare(const PipelineConfig& config)
{
    config.validate();
    PreparedData d;
    d.config = config;

    const std::string tweet_bytes = io::read_file(config.tweets);
    const std::string transcript_bytes = io::read_file(config.transcript);
    d.tweets_sha256 = io::sha256_hex(tweet_bytes);
    d.transcript_sha256 = io::sha256_hex(transcript_bytes);

    std::istringstream tweet_stream(tweet_bytes);
    auto table = read_tweets(tweet_stream);
    if (table.records.empty()) throw InputError("cascade", "no tweets in '" + config.tweets.string() + "'");

    if (!d.config.window_start || !d.config.window_end) {
        std::int64_t first = table.records.front().created_at;
        std::int64_t last = first;
        for (const auto& r : table.records) {
            first = std::min(first, r.created_at);
            last = std::max(last, r.created_at);
        }
        if (!d.config.window_start) d.config.window_start = first;
        if (!d.config.window_end) d.config.window_end = last + 1;
    }
    if (!d.config.kickoff) d.config.kickoff = d.config.window_start;
    d.config.validate();
    const std::int64_t start = *d.config.window_start;
    const std::int64_t end = *d.config.window_end;

    std::vector<TweetRecord> records;
    records.reserve(table.records.size());
    for (auto& r : table.records) {
        if (r.created_at < start || r.created_at >= end) {
            ++d.tweets_outside_window;
        } else {
            records.push_back(std::move(r));
        }
    }
    if (records.empty()) throw InputError("cascade", "no tweets inside the window");

    auto forest = build_forest(records, d.config.orphan_policy);
    d.forest = std::move(forest.trees);
    d.forest_report = forest.report;
    if (d.forest.empty()) throw InputError("cascade", "no cascades");

    d.transcript = parse_transcript(transcript_bytes);

    d.dynamics_grid = BinGrid::window(start, end, d.config.dynamics_bin_s);
    d.sentiment_grid = BinGrid::window(start, end, d.config.sentiment_bin_s);
    const std::int64_t kickoff = *d.config.kickoff;

    d.events = score_events(d.transcript.events, d.config.rules, d.dynamics_grid, kickoff);
    for (auto metric : kMetrics) {
        d.metrics.push_back(metric_series(d.forest, metric, d.dynamics_grid, d.config.metric_fill));
    }
    d.followers = follower_series(d.forest, d.dynamics_grid, d.config.metric_fill);

    const bool any_polarity = std::any_of(d.transcript.events.begin(), d.transcript.events.end(),
                                          [](const TranscriptEvent& e) { return e.polarity.has_value(); });
    if (any_polarity) {
        d.transcript_sentiment =
            transcript_sentiment_series(d.transcript.events, d.sentiment_grid, kickoff, d.config.sentiment_fill);
    }

    auto tweet_series = [&](const std::optional<std::string>& lang) -> std::optional<TimeSeries> {
        if (lang && std::none_of(records.begin(), records.end(),
                                 [&](const TweetRecord& r) { return r.language == *lang; })) {
            return std::nullopt;
        }
        return sentiment_series(records, d.sentiment_grid, lang, d.config.sentiment_fill);
    };
    d.tweet_sentiment.emplace_back("all", tweet_series(std::nullopt));
    for (const auto& lang : d.config.languages) d.tweet_sentiment.emplace_back(lang, tweet_series(lang));
    return d;
}

DynamicsResults run_dynamics_analysis(const PreparedData& data)
{
    const double eps = data.config.epsilon;
    std::vector<DiscreteSeries> sources{
        derivative_sign_encode(data.events.team_a, eps),
        derivative_sign_encode(data.events.team_b, eps),
        derivative_sign_encode(data.events.combined, eps),
        derivative_sign_encode(data.followers, eps),
    };
    std::vector<DiscreteSeries> targets;
    for (const auto& m : data.metrics) targets.push_back(derivative_sign_encode(m.series, eps));

    const auto& k = data.config.dynamics_k;
    SweepOptions options{1, data.config.floor_bits};
    DynamicsResults out;
    out.sweeps = parallel_map(
        targets.size() * sources.size(),
        [&](std::size_t cell) {
            return k_sweep(sources[cell % sources.size()], targets[cell / sources.size()], k.min, k.max,
                           SweepMode::te, options);
        },
        data.config.threads);
    return out;
}

DynamicsResults run_dynamics_analysis(const PipelineConfig& config)
{
    return run_dynamics_analysis(prepare(config));
}

SentimentResults run_sentiment_analysis(const PreparedData& data)
{
    if (!data.transcript_sentiment) throw InputError("sentiment", "no polarity");
    const double eps = data.config.epsilon;
    const auto& k = data.config.sentiment_k;
    SweepOptions options{1, data.config.floor_bits};

    struct Task {
        std::size_t cell;
        DiscreteSeries source;
        DiscreteSeries target;
    };
    std::vector<Task> tasks;
    SentimentResults out;
    for (const auto& [language, tweets] : data.tweet_sentiment) {
        if (!tweets) {
            for (auto seg : kSegments) out.cells.push_back({language, std::string(seg), std::nullopt, "empty"});
            continue;
        }
        std::pair<TimeSeries, TimeSeries> full{*data.transcript_sentiment, *tweets};
        const auto parts = segment(full, data.config.boundary_bin);
        const std::array<const std::pair<TimeSeries, TimeSeries>*, 3> pairs = {&full, &parts.before, &parts.after};
        for (std::size_t s = 0; s < kSegments.size(); ++s) {
            tasks.push_back({out.cells.size(), derivative_sign_encode(pairs[s]->first, eps),
                             derivative_sign_encode(pairs[s]->second, eps)});
            out.cells.push_back({language, std::string(kSegments[s]), std::nullopt, "ok"});
        }
    }
    auto sweeps = parallel_map(
        tasks.size(),
        [&](std::size_t i) {
            return k_sweep(tasks[i].source, tasks[i].target, k.min, k.max, SweepMode::tte, options);
        },
        data.config.threads);
    for (std::size_t i = 0; i < tasks.size(); ++i) out.cells[tasks[i].cell].sweep = std::move(sweeps[i]);
    return out;
}

SentimentResults run_sentiment_analysis(const PipelineConfig& config)
{
    return run_sentiment_analysis(prepare(config));
}

void ensure_writable_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InputError("cli", "cannot create output directory '" + dir.string() + "'");
    const auto probe = dir / ".write_probe";
    io::write_file(probe, "");
    fs::remove(probe, ec);
}

namespace {

json sweep_json(const SweepResult& s)
{
    json rows = json::array();
    for (const auto& r : s.results) {
        rows.push_back({{"k", r.k}, {"value_bits", r.value_bits}, {"n_samples", r.n_samples},
                        {"undersampled", r.undersampled}});
    }
    return {{"mode", std::string(to_string(s.mode))},
            {"source", s.source},
            {"target", s.target},
            {"argmax_k", s.argmax_k},
            {"max_bits", s.max_bits},
            {"below_floor", s.below_floor},
            {"constant_source", s.constant_source},
            {"results", rows}};
}

std::string series_file(const std::vector<const TimeSeries*>& columns)
{
    std::ostringstream out;
    write_series_csv(out, columns);
    return out.str();
}

class OutputWriter {
public:
    explicit OutputWriter(fs::path root) : root_(std::move(root)) {}

    void write(const std::string& relative, const std::string& contents)
    {
        const auto path = root_ / relative;
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        io::write_file(path, contents);
        files_[relative] = io::sha256_hex(contents);
    }

    void table(const std::string& file, std::string source, std::string target, std::string mode, KRange k)
    {
        tables_.push_back({{"file", file}, {"source", std::move(source)}, {"target", std::move(target)},
                           {"mode", std::move(mode)}, {"k_min", k.min}, {"k_max", k.max}});
    }

    const std::map<std::string, std::string>& files() const { return files_; }
    const json& tables() const { return tables_; }

private:
    fs::path root_;
    std::map<std::string, std::string> files_;
    json tables_ = json::array();
};

} // namespace

std::string sweep_table(const SweepResult& sweep, OutputFormat format)
{
    if (format == OutputFormat::json) return sweep_json(sweep).dump(2) + "\n";
    std::ostringstream out;
    out << "k,value_bits,n_samples,undersampled\n";
    for (const auto& r : sweep.results) {
        out << r.k << ',' << io::format_double(r.value_bits) << ',' << r.n_samples << ',' << (r.undersampled ? 1 : 0)
            << '\n';
    }
    return out.str();
}

void emit_plot_data(const PreparedData& data, const DynamicsResults* dynamics, const SentimentResults* sentiment,
                    const fs::path& outdir, OutputFormat format)
{
    ensure_writable_dir(outdir);
    OutputWriter w(outdir);
    const std::string ext = format == OutputFormat::json ? ".json" : ".csv";

    w.write("events.csv", series_file({&data.events.team_a, &data.events.team_b, &data.events.combined}));
    for (const auto& m : data.metrics) {
        w.write("metric_" + std::string(to_string(m.metric)) + ".csv", series_file({&m.series}));
    }
    w.write("followers.csv", series_file({&data.followers}));
    if (data.transcript_sentiment) w.write("sentiment_transcript.csv", series_file({&*data.transcript_sentiment}));
    for (const auto& [language, series] : data.tweet_sentiment) {
        if (series) w.write("sentiment_" + language + ".csv", series_file({&*series}));
    }

    if (dynamics) {
        json summary = json::array();
        std::ostringstream summary_csv;
        summary_csv << "metric,source,argmax_k,max_te_bits,below_floor,constant_source\n";
        const std::size_t per_metric = dynamics->sweeps.size() / kMetrics.size();
        for (std::size_t m = 0; m < kMetrics.size(); ++m) {
            const std::string metric(to_string(kMetrics[m]));
            std::ostringstream curves;
            curves << 'k';
            for (std::size_t s = 0; s < per_metric; ++s) curves << ',' << dynamics->sweeps[m * per_metric + s].source;
            curves << '\n';
            const auto& first = dynamics->sweeps[m * per_metric];
            for (std::size_t row = 0; row < first.results.size(); ++row) {
                curves << first.results[row].k;
                for (std::size_t s = 0; s < per_metric; ++s) {
                    curves << ',' << io::format_double(dynamics->sweeps[m * per_metric + s].results[row].value_bits);
                }
                curves << '\n';
            }
            w.write("te_curves_" + metric + ".csv", curves.str());

            for (std::size_t s = 0; s < per_metric; ++s) {
                const auto& sw = dynamics->sweeps[m * per_metric + s];
                const std::string file = "sweeps/dynamics__" + metric + "__" + sw.source + ext;
                w.write(file, sweep_table(sw, format));
                w.table(file, sw.source, sw.target, "te", data.config.dynamics_k);
                summary_csv << metric << ',' << sw.source << ',' << sw.argmax_k << ','
                            << io::format_double(sw.max_bits) << ',' << (sw.below_floor ? 1 : 0) << ','
                            << (sw.constant_source ? 1 : 0) << '\n';
                summary.push_back({{"metric", metric}, {"source", sw.source}, {"argmax_k", sw.argmax_k},
                                   {"max_te_bits", sw.max_bits}, {"below_floor", sw.below_floor},
                                   {"constant_source", sw.constant_source}});
            }
        }
        w.write("dynamics_summary" + ext,
                format == OutputFormat::json ? summary.dump(2) + "\n" : summary_csv.str());
    }

    if (sentiment) {
        std::ostringstream curves;
        curves << "language,segment,k,tte_bits,n_samples,undersampled\n";
        std::ostringstream grid_csv;
        grid_csv << "language,segment,status,argmax_k,max_tte_bits,n_samples,below_floor\n";
        json grid = json::array();
        for (const auto& cell : sentiment->cells) {
            if (!cell.sweep) {
                grid_csv << cell.language << ',' << cell.segment << ',' << cell.status << ",,,,\n";
                grid.push_back({{"language", cell.language}, {"segment", cell.segment}, {"status", cell.status}});
                continue;
            }
            const auto& sw = *cell.sweep;
            for (const auto& r : sw.results) {
                curves << cell.language << ',' << cell.segment << ',' << r.k << ',' << io::format_double(r.value_bits)
                       << ',' << r.n_samples << ',' << (r.undersampled ? 1 : 0) << '\n';
            }
            const auto& best = *std::find_if(sw.results.begin(), sw.results.end(),
                                             [&](const TEResult& r) { return r.k == sw.argmax_k; });
            grid_csv << cell.language << ',' << cell.segment << ',' << cell.status << ',' << sw.argmax_k << ','
                     << io::format_double(sw.max_bits) << ',' << best.n_samples << ',' << (sw.below_floor ? 1 : 0)
                     << '\n';
            grid.push_back({{"language", cell.language}, {"segment", cell.segment}, {"status", cell.status},
                            {"argmax_k", sw.argmax_k}, {"max_tte_bits", sw.max_bits},
                            {"n_samples", best.n_samples}, {"below_floor", sw.below_floor}});
            const std::string file = "sweeps/sentiment__" + cell.language + "__" + cell.segment + ext;
            w.write(file, sweep_table(sw, format));
            w.table(file, "transcript[" + cell.segment + "]", "sentiment_" + cell.language + "[" + cell.segment + "]",
                    "tte", data.config.sentiment_k);
        }
        w.write("tte_curves.csv", curves.str());
        w.write("tte_grid" + ext, format == OutputFormat::json ? grid.dump(2) + "\n" : grid_csv.str());
    }

    json manifest;
    manifest["format"] = "shockflow-run-1";
    manifest["inputs"] = {
        {"tweets", {{"path", data.config.tweets.string()}, {"sha256", data.tweets_sha256}}},
        {"transcript", {{"path", data.config.transcript.string()}, {"sha256", data.transcript_sha256}}},
    };
    manifest["config"] = data.config.resolved();
    const auto& fr = data.forest_report;
    manifest["forest"] = {{"records", fr.records},   {"roots", fr.roots},   {"orphans", fr.orphans},
                          {"edge_rejections", fr.edge_rejections},     {"promoted", fr.promoted},
                          {"dropped", fr.dropped},   {"cycles", fr.cycles}, {"trees", fr.trees},
                          {"placed", fr.placed},     {"outside_window", data.tweets_outside_window}};
    manifest["transcript"] = {{"events", data.transcript.events.size()},
                              {"rejected_lines", data.transcript.rejected.size()},
                              {"unknown_kinds", data.transcript.unknown_kinds},
                              {"events_outside_window", data.events.outside_grid}};
    manifest["tables"] = w.tables();
    manifest["files"] = w.files();
    io::write_file(outdir / "resolved_config.txt", format_config(data.config.resolved()));
    io::write_file(outdir / "manifest.json", manifest.dump(2) + "\n");
}

RunAllResult run_all(const PipelineConfig& config)
{
    ensure_writable_dir(config.out_dir);
    RunAllResult r;
    r.data = prepare(config);
    r.dynamics = run_dynamics_analysis(r.data);
    r.sentiment = run_sentiment_analysis(r.data);
    emit_plot_data(r.data, &r.dynamics, &r.sentiment, config.out_dir, config.format);
    return r;
}

} // namespace shockflow

// shockflow: conversation cascades, exogenous event scores and transfer entropy between them.
//
// Exit codes: 0 success, 1 input error, 2 config error, 3 internal error.

#include "shockflow/config.hpp"
#include "shockflow/discretize.hpp"
#include "shockflow/error.hpp"
#include "shockflow/io.hpp"
#include "shockflow/pipeline.hpp"
#include "shockflow/series_io.hpp"
#include "shockflow/synth.hpp"
#include "shockflow/te.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace shockflow;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out;
    std::string format;  // empty: output.format from the config, else csv
    std::uint64_t seed = 0;
    std::vector<std::string> overrides;  // key=value
    std::string tweets;
    std::string transcript;
};

OutputFormat output_format(const GlobalOptions& g)
{
    if (g.format.empty()) return OutputFormat::csv;
    const auto f = parse_output_format(g.format);
    if (!f) throw ConfigError("--format expects csv or json");
    return *f;
}

PipelineConfig load_config(const GlobalOptions& g)
{
    std::map<std::string, std::string> entries;
    if (!g.config_path.empty()) entries = parse_config_text(io::read_file(g.config_path));
    for (const auto& kv : g.overrides) {
        const auto parsed = parse_config_text(kv);
        if (parsed.empty()) throw ConfigError("--set expects key=value, got '" + kv + "'");
        for (const auto& [k, v] : parsed) entries[k] = v;
    }
    if (!g.tweets.empty()) entries["input.tweets"] = g.tweets;
    if (!g.transcript.empty()) entries["input.transcript"] = g.transcript;
    if (!g.out.empty()) entries["output.dir"] = g.out;
    if (!g.format.empty()) entries["output.format"] = g.format;
    auto config = PipelineConfig::from_entries(entries);
    if (config.tweets.empty()) throw ConfigError("input.tweets is required");
    if (config.transcript.empty()) throw ConfigError("input.transcript is required");
    return config;
}

// Loads one series column; value columns are derivative-sign encoded, symbol columns are used as-is.
struct LoadedSeries {
    std::optional<TimeSeries> values;
    DiscreteSeries symbols;
};

LoadedSeries load_series(const std::string& path, const std::string& column, const std::string& preferred,
                         double epsilon)
{
    const auto table = read_series_table(fs::path(path));
    std::size_t index = 0;
    if (!column.empty()) {
        index = table.column_index(column);
    } else {
        for (std::size_t i = 1; i < table.columns.size(); ++i) {
            if (table.columns[i] == preferred) index = i - 1;
        }
    }
    LoadedSeries out;
    if (table.symbolic()) {
        out.symbols = table.discrete_series(index);
    } else {
        out.values = table.time_series(index);
        out.symbols = derivative_sign_encode(*out.values, epsilon);
    }
    return out;
}

void print_dynamics(std::ostream& os, const DynamicsResults& r, OutputFormat format)
{
    if (format == OutputFormat::json) {
        os << "[\n";
        for (std::size_t i = 0; i < r.sweeps.size(); ++i) {
            std::string table = sweep_table(r.sweeps[i], OutputFormat::json);
            table.pop_back();
            os << table << (i + 1 < r.sweeps.size() ? ",\n" : "\n");
        }
        os << "]\n";
        return;
    }
    os << "target,source,argmax_k,max_te_bits,below_floor,constant_source\n";
    for (const auto& s : r.sweeps) {
        os << s.target << ',' << s.source << ',' << s.argmax_k << ',' << io::format_double(s.max_bits) << ','
           << (s.below_floor ? 1 : 0) << ',' << (s.constant_source ? 1 : 0) << '\n';
    }
}

void print_sentiment(std::ostream& os, const SentimentResults& r)
{
    os << "language,segment,status,argmax_k,max_tte_bits,below_floor\n";
    for (const auto& c : r.cells) {
        os << c.language << ',' << c.segment << ',' << c.status;
        if (c.sweep) {
            os << ',' << c.sweep->argmax_k << ',' << io::format_double(c.sweep->max_bits) << ','
               << (c.sweep->below_floor ? 1 : 0);
        } else {
            os << ",,,";
        }
        os << '\n';
    }
}

void print_report(std::ostream& os, const PreparedData& d)
{
    const auto& r = d.forest_report;
    os << "records," << r.records << "\nroots," << r.roots << "\norphans," << r.orphans << "\nedge_rejections,"
       << r.edge_rejections << "\npromoted," << r.promoted << "\ndropped," << r.dropped << "\ncycles," << r.cycles
       << "\ntrees," << r.trees << "\nplaced," << r.placed << "\noutside_window," << d.tweets_outside_window
       << "\ntranscript_events," << d.transcript.events.size() << "\ntranscript_rejected,"
       << d.transcript.rejected.size() << "\ntranscript_unknown_kinds," << d.transcript.unknown_kinds << '\n';
}

int run(int argc, char** argv)
{
    CLI::App app{"shockflow: cascade metrics, event scores and transfer entropy"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "Flat key=value config file");
    app.add_option("--out", g.out, "Output directory (synth coupled: output file)");
    app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", g.seed, "Seed for synthetic generators");
    app.add_option("--set", g.overrides, "Config override key=value (repeatable)");
    app.add_option("--tweets", g.tweets, "Tweet table (overrides input.tweets)");
    app.add_option("--transcript", g.transcript, "Transcript (overrides input.transcript)");

    auto* ingest = app.add_subcommand("ingest", "Parse inputs, build cascades and write the binned series");
    auto* dynamics = app.add_subcommand("dynamics", "TE sweeps from event and follower series to cascade metrics");
    auto* sentiment = app.add_subcommand("sentiment", "TTE sweeps from transcript to tweet sentiment");
    auto* run_all_cmd = app.add_subcommand("run-all", "Every analysis plus plot data and manifest");

    std::string source_path, target_path, source_col, target_col, mode = "te";
    int k = 1, k_min = 1, k_max = 1;
    double epsilon = 0.0;
    std::optional<std::size_t> boundary;
    auto add_pair_options = [&](CLI::App* cmd) {
        cmd->add_option("--source", source_path, "Source series file")->required();
        cmd->add_option("--target", target_path, "Target series file")->required();
        cmd->add_option("--source-column", source_col, "Source column (default: 'source' or first value column)");
        cmd->add_option("--target-column", target_col, "Target column (default: 'target' or first value column)");
        cmd->add_option("--mode", mode, "te or tte")->check(CLI::IsMember({"te", "tte"}));
        cmd->add_option("--epsilon", epsilon, "Flat-step tolerance for value columns");
    };
    auto* te_cmd = app.add_subcommand("te", "Transfer entropy at one history length");
    add_pair_options(te_cmd);
    te_cmd->add_option("--k", k, "History length")->required();
    auto* sweep_cmd = app.add_subcommand("sweep", "Transfer entropy over a range of history lengths");
    add_pair_options(sweep_cmd);
    sweep_cmd->add_option("--k-min", k_min, "Smallest history length")->required();
    sweep_cmd->add_option("--k-max", k_max, "Largest history length")->required();
    sweep_cmd->add_option("--boundary", boundary, "Also sweep before/after this bin");

    auto* synth_cmd = app.add_subcommand("synth", "Synthetic data with known ground truth");
    synth_cmd->require_subcommand(1);
    double coupling = 0.5;
    std::size_t length = 100000;
    auto* coupled = synth_cmd->add_subcommand("coupled", "Coupled Markov pair with its analytic TE");
    coupled->add_option("--coupling", coupling, "Copy probability in [0, 1]")->required();
    coupled->add_option("--length", length, "Series length")->required();
    synth::PlantedScenarioSpec scenario;
    auto* scenario_cmd = synth_cmd->add_subcommand("scenario", "Tweets + transcript with planted lags");
    scenario_cmd->add_option("--dynamics-lag", scenario.dynamics_lag, "Planted lag for responsiveness");
    scenario_cmd->add_option("--sentiment-lag", scenario.sentiment_lag, "Planted lag for sentiment");
    scenario_cmd->add_option("--duration", scenario.duration_s, "Seconds of root tweets");
    scenario_cmd->add_option("--coupling", scenario.coupling, "Probability that the planted rule applies");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    auto format = output_format(g);

    if (*ingest || *dynamics || *sentiment || *run_all_cmd) {
        const auto config = load_config(g);
        format = config.format;
        ensure_writable_dir(config.out_dir);
        if (*run_all_cmd) {
            const auto r = run_all(config);
            print_dynamics(std::cout, r.dynamics, OutputFormat::csv);
            print_sentiment(std::cout, r.sentiment);
            return 0;
        }
        const auto data = prepare(config);
        if (*ingest) {
            emit_plot_data(data, nullptr, nullptr, config.out_dir, format);
            print_report(std::cout, data);
        } else if (*dynamics) {
            const auto r = run_dynamics_analysis(data);
            emit_plot_data(data, &r, nullptr, config.out_dir, format);
            print_dynamics(std::cout, r, format);
        } else {
            const auto r = run_sentiment_analysis(data);
            emit_plot_data(data, nullptr, &r, config.out_dir, format);
            print_sentiment(std::cout, r);
        }
        return 0;
    }

    if (*te_cmd || *sweep_cmd) {
        const auto src = load_series(source_path, source_col, "source", epsilon);
        const auto tgt = load_series(target_path, target_col, "target", epsilon);
        const auto sweep_mode = *parse_sweep_mode(mode);
        if (*te_cmd) {
            k_min = k_max = k;
        }
        std::vector<std::pair<std::string, SweepResult>> sweeps;
        sweeps.emplace_back("full", k_sweep(src.symbols, tgt.symbols, k_min, k_max, sweep_mode));
        if (boundary) {
            // Value series are cut before encoding so each segment's first difference stays inside it.
            DiscreteSeries parts[2][2];
            if (src.values && tgt.values) {
                const auto seg = segment(std::pair{*src.values, *tgt.values}, *boundary);
                parts[0][0] = derivative_sign_encode(seg.before.first, epsilon);
                parts[0][1] = derivative_sign_encode(seg.before.second, epsilon);
                parts[1][0] = derivative_sign_encode(seg.after.first, epsilon);
                parts[1][1] = derivative_sign_encode(seg.after.second, epsilon);
            } else {
                const auto seg = segment(std::pair{src.symbols, tgt.symbols}, *boundary);
                parts[0][0] = seg.before.first;
                parts[0][1] = seg.before.second;
                parts[1][0] = seg.after.first;
                parts[1][1] = seg.after.second;
            }
            sweeps.emplace_back("before", k_sweep(parts[0][0], parts[0][1], k_min, k_max, sweep_mode));
            sweeps.emplace_back("after", k_sweep(parts[1][0], parts[1][1], k_min, k_max, sweep_mode));
        }

        if (format == OutputFormat::json) {
            std::cout << (sweeps.size() > 1 ? "[\n" : "");
            for (std::size_t i = 0; i < sweeps.size(); ++i) {
                std::string table = sweep_table(sweeps[i].second, format);
                if (sweeps.size() > 1) table = "{\"segment\": \"" + sweeps[i].first + "\", \"sweep\": " + table + "}";
                while (!table.empty() && table.back() == '\n') table.pop_back();
                std::cout << table << (i + 1 < sweeps.size() ? ",\n" : "\n");
            }
            std::cout << (sweeps.size() > 1 ? "]\n" : "");
        } else {
            for (const auto& [name, sw] : sweeps) {
                if (sweeps.size() > 1) std::cout << "# segment=" << name << '\n';
                std::cout << sweep_table(sw, format);
                std::cout << "# argmax_k=" << sw.argmax_k << " max_bits=" << io::format_double(sw.max_bits)
                          << " below_floor=" << (sw.below_floor ? 1 : 0) << '\n';
            }
        }
        return 0;
    }

    if (*coupled) {
        if (g.out.empty()) throw ConfigError("synth coupled needs --out FILE");
        const auto pair = synth::coupled_markov({coupling, length, g.seed});
        std::ostringstream out;
        out << "# kind=symbols\n# analytic_te_bits=" << io::format_double(pair.analytic_te_bits)
            << "\n# coupling=" << io::format_double(coupling) << "\n# seed=" << g.seed << "\nt,source,target\n";
        for (std::size_t i = 0; i < length; ++i) {
            out << i << ',' << int(pair.source.symbols[i]) << ',' << int(pair.target.symbols[i]) << '\n';
        }
        io::write_file(g.out, out.str());
        std::cout << "analytic_te_bits=" << io::format_double(pair.analytic_te_bits) << '\n';
        return 0;
    }

    if (*scenario_cmd) {
        if (g.out.empty()) throw ConfigError("synth scenario needs --out DIR");
        scenario.seed = g.seed;
        const auto sc = synth::planted_scenario(scenario);
        const fs::path dir = fs::absolute(g.out);
        ensure_writable_dir(dir);
        std::ostringstream tweets;
        write_tweets(tweets, sc.tweets);
        io::write_file(dir / "tweets.csv", tweets.str());
        io::write_file(dir / "transcript.txt", sc.transcript);
        auto config = sc.config;
        config["input.tweets"] = (dir / "tweets.csv").string();
        config["input.transcript"] = (dir / "transcript.txt").string();
        io::write_file(dir / "config.txt", format_config(config));
        std::cout << "tweets," << sc.tweets.size() << "\nwindow_start," << sc.window_start << "\nwindow_end,"
                  << sc.window_end << '\n';
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}

#include "shockflow/config.hpp"

#include "shockflow/error.hpp"
#include "shockflow/io.hpp"

#include <cmath>
#include <sstream>

namespace shockflow {

std::optional<OutputFormat> parse_output_format(std::string_view token)
{
    if (token == "csv") return OutputFormat::csv;
    if (token == "json") return OutputFormat::json;
    return std::nullopt;
}

std::string_view to_string(OutputFormat format)
{
    return format == OutputFormat::csv ? "csv" : "json";
}

std::map<std::string, std::string> parse_config_text(std::string_view text)
{
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = io::trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        }
        const auto key = io::trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        out[std::string(key)] = std::string(io::trim(line.substr(eq + 1)));
    }
    return out;
}

namespace {

std::int64_t as_int(const std::string& key, const std::string& value)
{
    const auto v = io::parse_int(value);
    if (!v) throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
    return *v;
}

double as_double(const std::string& key, const std::string& value)
{
    const auto v = io::parse_double(value);
    if (!v || !std::isfinite(*v)) throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
    return *v;
}

FillPolicy as_fill(const std::string& key, const std::string& value)
{
    const auto v = parse_fill_policy(value);
    if (!v) throw ConfigError("'" + key + "' expects zero, hold_last or drop");
    return *v;
}

std::vector<std::string> as_list(const std::string& value)
{
    std::vector<std::string> out;
    for (auto item : io::split(value, ',')) {
        item = io::trim(item);
        if (!item.empty()) out.emplace_back(item);
    }
    return out;
}

} // namespace

PipelineConfig PipelineConfig::from_entries(const std::map<std::string, std::string>& entries)
{
    PipelineConfig c;
    c.apply(entries);
    c.validate();
    return c;
}

void PipelineConfig::apply(const std::map<std::string, std::string>& entries)
{
    for (const auto& [key, value] : entries) {
        if (key == "input.tweets") {
            tweets = value;
        } else if (key == "input.transcript") {
            transcript = value;
        } else if (key == "window.start") {
            window_start = value == "auto" ? std::nullopt : std::optional(as_int(key, value));
        } else if (key == "window.end") {
            window_end = value == "auto" ? std::nullopt : std::optional(as_int(key, value));
        } else if (key == "game.kickoff") {
            kickoff = value == "auto" ? std::nullopt : std::optional(as_int(key, value));
        } else if (key == "bins.dynamics_s") {
            dynamics_bin_s = as_int(key, value);
        } else if (key == "bins.sentiment_s") {
            sentiment_bin_s = as_int(key, value);
        } else if (key == "k.dynamics_min") {
            dynamics_k.min = static_cast<int>(as_int(key, value));
        } else if (key == "k.dynamics_max") {
            dynamics_k.max = static_cast<int>(as_int(key, value));
        } else if (key == "k.sentiment_min") {
            sentiment_k.min = static_cast<int>(as_int(key, value));
        } else if (key == "k.sentiment_max") {
            sentiment_k.max = static_cast<int>(as_int(key, value));
        } else if (key == "segment.boundary_bin") {
            const auto b = as_int(key, value);
            if (b < 1) throw ConfigError("segment.boundary_bin must be >= 1");
            boundary_bin = static_cast<std::size_t>(b);
        } else if (key == "languages") {
            languages = as_list(value);
        } else if (key == "fill.metric") {
            metric_fill = as_fill(key, value);
        } else if (key == "fill.sentiment") {
            sentiment_fill = as_fill(key, value);
        } else if (key == "epsilon") {
            epsilon = as_double(key, value);
        } else if (key == "orphan_policy") {
            const auto p = parse_orphan_policy(value);
            if (!p) throw ConfigError("orphan_policy expects drop or promote");
            orphan_policy = *p;
        } else if (key == "te.floor_bits") {
            floor_bits = as_double(key, value);
        } else if (key == "threads") {
            const auto t = as_int(key, value);
            if (t < 0) throw ConfigError("threads must be >= 0");
            threads = static_cast<unsigned>(t);
        } else if (key.starts_with("rule.")) {
            rules.apply_overrides({{key, value}});
        } else if (key == "output.dir") {
            out_dir = value;
        } else if (key == "output.format") {
            const auto f = parse_output_format(value);
            if (!f) throw ConfigError("output.format expects csv or json");
            format = *f;
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
}

void PipelineConfig::validate() const
{
    if (dynamics_bin_s < 1 || sentiment_bin_s < 1) throw ConfigError("bin widths must be >= 1");
    for (const auto* r : {&dynamics_k, &sentiment_k}) {
        if (r->min < 1 || r->max < r->min) throw ConfigError("k ranges must satisfy 1 <= min <= max");
    }
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be nonnegative");
    if (metric_fill == FillPolicy::drop) throw ConfigError("fill.metric must be zero or hold_last");
    if (sentiment_fill == FillPolicy::drop) {
        throw ConfigError("fill.sentiment=drop yields a nonuniform series, which cannot be discretized");
    }
    if (window_start && window_end && *window_end <= *window_start) throw ConfigError("window.end <= window.start");
    if (boundary_bin < 1) throw ConfigError("segment.boundary_bin must be >= 1");
}

std::map<std::string, std::string> PipelineConfig::resolved() const
{
    auto opt = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string("auto"); };
    std::string langs;
    for (const auto& l : languages) langs += (langs.empty() ? "" : ",") + l;

    std::map<std::string, std::string> out{
        {"input.tweets", tweets.string()},
        {"input.transcript", transcript.string()},
        {"window.start", opt(window_start)},
        {"window.end", opt(window_end)},
        {"game.kickoff", opt(kickoff)},
        {"bins.dynamics_s", std::to_string(dynamics_bin_s)},
        {"bins.sentiment_s", std::to_string(sentiment_bin_s)},
        {"k.dynamics_min", std::to_string(dynamics_k.min)},
        {"k.dynamics_max", std::to_string(dynamics_k.max)},
        {"k.sentiment_min", std::to_string(sentiment_k.min)},
        {"k.sentiment_max", std::to_string(sentiment_k.max)},
        {"segment.boundary_bin", std::to_string(boundary_bin)},
        {"languages", langs},
        {"fill.metric", std::string(to_string(metric_fill))},
        {"fill.sentiment", std::string(to_string(sentiment_fill))},
        {"epsilon", io::format_double(epsilon)},
        {"orphan_policy", std::string(to_string(orphan_policy))},
        {"te.floor_bits", io::format_double(floor_bits)},
        {"output.format", std::string(to_string(format))},
    };
    for (auto kind : kScoredKinds) {
        const auto& r = rules.rule(kind);
        const std::string base = "rule." + std::string(to_string(kind));
        out[base + ".actor"] = io::format_double(r.actor);
        out[base + ".opponent"] = io::format_double(r.opponent);
    }
    return out;
}

std::string format_config(const std::map<std::string, std::string>& entries)
{
    std::ostringstream out;
    for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
    return out.str();
}

} // namespace shockflow

#include "shockflow/synth.hpp"

#include "shockflow/error.hpp"
#include "shockflow/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shockflow::synth {

std::uint64_t SplitMix64::next()
{
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound)
{
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    while (true) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

bool SplitMix64::bernoulli(double p)
{
    if (!(p > 0.0)) return false;
    if (p >= 1.0) return true;
    const auto threshold = static_cast<std::uint64_t>(std::ldexp(p, 53));
    return (next() >> 11) < threshold;
}

double coupled_analytic_te(double coupling)
{
    const double hit = coupling + (1.0 - coupling) / 3.0;
    const double miss = (1.0 - coupling) / 3.0;
    double h = 0.0;
    if (hit > 0.0) h -= hit * std::log2(hit);
    if (miss > 0.0) h -= 2.0 * miss * std::log2(miss);
    return std::log2(3.0) - h;
}

CoupledPair coupled_markov(const CoupledProcessSpec& spec)
{
    if (spec.length < 2) throw ConfigError("coupled process length must be >= 2");
    if (!(spec.coupling >= 0.0 && spec.coupling <= 1.0)) throw ConfigError("coupling must be in [0, 1]");
    SplitMix64 rng(spec.seed);
    CoupledPair out;
    out.source.name = "source";
    out.target.name = "target";
    auto& x = out.source.symbols;
    auto& y = out.target.symbols;
    x.resize(spec.length);
    y.resize(spec.length);
    for (auto& s : x) s = rng.symbol();
    y[0] = rng.symbol();
    for (std::size_t i = 0; i + 1 < spec.length; ++i) {
        y[i + 1] = rng.bernoulli(spec.coupling) ? x[i] : rng.symbol();
    }
    out.analytic_te_bits = coupled_analytic_te(spec.coupling);
    return out;
}

DiscreteSeries iid_series(std::size_t length, std::uint64_t seed)
{
    if (length < 2) throw ConfigError("series length must be >= 2");
    SplitMix64 rng(seed);
    DiscreteSeries out;
    out.name = "iid";
    out.symbols.resize(length);
    for (auto& s : out.symbols) s = rng.symbol();
    return out;
}

CascadeTree random_cascade(std::size_t n_nodes, double branching_bias, std::uint64_t seed)
{
    if (n_nodes < 1) throw ConfigError("cascade needs at least one node");
    SplitMix64 rng(seed);
    std::vector<TweetRecord> nodes(n_nodes);
    std::vector<std::size_t> parent(n_nodes, CascadeTree::npos);
    std::int64_t t = 0;
    for (std::size_t i = 0; i < n_nodes; ++i) {
        auto& r = nodes[i];
        r.id = "n" + std::to_string(i);
        r.author_id = "u" + std::to_string(rng.below(1000));
        r.created_at = t;
        t += 1 + static_cast<std::int64_t>(rng.below(30));
        if (i == 0) continue;
        parent[i] = rng.bernoulli(branching_bias) ? i - 1 : static_cast<std::size_t>(rng.below(i));
        r.parent_id = nodes[parent[i]].id;
        r.root_id = nodes[0].id;
    }
    return CascadeTree(std::move(nodes), std::move(parent));
}

namespace {

// Level walk bounded to [-bound, bound]; each step picks uniformly among the feasible moves.
std::vector<int> bounded_walk(std::size_t n, int bound, SplitMix64& rng)
{
    std::vector<int> level(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        const int cur = level[i - 1];
        int moves[3];
        int count = 0;
        for (int step = -1; step <= 1; ++step) {
            if (cur + step >= -bound && cur + step <= bound) moves[count++] = step;
        }
        level[i] = cur + moves[rng.below(static_cast<std::uint64_t>(count))];
    }
    return level;
}

std::vector<std::uint8_t> signs(const std::vector<int>& level)
{
    std::vector<std::uint8_t> out(level.size() - 1);
    for (std::size_t i = 0; i + 1 < level.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(level[i + 1] > level[i] ? 3 : level[i + 1] == level[i] ? 2 : 1);
    }
    return out;
}

std::uint8_t add_mod3(std::uint8_t a, std::uint8_t b)
{
    return static_cast<std::uint8_t>((a - 1 + b - 1) % 3 + 1);
}

// target[j] = source[j-1] (+) target[j-lag] with probability coupling, else uniform.
std::vector<std::uint8_t> planted_target(const std::vector<std::uint8_t>& source, int lag, double coupling,
                                         SplitMix64& rng)
{
    const auto l = static_cast<std::size_t>(lag);
    std::vector<std::uint8_t> y(source.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (j >= l && rng.bernoulli(coupling)) {
            y[j] = add_mod3(source[j - 1], y[j - l]);
        } else {
            y[j] = rng.symbol();
        }
    }
    return y;
}

// Cumulative sum of (symbol - 2), giving a walk whose first differences reproduce the symbols.
std::vector<std::int64_t> integrate(const std::vector<std::uint8_t>& symbols)
{
    std::vector<std::int64_t> walk(symbols.size() + 1, 0);
    for (std::size_t i = 0; i < symbols.size(); ++i) walk[i + 1] = walk[i] + (symbols[i] - 2);
    return walk;
}

// Maps an integer walk into (-1, 1) on a dyadic grid so that per-bin means stay exact.
std::vector<double> to_polarity(const std::vector<std::int64_t>& walk)
{
    const auto [lo, hi] = std::minmax_element(walk.begin(), walk.end());
    const std::int64_t mid = (*lo + *hi) / 2;
    std::int64_t half = std::max<std::int64_t>(*hi - mid, mid - *lo) + 1;
    int exponent = 0;
    while ((std::int64_t{1} << exponent) <= half) ++exponent;
    std::vector<double> out(walk.size());
    for (std::size_t i = 0; i < walk.size(); ++i) out[i] = std::ldexp(static_cast<double>(walk[i] - mid), -exponent);
    return out;
}

} // namespace

PlantedScenario planted_scenario(const PlantedScenarioSpec& spec)
{
    if (spec.duration_s < 100) throw ConfigError("scenario duration must be >= 100 s");
    if (spec.dynamics_lag < 1 || spec.sentiment_lag < 1) throw ConfigError("planted lags must be >= 1");
    if (std::find(spec.languages.begin(), spec.languages.end(), spec.coupled_language) == spec.languages.end()) {
        throw ConfigError("coupled language must be one of the scenario languages");
    }
    SplitMix64 rng(spec.seed);
    const std::size_t roots_span = spec.duration_s;

    // Responsiveness: each root gets replies delayed by d[i] seconds, so the bin value is 1/d[i].
    const auto fouls = bounded_walk(roots_span, 3, rng);
    const auto foul_symbols = signs(fouls);
    const auto resp_symbols = planted_target(foul_symbols, spec.dynamics_lag, spec.coupling, rng);
    const auto resp_walk = integrate(resp_symbols);
    const std::int64_t resp_max = *std::max_element(resp_walk.begin(), resp_walk.end());
    std::vector<std::int64_t> delay(roots_span);
    for (std::size_t i = 0; i < roots_span; ++i) delay[i] = resp_max - resp_walk[i] + 1;
    const std::int64_t max_delay = *std::max_element(delay.begin(), delay.end());

    // The window extends past the last root so that every reply falls inside it.
    const std::size_t span = roots_span + static_cast<std::size_t>(max_delay) + 1;

    const auto transcript_level = bounded_walk(span, 8, rng);
    const auto transcript_symbols = signs(transcript_level);

    std::map<std::string, std::vector<double>> polarity;
    for (const auto& lang : spec.languages) {
        std::vector<std::uint8_t> symbols;
        if (lang == spec.coupled_language) {
            symbols = planted_target(transcript_symbols, spec.sentiment_lag, spec.coupling, rng);
        } else {
            symbols.resize(span - 1);
            for (auto& s : symbols) s = rng.symbol();
        }
        polarity[lang] = to_polarity(integrate(symbols));
    }

    PlantedScenario out;
    out.window_start = spec.start_epoch_s;
    out.window_end = spec.start_epoch_s + static_cast<std::int64_t>(span);

    std::uint64_t followers = 1000 + rng.below(1000000);
    for (std::size_t i = 0; i < roots_span; ++i) {
        if (rng.bernoulli(spec.follower_change_rate)) followers = 1000 + rng.below(1000000);
        const bool burst = rng.bernoulli(spec.burst_rate);
        const std::int64_t t = spec.start_epoch_s + static_cast<std::int64_t>(i);
        const std::int64_t reply_t = t + delay[i];
        const std::size_t reply_bin = i + static_cast<std::size_t>(delay[i]);
        for (std::size_t l = 0; l < spec.languages.size(); ++l) {
            const auto& lang = spec.languages[l];
            const std::string root_id = "t" + std::to_string(i) + lang;
            TweetRecord root;
            root.id = root_id;
            root.created_at = t;
            root.author_id = "u" + std::to_string(rng.below(50000));
            root.follower_count = followers;
            root.language = lang;
            root.polarity = polarity[lang][i];
            out.tweets.push_back(root);

            TweetRecord reply;
            reply.parent_id = root_id;
            reply.root_id = root_id;
            reply.created_at = reply_t;
            reply.follower_count = rng.below(5000);
            reply.language = lang;
            reply.polarity = polarity[lang][reply_bin];
            reply.id = root_id + "r";
            reply.author_id = "u" + std::to_string(rng.below(50000));
            out.tweets.push_back(reply);
            if (burst && l == 0) {
                reply.id = root_id + "s";
                reply.author_id = "u" + std::to_string(rng.below(50000));
                out.tweets.push_back(reply);
            }
        }
    }

    std::ostringstream transcript;
    for (std::size_t i = 0; i < span; ++i) {
        const std::int64_t minute = static_cast<std::int64_t>(i) / 60;
        const std::int64_t offset = static_cast<std::int64_t>(i) % 60;
        const std::string pol = io::format_double(transcript_level[i] / 8.0);
        const int level = i < roots_span ? fouls[i] : 0;
        if (level == 0) {
            transcript << minute << '|' << offset << "|-|other|play continues|" << pol << '\n';
        }
        for (int f = 0; f < std::abs(level); ++f) {
            // A positive balance favours team A: the fouls are committed by team B.
            transcript << minute << '|' << offset << '|' << (level > 0 ? 'B' : 'A') << "|foul|foul|" << pol << '\n';
        }
    }
    out.transcript = transcript.str();

    const std::size_t dyn_k_max = static_cast<std::size_t>(spec.dynamics_lag) + 3;
    const std::size_t sent_k_max = static_cast<std::size_t>(spec.sentiment_lag) + 2;
    std::string languages;
    for (const auto& lang : spec.languages) languages += (languages.empty() ? "" : ",") + lang;
    out.config = {
        {"window.start", std::to_string(out.window_start)},
        {"window.end", std::to_string(out.window_end)},
        {"game.kickoff", std::to_string(out.window_start)},
        {"bins.dynamics_s", "1"},
        {"bins.sentiment_s", "1"},
        {"k.dynamics_min", "1"},
        {"k.dynamics_max", std::to_string(dyn_k_max)},
        {"k.sentiment_min", "1"},
        {"k.sentiment_max", std::to_string(sent_k_max)},
        {"segment.boundary_bin", std::to_string(span / 2)},
        {"languages", languages},
        {"orphan_policy", "drop"},
    };
    return out;
}

} // namespace shockflow::synth

#include "shockflow/cascade.hpp"

#include "shockflow/error.hpp"
#include "shockflow/io.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace shockflow {

CascadeTree::CascadeTree(std::vector<TweetRecord> nodes, std::vector<std::size_t> parent)
    : nodes_(std::move(nodes)), parent_(std::move(parent))
{
    if (nodes_.empty()) throw InputError("cascade", "tree needs at least one node");
    if (parent_.size() != nodes_.size()) throw InputError("cascade", "parent list length mismatch");
    if (parent_[0] != npos) throw InputError("cascade", "node 0 must be the root");

    children_.resize(nodes_.size());
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const std::size_t p = parent_[i];
        if (p == npos || p >= i) {
            throw InputError("cascade", "node '" + nodes_[i].id + "' does not follow its parent");
        }
        if (nodes_[i].created_at < nodes_[p].created_at) {
            throw InputError("cascade", "node '" + nodes_[i].id + "' predates its parent");
        }
        children_[p].push_back(i);
    }
}

std::optional<std::size_t> CascadeTree::find(std::string_view id) const
{
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id == id) return i;
    }
    return std::nullopt;
}

std::size_t CascadeTree::depth() const
{
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        d[i] = d[parent_[i]] + 1;
        deepest = std::max(deepest, d[i]);
    }
    return deepest;
}

std::optional<OrphanPolicy> parse_orphan_policy(std::string_view token)
{
    if (token == "drop") return OrphanPolicy::drop;
    if (token == "promote") return OrphanPolicy::promote;
    return std::nullopt;
}

std::string_view to_string(OrphanPolicy policy)
{
    return policy == OrphanPolicy::drop ? "drop" : "promote";
}

Forest build_forest(std::span<const TweetRecord> records, OrphanPolicy orphan_policy)
{
    constexpr std::size_t none = CascadeTree::npos;
    const std::size_t n = records.size();

    std::unordered_map<std::string_view, std::size_t> index;
    index.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        if (!index.emplace(r.id, i).second) throw InputError("cascade", "duplicate id '" + r.id + "'");
        if (r.parent_id && *r.parent_id == r.id) {
            throw InputError("cascade", "record '" + r.id + "' is its own parent");
        }
    }

    Forest forest;
    auto& report = forest.report;
    report.records = n;

    std::vector<std::size_t> parent(n, none);
    std::vector<char> is_root(n, 0);
    std::vector<char> is_dropped(n, 0);

    auto handle_detached = [&](std::size_t i) {
        if (orphan_policy == OrphanPolicy::promote) {
            is_root[i] = 1;
            ++report.promoted;
        } else {
            is_dropped[i] = 1;
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        if (!r.parent_id) {
            is_root[i] = 1;
            ++report.roots;
            continue;
        }
        const auto it = index.find(*r.parent_id);
        if (it == index.end()) {
            ++report.orphans;
            handle_detached(i);
            continue;
        }
        if (r.created_at < records[it->second].created_at) {
            ++report.edge_rejections;
            handle_detached(i);
            continue;
        }
        parent[i] = it->second;
    }

    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (parent[i] != none) children[parent[i]].push_back(i);
    }

    std::vector<char> placed(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        if (!is_root[r]) continue;
        std::vector<std::size_t> order{r};
        std::vector<std::size_t> local_parent{none};
        placed[r] = 1;
        for (std::size_t head = 0; head < order.size(); ++head) {
            for (std::size_t c : children[order[head]]) {
                placed[c] = 1;
                order.push_back(c);
                local_parent.push_back(head);
            }
        }
        std::vector<TweetRecord> nodes;
        nodes.reserve(order.size());
        for (std::size_t i : order) nodes.push_back(records[i]);
        report.placed += order.size();
        forest.trees.emplace_back(std::move(nodes), std::move(local_parent));
    }
    report.trees = forest.trees.size();

    // Unplaced records either hang below a dropped record or sit on a parent cycle.
    enum : char { unknown, visiting, below_drop, on_cycle };
    std::vector<char> state(n, unknown);
    for (std::size_t i = 0; i < n; ++i) {
        if (placed[i] || state[i] != unknown) continue;
        std::vector<std::size_t> chain;
        std::size_t cur = i;
        char verdict = on_cycle;
        while (true) {
            if (is_dropped[cur]) {
                verdict = below_drop;
                break;
            }
            if (state[cur] == below_drop || state[cur] == on_cycle) {
                verdict = state[cur];
                break;
            }
            if (state[cur] == visiting) {
                verdict = on_cycle;
                break;
            }
            state[cur] = visiting;
            chain.push_back(cur);
            cur = parent[cur];
        }
        if (is_dropped[cur] && state[cur] == unknown) {
            state[cur] = below_drop;
            ++report.dropped;
        }
        for (std::size_t c : chain) {
            state[c] = verdict;
            if (verdict == below_drop) {
                ++report.dropped;
            } else {
                ++report.cycles;
            }
        }
    }
    return forest;
}

std::size_t volume(const CascadeTree& tree)
{
    return tree.size() - 1;
}

double wiener_index(const CascadeTree& tree)
{
    const std::size_t n = tree.size();
    if (n < 2) return 0.0;
    // Each edge separates subtree(child) from the rest; it lies on size*(n-size) unordered paths.
    std::vector<std::uint64_t> subtree(n, 1);
    std::uint64_t unordered_sum = 0;
    const auto& parent = tree.parents();
    for (std::size_t i = n - 1; i >= 1; --i) {
        unordered_sum += subtree[i] * (n - subtree[i]);
        subtree[parent[i]] += subtree[i];
    }
    return static_cast<double>(2 * unordered_sum) / static_cast<double>(n * (n - 1));
}

double responsiveness(const CascadeTree& tree)
{
    const std::size_t n = tree.size();
    if (n < 2) return 0.0;
    const auto& nodes = tree.nodes();
    const auto& parent = tree.parents();
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::int64_t dt = std::max<std::int64_t>(nodes[i].created_at - nodes[parent[i]].created_at, 1);
        sum += 1.0 / static_cast<double>(dt);
    }
    return sum / static_cast<double>(n - 1);
}

std::optional<Metric> parse_metric(std::string_view token)
{
    if (token == "volume") return Metric::volume;
    if (token == "virality") return Metric::virality;
    if (token == "responsiveness") return Metric::responsiveness;
    return std::nullopt;
}

std::string_view to_string(Metric metric)
{
    switch (metric) {
    case Metric::volume: return "volume";
    case Metric::virality: return "virality";
    case Metric::responsiveness: return "responsiveness";
    }
    return "?";
}

double evaluate(Metric metric, const CascadeTree& tree)
{
    switch (metric) {
    case Metric::volume: return static_cast<double>(volume(tree));
    case Metric::virality: return wiener_index(tree);
    case Metric::responsiveness: return responsiveness(tree);
    }
    return 0.0;
}

BinGrid root_grid(std::span<const CascadeTree> forest, std::int64_t bin_width_s)
{
    if (forest.empty()) throw InputError("cascade", "no cascades");
    std::int64_t first = forest.front().root().created_at;
    std::int64_t last = first;
    for (const auto& tree : forest) {
        first = std::min(first, tree.root().created_at);
        last = std::max(last, tree.root().created_at);
    }
    return BinGrid::covering(first, last, bin_width_s);
}

namespace {

template <typename Fn>
TimeSeries root_series(std::span<const CascadeTree> forest, const BinGrid& grid, FillPolicy fill, Fn&& value,
                       std::string name)
{
    if (forest.empty()) throw InputError("cascade", "no cascades");
    if (fill == FillPolicy::drop) throw ConfigError("cascade series fill must be zero or hold_last");
    std::vector<Observation> obs;
    obs.reserve(forest.size());
    for (const auto& tree : forest) obs.push_back({tree.root().created_at, value(tree)});
    return bin_mean(obs, grid, fill, std::move(name));
}

} // namespace

MetricSeries metric_series(std::span<const CascadeTree> forest, Metric metric, std::int64_t bin_width_s,
                           FillPolicy fill)
{
    return metric_series(forest, metric, root_grid(forest, bin_width_s), fill);
}

MetricSeries metric_series(std::span<const CascadeTree> forest, Metric metric, const BinGrid& grid,
                           FillPolicy fill)
{
    MetricSeries out;
    out.metric = metric;
    out.series = root_series(
        forest, grid, fill, [metric](const CascadeTree& t) { return evaluate(metric, t); },
        std::string(to_string(metric)));
    return out;
}

TimeSeries follower_series(std::span<const CascadeTree> forest, const BinGrid& grid, FillPolicy fill)
{
    return root_series(
        forest, grid, fill,
        [](const CascadeTree& t) { return static_cast<double>(t.root().follower_count); }, "followers");
}

namespace {

constexpr std::array<std::string_view, 8> kTweetColumns = {
    "id", "parent_id", "root_id", "created_at", "author_id", "follower_count", "language", "polarity"};

std::string line_ctx(std::size_t line_no)
{
    return "line " + std::to_string(line_no) + ": ";
}

} // namespace

TweetTable read_tweets(std::istream& in, std::optional<std::int64_t> window_start,
                       std::optional<std::int64_t> window_end)
{
    std::string line;
    std::size_t line_no = 0;
    char delim = ',';
    bool have_header = false;
    TweetTable table;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (io::trim(line).empty()) continue;

        if (!have_header) {
            delim = line.find('\t') != std::string::npos ? '\t' : ',';
            const auto cols = io::split(line, delim);
            bool ok = cols.size() == kTweetColumns.size();
            for (std::size_t i = 0; ok && i < cols.size(); ++i) ok = io::trim(cols[i]) == kTweetColumns[i];
            if (!ok) {
                throw InputError("cascade", "header must be id,parent_id,root_id,created_at,author_id,"
                                            "follower_count,language,polarity");
            }
            have_header = true;
            continue;
        }

        const auto f = io::split(line, delim);
        if (f.size() != kTweetColumns.size()) {
            throw InputError("cascade", line_ctx(line_no) + "expected 8 fields, got " + std::to_string(f.size()));
        }
        TweetRecord r;
        r.id = std::string(io::trim(f[0]));
        if (r.id.empty()) throw InputError("cascade", line_ctx(line_no) + "empty id");
        if (auto p = io::trim(f[1]); !p.empty()) r.parent_id = std::string(p);
        if (auto p = io::trim(f[2]); !p.empty()) r.root_id = std::string(p);
        const auto t = io::parse_int(f[3]);
        if (!t) throw InputError("cascade", line_ctx(line_no) + "bad created_at '" + std::string(f[3]) + "'");
        r.created_at = *t;
        r.author_id = std::string(io::trim(f[4]));
        const auto followers = io::parse_uint(f[5]);
        if (!followers) {
            throw InputError("cascade", line_ctx(line_no) + "bad follower_count '" + std::string(f[5]) + "'");
        }
        r.follower_count = *followers;
        r.language = std::string(io::trim(f[6]));
        if (r.language.empty()) r.language = "und";
        const auto pol = io::parse_double(f[7]);
        if (!pol || !(*pol >= -1.0 && *pol <= 1.0)) {
            throw InputError("cascade", line_ctx(line_no) + "polarity must be in [-1, 1]");
        }
        r.polarity = *pol;
        if (r.parent_id && *r.parent_id == r.id) {
            throw InputError("cascade", line_ctx(line_no) + "record '" + r.id + "' is its own parent");
        }

        if ((window_start && r.created_at < *window_start) || (window_end && r.created_at >= *window_end)) {
            ++table.outside_window;
            continue;
        }
        table.records.push_back(std::move(r));
    }
    if (!have_header) throw InputError("cascade", "empty tweet file");
    return table;
}

void write_tweets(std::ostream& out, std::span<const TweetRecord> records)
{
    out << "id,parent_id,root_id,created_at,author_id,follower_count,language,polarity\n";
    for (const auto& r : records) {
        out << r.id << ',' << r.parent_id.value_or("") << ',' << r.root_id.value_or("") << ',' << r.created_at << ','
            << r.author_id << ',' << r.follower_count << ',' << r.language << ',' << io::format_double(r.polarity)
            << '\n';
    }
}

} // namespace shockflow

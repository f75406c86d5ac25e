#pragma once

#include "shockflow/series.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shockflow {

// One tweet, reply, retweet or quote. Retweets and quotes reference the tweet they share via parent_id.
struct TweetRecord {
    std::string id;
    std::optional<std::string> parent_id;
    std::optional<std::string> root_id;
    std::int64_t created_at = 0;
    std::string author_id;
    std::uint64_t follower_count = 0;
    std::string language = "und";
    double polarity = 0.0;

    bool operator==(const TweetRecord&) const = default;
};

// Rooted reply tree. Node 0 is the root; parent[0] is npos. Nodes are stored in
// breadth-first order, children in input order.
class CascadeTree {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    CascadeTree() = default;
    // Validates the structure: single root at index 0, parents precede children,
    // child timestamps not earlier than their parent's.
    CascadeTree(std::vector<TweetRecord> nodes, std::vector<std::size_t> parent);

    const TweetRecord& root() const { return nodes_.front(); }
    const std::vector<TweetRecord>& nodes() const { return nodes_; }
    const std::vector<std::size_t>& parents() const { return parent_; }
    const std::vector<std::size_t>& children(std::size_t node) const { return children_[node]; }
    std::size_t size() const { return nodes_.size(); }
    std::optional<std::size_t> find(std::string_view id) const;
    std::size_t depth() const;

    bool operator==(const CascadeTree& other) const { return nodes_ == other.nodes_ && parent_ == other.parent_; }

private:
    std::vector<TweetRecord> nodes_;
    std::vector<std::size_t> parent_;
    std::vector<std::vector<std::size_t>> children_;
};

enum class OrphanPolicy { drop, promote };

std::optional<OrphanPolicy> parse_orphan_policy(std::string_view token);
std::string_view to_string(OrphanPolicy policy);

struct ForestReport {
    std::size_t records = 0;
    std::size_t roots = 0;            // records without parent_id
    std::size_t orphans = 0;          // parent_id not present in the dataset
    std::size_t edge_rejections = 0;  // child created before its parent
    std::size_t promoted = 0;         // orphans and rejected children turned into roots
    std::size_t dropped = 0;          // records discarded, including descendants of dropped nodes
    std::size_t cycles = 0;           // records on parent cycles (unreachable from any root)
    std::size_t trees = 0;
    std::size_t placed = 0;           // records that ended up in some tree

    bool operator==(const ForestReport&) const = default;
};

struct Forest {
    std::vector<CascadeTree> trees;
    ForestReport report;
};

// Builds reply trees from a flat record list. Throws InputError on duplicate ids or self-parents.
Forest build_forest(std::span<const TweetRecord> records, OrphanPolicy orphan_policy);

// Number of non-root nodes.
std::size_t volume(const CascadeTree& tree);

// Structural virality: mean shortest-path distance over ordered node pairs. 0 for a single node.
double wiener_index(const CascadeTree& tree);

// Mean over replies of 1 / max(child.created_at - parent.created_at, 1), in tweets per second.
double responsiveness(const CascadeTree& tree);

enum class Metric { volume, virality, responsiveness };

std::optional<Metric> parse_metric(std::string_view token);
std::string_view to_string(Metric metric);
double evaluate(Metric metric, const CascadeTree& tree);

struct MetricSeries {
    Metric metric = Metric::volume;
    TimeSeries series;
};

// Each tree's metric is attributed to its root's creation time; a bin holds the mean over its roots.
MetricSeries metric_series(std::span<const CascadeTree> forest, Metric metric, std::int64_t bin_width_s,
                           FillPolicy fill);
MetricSeries metric_series(std::span<const CascadeTree> forest, Metric metric, const BinGrid& grid,
                           FillPolicy fill);

// Root-author follower counts binned like metric_series.
TimeSeries follower_series(std::span<const CascadeTree> forest, const BinGrid& grid, FillPolicy fill);

// Grid spanning all root creation times.
BinGrid root_grid(std::span<const CascadeTree> forest, std::int64_t bin_width_s);

struct TweetTable {
    std::vector<TweetRecord> records;
    std::size_t outside_window = 0;
};

// Delimited text with header id,parent_id,root_id,created_at,author_id,follower_count,language,polarity.
// Delimiter is tab if the header contains one, comma otherwise. Empty fields denote absent optionals.
// Records with created_at outside [window_start, window_end) are counted and skipped.
TweetTable read_tweets(std::istream& in, std::optional<std::int64_t> window_start = std::nullopt,
                       std::optional<std::int64_t> window_end = std::nullopt);
void write_tweets(std::ostream& out, std::span<const TweetRecord> records);

} // namespace shockflow

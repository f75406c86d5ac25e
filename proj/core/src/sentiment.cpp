#include "shockflow/sentiment.hpp"

#include "shockflow/error.hpp"

#include <algorithm>
#include <vector>

namespace shockflow {

namespace {

std::vector<Observation> select(std::span<const TweetRecord> records, const std::optional<std::string>& language)
{
    std::vector<Observation> obs;
    for (const auto& r : records) {
        if (language && r.language != *language) continue;
        obs.push_back({r.created_at, r.polarity});
    }
    if (obs.empty()) throw InputError("sentiment", "empty selection");
    return obs;
}

std::string series_name(const std::optional<std::string>& language)
{
    return language ? "sentiment_" + *language : "sentiment_all";
}

} // namespace

TimeSeries sentiment_series(std::span<const TweetRecord> records, std::int64_t bin_width_s,
                            const std::optional<std::string>& language_filter, FillPolicy fill)
{
    const auto obs = select(records, language_filter);
    const auto [lo, hi] = std::minmax_element(obs.begin(), obs.end(),
                                              [](const Observation& a, const Observation& b) { return a.t < b.t; });
    return bin_mean(obs, BinGrid::covering(lo->t, hi->t, bin_width_s), fill, series_name(language_filter));
}

TimeSeries sentiment_series(std::span<const TweetRecord> records, const BinGrid& grid,
                            const std::optional<std::string>& language_filter, FillPolicy fill)
{
    const auto obs = select(records, language_filter);
    return bin_mean(obs, grid, fill, series_name(language_filter));
}

namespace {

std::vector<Observation> transcript_observations(std::span<const TranscriptEvent> events, std::int64_t kickoff)
{
    if (events.empty()) throw InputError("sentiment", "empty transcript");
    std::vector<Observation> obs;
    obs.reserve(events.size());
    for (const auto& ev : events) {
        if (!ev.polarity) throw InputError("sentiment", "no polarity");
        obs.push_back({kickoff + ev.game_second(), *ev.polarity});
    }
    return obs;
}

} // namespace

TimeSeries transcript_sentiment_series(std::span<const TranscriptEvent> events, std::int64_t bin_width_s,
                                       FillPolicy fill)
{
    const auto obs = transcript_observations(events, 0);
    std::int64_t last = 0;
    for (const auto& o : obs) last = std::max(last, o.t);
    return bin_mean(obs, BinGrid::covering(0, last, bin_width_s), fill, "transcript");
}

TimeSeries transcript_sentiment_series(std::span<const TranscriptEvent> events, const BinGrid& grid,
                                       std::int64_t kickoff_epoch_s, FillPolicy fill)
{
    return bin_mean(transcript_observations(events, kickoff_epoch_s), grid, fill, "transcript");
}

} // namespace shockflow

#pragma once

#include "shockflow/cascade.hpp"
#include "shockflow/events.hpp"
#include "shockflow/series.hpp"

#include <optional>
#include <span>
#include <string>

namespace shockflow {

// Mean polarity per bin after filtering on the record's language column.
// Throws InputError("empty selection") if the filter leaves nothing.
TimeSeries sentiment_series(std::span<const TweetRecord> records, std::int64_t bin_width_s,
                            const std::optional<std::string>& language_filter, FillPolicy fill);
TimeSeries sentiment_series(std::span<const TweetRecord> records, const BinGrid& grid,
                            const std::optional<std::string>& language_filter, FillPolicy fill);

// Mean transcript-line polarity per bin. Every event must carry a polarity ("no polarity" otherwise).
TimeSeries transcript_sentiment_series(std::span<const TranscriptEvent> events, std::int64_t bin_width_s,
                                       FillPolicy fill);
TimeSeries transcript_sentiment_series(std::span<const TranscriptEvent> events, const BinGrid& grid,
                                       std::int64_t kickoff_epoch_s, FillPolicy fill);

} // namespace shockflow

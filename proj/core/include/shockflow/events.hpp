#pragma once

#include "shockflow/series.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace shockflow {

enum class Team { a, b, none };
enum class EventKind { foul, saved_goal, goal, yellow_card, other };

inline constexpr std::array<EventKind, 4> kScoredKinds = {EventKind::foul, EventKind::saved_goal, EventKind::goal,
                                                          EventKind::yellow_card};

std::optional<EventKind> parse_event_kind(std::string_view token);
std::string_view to_string(EventKind kind);
std::string_view to_string(Team team);

struct TranscriptEvent {
    std::int64_t minute = 0;
    std::int64_t offset_s = 0;
    Team team = Team::none;
    EventKind kind = EventKind::other;
    std::string text;
    std::optional<double> polarity;

    std::int64_t game_second() const { return minute * 60 + offset_s; }
};

struct RejectedLine {
    std::size_t line_no = 0;
    std::string reason;
};

struct Transcript {
    std::vector<TranscriptEvent> events;
    std::vector<RejectedLine> rejected;
    std::size_t unknown_kinds = 0;  // lines kept as kind=other because the kind token was not recognised
};

// minute|offset_s|team|kind|description[|polarity]; team is A, B or '-' (no team, kind=other only).
// Malformed lines are reported, not fatal. Throws InputError("empty transcript") if none parse.
Transcript parse_transcript(std::string_view text);

// Score contributions of one event kind: actor_score to the acting team, opponent_score to the other.
struct KindRule {
    double actor = 0.0;
    double opponent = 0.0;
    bool operator==(const KindRule&) const = default;
};

class EventRuleSet {
public:
    // foul (-0.5, +0.5), saved_goal (+0.5, -0.5) with the shooting team as actor,
    // goal (+10, -10), yellow_card (-3, +3).
    static EventRuleSet defaults();

    const KindRule& rule(EventKind kind) const;
    void set(EventKind kind, KindRule rule);

    // Applies rule.<kind>.actor / rule.<kind>.opponent entries; other keys are ignored.
    void apply_overrides(const std::map<std::string, std::string>& entries);

    bool operator==(const EventRuleSet&) const = default;

private:
    std::array<KindRule, 5> rules_{};
};

struct EventScoreSeries {
    TimeSeries team_a;
    TimeSeries team_b;
    TimeSeries combined;  // per-bin sum of |actor| + |opponent| over events
    std::int64_t bin_width_s = 1;
    std::size_t outside_grid = 0;
};

// Bins by game second (origin 0), covering the last event.
EventScoreSeries score_events(std::span<const TranscriptEvent> events, const EventRuleSet& rules,
                              std::int64_t bin_width_s);
// Bins by epoch second kickoff + game_second on the given grid; events outside the grid are counted.
EventScoreSeries score_events(std::span<const TranscriptEvent> events, const EventRuleSet& rules,
                              const BinGrid& grid, std::int64_t kickoff_epoch_s);

} // namespace shockflow

#include "shockflow/events.hpp"

#include "shockflow/error.hpp"
#include "shockflow/io.hpp"

#include <algorithm>
#include <cmath>

namespace shockflow {

std::optional<EventKind> parse_event_kind(std::string_view token)
{
    if (token == "foul") return EventKind::foul;
    if (token == "saved_goal") return EventKind::saved_goal;
    if (token == "goal") return EventKind::goal;
    if (token == "yellow_card") return EventKind::yellow_card;
    if (token == "other") return EventKind::other;
    return std::nullopt;
}

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::foul: return "foul";
    case EventKind::saved_goal: return "saved_goal";
    case EventKind::goal: return "goal";
    case EventKind::yellow_card: return "yellow_card";
    case EventKind::other: return "other";
    }
    return "?";
}

std::string_view to_string(Team team)
{
    switch (team) {
    case Team::a: return "A";
    case Team::b: return "B";
    case Team::none: return "-";
    }
    return "?";
}

Transcript parse_transcript(std::string_view text)
{
    Transcript out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (io::trim(line).empty() || io::trim(line).front() == '#') {
            if (end == text.size()) break;
            continue;
        }

        auto reject = [&](std::string reason) { out.rejected.push_back({line_no, std::move(reason)}); };
        const auto f = io::split(line, '|');
        if (f.size() != 5 && f.size() != 6) {
            reject("expected 5 or 6 '|'-separated fields");
        } else {
            TranscriptEvent ev;
            const auto minute = io::parse_int(f[0]);
            const auto offset = io::parse_int(f[1]);
            const auto team = io::trim(f[2]);
            if (!minute || *minute < 0) {
                reject("bad minute");
            } else if (!offset || *offset < 0 || *offset > 59) {
                reject("bad offset");
            } else if (team != "A" && team != "B" && team != "a" && team != "b" && team != "-" && !team.empty()) {
                reject("bad team");
            } else {
                ev.minute = *minute;
                ev.offset_s = *offset;
                ev.team = (team == "A" || team == "a") ? Team::a : (team == "B" || team == "b") ? Team::b : Team::none;
                const auto kind = parse_event_kind(io::trim(f[3]));
                if (!kind) ++out.unknown_kinds;
                ev.kind = kind.value_or(EventKind::other);
                ev.text = std::string(io::trim(f[4]));
                bool ok = true;
                if (f.size() == 6 && !io::trim(f[5]).empty()) {
                    const auto pol = io::parse_double(f[5]);
                    if (!pol || !(*pol >= -1.0 && *pol <= 1.0)) {
                        reject("polarity must be in [-1, 1]");
                        ok = false;
                    } else {
                        ev.polarity = *pol;
                    }
                }
                if (ok && ev.team == Team::none && ev.kind != EventKind::other) {
                    reject("scored event needs team A or B");
                    ok = false;
                }
                if (ok) out.events.push_back(std::move(ev));
            }
        }
        if (end == text.size()) break;
    }
    if (out.events.empty()) throw InputError("events", "empty transcript");
    return out;
}

EventRuleSet EventRuleSet::defaults()
{
    EventRuleSet r;
    r.set(EventKind::foul, {-0.5, 0.5});
    r.set(EventKind::saved_goal, {0.5, -0.5});
    r.set(EventKind::goal, {10.0, -10.0});
    r.set(EventKind::yellow_card, {-3.0, 3.0});
    r.set(EventKind::other, {0.0, 0.0});
    return r;
}

const KindRule& EventRuleSet::rule(EventKind kind) const
{
    return rules_[static_cast<std::size_t>(kind)];
}

void EventRuleSet::set(EventKind kind, KindRule rule)
{
    if (kind == EventKind::other && (rule.actor != 0.0 || rule.opponent != 0.0)) {
        throw ConfigError("kind 'other' always scores 0");
    }
    rules_[static_cast<std::size_t>(kind)] = rule;
}

void EventRuleSet::apply_overrides(const std::map<std::string, std::string>& entries)
{
    for (const auto& [key, value] : entries) {
        if (!key.starts_with("rule.")) continue;
        const std::string_view rest = std::string_view(key).substr(5);
        const auto dot = rest.rfind('.');
        if (dot == std::string_view::npos) throw ConfigError("bad rule key '" + key + "'");
        const auto kind = parse_event_kind(rest.substr(0, dot));
        const auto side = rest.substr(dot + 1);
        if (!kind) throw ConfigError("unknown event kind in '" + key + "'");
        const auto number = io::parse_double(value);
        if (!number || !std::isfinite(*number)) throw ConfigError("bad number for '" + key + "'");
        KindRule r = rule(*kind);
        if (side == "actor") {
            r.actor = *number;
        } else if (side == "opponent") {
            r.opponent = *number;
        } else {
            throw ConfigError("rule key must end in .actor or .opponent: '" + key + "'");
        }
        set(*kind, r);
    }
}

namespace {

TimeSeries zero_series(const BinGrid& grid, std::string name)
{
    TimeSeries s;
    s.name = std::move(name);
    s.origin = grid.origin;
    s.bin_width_s = grid.bin_width_s;
    s.values.assign(grid.n_bins, 0.0);
    s.counts.assign(grid.n_bins, 0);
    return s;
}

} // namespace

EventScoreSeries score_events(std::span<const TranscriptEvent> events, const EventRuleSet& rules,
                              std::int64_t bin_width_s)
{
    std::int64_t last = 0;
    for (const auto& ev : events) last = std::max(last, ev.game_second());
    return score_events(events, rules, BinGrid::covering(0, last, bin_width_s), 0);
}

EventScoreSeries score_events(std::span<const TranscriptEvent> events, const EventRuleSet& rules,
                              const BinGrid& grid, std::int64_t kickoff_epoch_s)
{
    if (grid.bin_width_s < 1) throw ConfigError("bin width must be >= 1");
    EventScoreSeries out;
    out.bin_width_s = grid.bin_width_s;
    out.team_a = zero_series(grid, "team_a");
    out.team_b = zero_series(grid, "team_b");
    out.combined = zero_series(grid, "combined");

    for (const auto& ev : events) {
        const auto bin = grid.index_of(kickoff_epoch_s + ev.game_second());
        if (!bin) {
            ++out.outside_grid;
            continue;
        }
        const auto& r = rules.rule(ev.kind);
        if (ev.team != Team::none) {
            auto& actor = ev.team == Team::a ? out.team_a : out.team_b;
            auto& opponent = ev.team == Team::a ? out.team_b : out.team_a;
            actor.values[*bin] += r.actor;
            opponent.values[*bin] += r.opponent;
            out.combined.values[*bin] += std::abs(r.actor) + std::abs(r.opponent);
        }
        ++out.team_a.counts[*bin];
        ++out.team_b.counts[*bin];
        ++out.combined.counts[*bin];
    }
    return out;
}

} // namespace shockflow

#include "shockflow/error.hpp"
#include "shockflow/events.hpp"
#include "shockflow/synth.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace shockflow;

namespace {

TranscriptEvent ev(std::int64_t minute, std::int64_t offset, Team team, EventKind kind)
{
    TranscriptEvent e;
    e.minute = minute;
    e.offset_s = offset;
    e.team = team;
    e.kind = kind;
    return e;
}

std::vector<TranscriptEvent> random_events(std::uint64_t seed, std::size_t n)
{
    synth::SplitMix64 rng(seed);
    std::vector<TranscriptEvent> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(ev(static_cast<std::int64_t>(rng.below(95)), static_cast<std::int64_t>(rng.below(60)),
                         rng.below(2) ? Team::a : Team::b, static_cast<EventKind>(rng.below(5))));
    }
    return out;
}

} // namespace

TEST(ParseTranscript, FieldMapping)
{
    const auto t = parse_transcript("33|0|A|goal|Hirving Lozano scores\n45|30|B|yellow_card|caution\n");
    ASSERT_EQ(t.events.size(), 2u);
    EXPECT_EQ(t.events[0].minute, 33);
    EXPECT_EQ(t.events[0].team, Team::a);
    EXPECT_EQ(t.events[0].kind, EventKind::goal);
    EXPECT_EQ(t.events[0].text, "Hirving Lozano scores");
    EXPECT_EQ(t.events[1].minute, 45);
    EXPECT_EQ(t.events[1].offset_s, 30);
    EXPECT_EQ(t.events[1].game_second(), 45 * 60 + 30);
    EXPECT_FALSE(t.events[0].polarity.has_value());
}

TEST(ParseTranscript, UnknownKindBecomesOther)
{
    const auto t = parse_transcript("10|0|A|corner|short corner\n11|0|B|offside|flag\n12|0|A|foul|trip\n");
    ASSERT_EQ(t.events.size(), 3u);
    EXPECT_EQ(t.events[0].kind, EventKind::other);
    EXPECT_EQ(t.events[1].kind, EventKind::other);
    EXPECT_EQ(t.unknown_kinds, 2u);
}

TEST(ParseTranscript, MalformedLinesAreReportedNotFatal)
{
    const auto t = parse_transcript("# header comment\n"
                                    "x|0|A|goal|bad minute\n"
                                    "5|0|A|goal\n"
                                    "5|0|C|goal|bad team\n"
                                    "5|0|-|goal|scored without a team\n"
                                    "5|0|A|foul|polarity out of range|2.0\n"
                                    "\n"
                                    "7|15|B|saved_goal|keeper|0.4\n");
    ASSERT_EQ(t.events.size(), 1u);
    EXPECT_EQ(t.events[0].polarity, 0.4);
    ASSERT_EQ(t.rejected.size(), 5u);
    EXPECT_EQ(t.rejected[0].line_no, 2u);
    EXPECT_EQ(t.rejected[4].line_no, 6u);
}

TEST(ParseTranscript, EmptyIsAnError)
{
    try {
        parse_transcript("# nothing\nbroken line\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("empty transcript"), std::string::npos);
    }
}

TEST(EventRules, DefaultTable)
{
    const auto r = EventRuleSet::defaults();
    EXPECT_EQ(r.rule(EventKind::goal), (KindRule{10.0, -10.0}));
    EXPECT_EQ(r.rule(EventKind::yellow_card), (KindRule{-3.0, 3.0}));
    EXPECT_EQ(r.rule(EventKind::foul), (KindRule{-0.5, 0.5}));
    EXPECT_EQ(r.rule(EventKind::saved_goal), (KindRule{0.5, -0.5}));
    EXPECT_EQ(r.rule(EventKind::other), (KindRule{0.0, 0.0}));
}

TEST(EventRules, Overrides)
{
    auto r = EventRuleSet::defaults();
    r.apply_overrides({{"rule.goal.actor", "5"}, {"rule.foul.opponent", "1.25"}, {"bins.dynamics_s", "9"}});
    EXPECT_EQ(r.rule(EventKind::goal), (KindRule{5.0, -10.0}));
    EXPECT_EQ(r.rule(EventKind::foul), (KindRule{-0.5, 1.25}));
    EXPECT_THROW(r.apply_overrides({{"rule.other.actor", "1"}}), ConfigError);
    EXPECT_THROW(r.apply_overrides({{"rule.penalty.actor", "1"}}), ConfigError);
    EXPECT_THROW(r.apply_overrides({{"rule.goal.both", "1"}}), ConfigError);
    EXPECT_THROW(r.apply_overrides({{"rule.goal.actor", "lots"}}), ConfigError);
}

TEST(ScoreEvents, SingleGoal)
{
    std::vector<TranscriptEvent> events{ev(1, 0, Team::a, EventKind::goal)};
    const auto s = score_events(events, EventRuleSet::defaults(), 60);
    ASSERT_EQ(s.team_a.size(), 2u);
    EXPECT_EQ(s.team_a.values[1], 10.0);
    EXPECT_EQ(s.team_b.values[1], -10.0);
    EXPECT_EQ(s.combined.values[1], 20.0);
    EXPECT_EQ(s.team_a.values[0], 0.0);
}

TEST(ScoreEvents, FoulByB)
{
    std::vector<TranscriptEvent> events{ev(0, 5, Team::b, EventKind::foul)};
    const auto s = score_events(events, EventRuleSet::defaults(), 60);
    EXPECT_EQ(s.team_b.values[0], -0.5);
    EXPECT_EQ(s.team_a.values[0], 0.5);
}

TEST(ScoreEvents, SavedGoalCreditsTheShooter)
{
    std::vector<TranscriptEvent> events{ev(0, 0, Team::a, EventKind::saved_goal)};
    const auto s = score_events(events, EventRuleSet::defaults(), 60);
    EXPECT_EQ(s.team_a.values[0], 0.5);
    EXPECT_EQ(s.team_b.values[0], -0.5);
}

TEST(ScoreEvents, TwoYellowsSameBinAdd)
{
    std::vector<TranscriptEvent> events{ev(20, 1, Team::b, EventKind::yellow_card),
                                        ev(20, 50, Team::b, EventKind::yellow_card)};
    const auto s = score_events(events, EventRuleSet::defaults(), 60);
    EXPECT_EQ(s.team_b.values[20], -6.0);
    EXPECT_EQ(s.team_a.values[20], 6.0);
    EXPECT_EQ(s.combined.values[20], 12.0);
}

TEST(ScoreEvents, DefaultRulesCancelPerBin)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto events = random_events(seed, 200);
        for (std::int64_t width : {1, 60, 300}) {
            const auto s = score_events(events, EventRuleSet::defaults(), width);
            double total = 0.0;
            for (std::size_t b = 0; b < s.team_a.size(); ++b) {
                EXPECT_EQ(s.team_a.values[b] + s.team_b.values[b], 0.0);
                EXPECT_GE(s.combined.values[b], 0.0);
                total += s.team_a.values[b] + s.team_b.values[b];
            }
            EXPECT_EQ(total, 0.0);
        }
    }
}

TEST(ScoreEvents, AdditiveOverConcatenation)
{
    const auto first = random_events(1, 80);
    auto second = random_events(2, 80);
    second.push_back(ev(94, 59, Team::a, EventKind::goal));  // both parts and the whole share one length
    auto whole = first;
    whole.insert(whole.end(), second.begin(), second.end());
    auto rules = EventRuleSet::defaults();
    rules.set(EventKind::goal, {7.0, -1.5});  // additivity does not depend on antisymmetry
    const auto a = score_events(first, rules, 60);
    const auto b = score_events(second, rules, 60);
    const auto w = score_events(whole, rules, 60);
    ASSERT_EQ(w.team_a.size(), b.team_a.size());
    for (std::size_t i = 0; i < w.team_a.size(); ++i) {
        const double a_a = i < a.team_a.size() ? a.team_a.values[i] : 0.0;
        const double a_b = i < a.team_b.size() ? a.team_b.values[i] : 0.0;
        const double a_c = i < a.combined.size() ? a.combined.values[i] : 0.0;
        EXPECT_EQ(w.team_a.values[i], a_a + b.team_a.values[i]);
        EXPECT_EQ(w.team_b.values[i], a_b + b.team_b.values[i]);
        EXPECT_EQ(w.combined.values[i], a_c + b.combined.values[i]);
    }
}

TEST(ScoreEvents, PermutationWithinBinIsInvisible)
{
    auto events = random_events(5, 300);
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& x, const auto& y) { return x.minute < y.minute; });
    const auto before = score_events(events, EventRuleSet::defaults(), 60);
    // Reverse the order inside every minute.
    for (auto it = events.begin(); it != events.end();) {
        auto end = std::find_if(it, events.end(), [&](const auto& e) { return e.minute != it->minute; });
        std::reverse(it, end);
        it = end;
    }
    const auto after = score_events(events, EventRuleSet::defaults(), 60);
    EXPECT_EQ(before.team_a.values, after.team_a.values);
    EXPECT_EQ(before.team_b.values, after.team_b.values);
    EXPECT_EQ(before.combined.values, after.combined.values);
}

TEST(ScoreEvents, GridWithKickoff)
{
    std::vector<TranscriptEvent> events{ev(0, 10, Team::a, EventKind::goal), ev(5, 0, Team::b, EventKind::foul),
                                        ev(90, 0, Team::a, EventKind::goal)};
    const auto grid = BinGrid::window(1000, 1000 + 600, 60);
    const auto s = score_events(events, EventRuleSet::defaults(), grid, 1000);
    ASSERT_EQ(s.team_a.size(), 10u);
    EXPECT_EQ(s.team_a.origin, 1000);
    EXPECT_EQ(s.team_a.values[0], 10.0);
    EXPECT_EQ(s.team_a.values[5], 0.5);
    EXPECT_EQ(s.outside_grid, 1u);
}

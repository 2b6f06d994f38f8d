#include <gtest/gtest.h>

#include <algorithm>

#include "metaopa/regions.hpp"
#include "metaopa/transforms.hpp"
#include "support.hpp"

using namespace metaopa;
using namespace metaopa::testing;

namespace {

std::set<Word> words(const GuardedMeta& ta, const std::vector<std::string>& keep, std::size_t len) {
  auto ws = accepted_words(project(build_region_automaton(ta).nfa, keep), len);
  return {ws.begin(), ws.end()};
}

bool has_location(const GuardedMeta& m, const std::string& name) { return m.find_location(name).has_value(); }

}  // namespace

TEST(Transforms, LetterNames) {
  EXPECT_EQ(inc_letter(0, 1), "inc");
  EXPECT_EQ(dec_letter(0, 1), "dec");
  EXPECT_NE(inc_letter(0, 2), inc_letter(1, 2));
  EXPECT_EQ(guard_marker(Rel::Gt, 2), "?>2");
  EXPECT_TRUE(is_guard_marker("?<=3"));
  EXPECT_FALSE(is_guard_marker("inc"));
  EXPECT_EQ(parse_guard_marker("?<=3"), std::make_pair(Rel::Le, std::int64_t(3)));
  EXPECT_THROW(parse_guard_marker("?~3"), std::invalid_argument);
}

TEST(Transforms, RemovePrivateKeepsPublicPart) {
  GuardedMeta m = load("priv_loop_en.json");
  GuardedMeta pub = remove_private(m);
  EXPECT_FALSE(has_location(pub, "lpriv"));
  for (const auto& e : pub.edges) {
    EXPECT_NE(e.source, "lpriv");
    EXPECT_NE(e.target, "lpriv");
  }
  EXPECT_TRUE(has_location(pub, "lf"));
}

TEST(Transforms, DuplicateVisitedFinalsOnlyAfterPrivate) {
  GuardedMeta m = load("priv_loop_en.json");
  GuardedMeta dup = duplicate_visited(m);
  EXPECT_EQ(dup.locations.size(), 2 * m.locations.size());
  for (const auto& l : dup.locations) {
    if (!l.is_final) continue;
    EXPECT_NE(l.name.find("#V"), std::string::npos) << l.name;
  }
  GuardedMeta ta = strip_energies(dup);
  // The public run l0 -c-> lf is gone, private runs remain.
  auto ws = words(ta, {"a", "b", "c"}, 4);
  EXPECT_FALSE(ws.count(Word{"c"}));
  EXPECT_TRUE(ws.count(Word{"a", "b"}));
}

TEST(Transforms, SplitTurnsUpdatesIntoLetters) {
  GuardedMeta m = load("priv_loop_en.json");
  GuardedMeta s = split_and_relabel(m);
  EXPECT_TRUE(s.energies.empty());
  EXPECT_TRUE(std::find(s.clocks.begin(), s.clocks.end(), kZeroClock) != s.clocks.end());
  auto ws = words(s, {"inc"}, 4);
  // The public run adds 2, private runs add any number.
  EXPECT_TRUE(ws.count(Word{"inc", "inc"}));
  EXPECT_TRUE(ws.count(Word{}));
  EXPECT_TRUE(ws.count(Word{"inc", "inc", "inc"}));
  std::size_t intermediates = 0;
  for (const auto& l : s.locations) intermediates += is_intermediate(l);
  EXPECT_GT(intermediates, 0u);
}

TEST(Transforms, SplitRejectsEnergyGuardsWithoutMarkers) {
  GuardedMeta m = load("guarded_eta.json");
  EXPECT_THROW(split_and_relabel(m), std::exception);
  GuardedMeta s = split_and_relabel(m, {true});
  bool marker = false;
  for (const auto& e : s.edges) marker |= e.action && is_guard_marker(*e.action);
  EXPECT_TRUE(marker);
}

TEST(Transforms, GuardRemovalDropsEnergyAtoms) {
  GuardedMeta m = load("guarded_positive_meta.json");
  ASSERT_TRUE(classify(m).is_guarded);
  GuardedMeta r = remove_energy_guards(m);
  EXPECT_FALSE(classify(r).is_guarded);
  EXPECT_TRUE(validate(r).empty());
  GuardedMeta plain = load("priv_loop_en.json");
  EXPECT_EQ(remove_energy_guards(plain), plain);
}

TEST(Transforms, EnergyGuardMax) {
  EXPECT_EQ(energy_guard_max(load("priv_loop_en.json")), 0);
  EXPECT_GT(energy_guard_max(load("guarded_positive_meta.json")), 0);
}

TEST(Transforms, TickInstrumentationAddsTickClock) {
  GuardedMeta ta = strip_energies(split_and_relabel(load("priv_loop_en.json")));
  for (TickMode mode : {TickMode::ET_EN, TickMode::DE, TickMode::BDE}) {
    GuardedMeta t = add_tick_instrumentation(ta, mode);
    EXPECT_TRUE(std::find(t.clocks.begin(), t.clocks.end(), kTickClock) != t.clocks.end()) << tick_mode_name(mode);
    EXPECT_TRUE(std::find(t.actions.begin(), t.actions.end(), kTick) != t.actions.end());
    EXPECT_TRUE(shortest_accepted(build_region_automaton(t).nfa).has_value());
  }
  EXPECT_THROW(add_tick_instrumentation(load("priv_loop_en.json"), TickMode::DE), std::exception);
}

// ET-EN instrumentation counts whole time units: the public run l0 -c-> lf at
// time 1 carries exactly one tick.
TEST(Transforms, TickCountsElapsedTime) {
  GuardedMeta ta = strip_energies(remove_private(split_and_relabel(load("priv_loop_en.json"))));
  GuardedMeta t = add_tick_instrumentation(ta, TickMode::ET_EN);
  auto ws = words(t, {"t", "t>0"}, 4);
  EXPECT_TRUE(ws.count(Word{"t"}));
  EXPECT_FALSE(ws.count(Word{}));
}

TEST(Transforms, IntegerSwitchFlags) {
  auto sw = integer_switch_checks(load("switching_meta.json"));
  EXPECT_TRUE(sw.is_integer_switching);
  EXPECT_FALSE(sw.is_integer_execution_time);
  EXPECT_FALSE(sw.detail.empty());
  auto iet = integer_switch_checks(load("switching_meta_iet.json"));
  EXPECT_TRUE(iet.is_integer_switching);
  EXPECT_TRUE(iet.is_integer_execution_time);
}

TEST(Transforms, DiscretizationIsDiscrete) {
  GuardedMeta disc = integer_switch_to_discrete(load("switching_meta_iet.json"));
  auto r = classify(disc);
  EXPECT_TRUE(r.is_discrete);
  EXPECT_TRUE(std::find(disc.clocks.begin(), disc.clocks.end(), kSwitchClock) != disc.clocks.end());
  EXPECT_THROW(integer_switch_to_discrete(load("drone.json")), std::exception);
}

TEST(Transforms, StripEnergiesRejectsGuards) {
  EXPECT_THROW(strip_energies(load("guarded_eta.json")), std::exception);
  GuardedMeta s = strip_energies(load("priv_loop_en.json"));
  EXPECT_TRUE(s.energies.empty());
}

// Guard removal keeps the untimed action language of random guarded models.
TEST(TransformsProperty, GuardRemovalKeepsActionWords) {
  int checked = 0;
  for (std::uint32_t seed = 1; checked < 12 && seed < 400; ++seed) {
    GuardedMeta m = random_positive_meta(seed, {4, 1, 2, true});
    if (!classify(m).is_guarded || !validate(m).empty()) continue;
    ++checked;
    const EnumerationBounds b{5, Rational(1, 2), 2};
    auto collect = [&](const GuardedMeta& g) {
      std::set<std::pair<std::vector<std::string>, std::vector<Rational>>> out;
      enumerate_runs(g, b, [&](const metaopa::Run& run) {
        if (!is_accepting(g, run)) return true;
        auto st = run_stats(g, run);
        std::vector<std::string> letters;
        for (const auto& l : st.timed_word) letters.push_back(l.action);
        out.insert({letters, st.final_energies});
        return true;
      });
      return out;
    };
    EXPECT_EQ(collect(m), collect(remove_energy_guards(m))) << "seed " << seed;
  }
  EXPECT_EQ(checked, 12);
}

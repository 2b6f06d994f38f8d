#include <gtest/gtest.h>

#include "metaopa/pda.hpp"
#include "metaopa/transforms.hpp"
#include "support.hpp"

using namespace metaopa;
using namespace metaopa::testing;

namespace {

std::set<Vec> as_set(const std::vector<Vec>& v) { return {v.begin(), v.end()}; }

std::set<Vec> word_vectors(const std::vector<Word>& words, const std::vector<std::string>& counted) {
  std::set<Vec> out;
  for (const auto& w : words) {
    Vec v(counted.size(), 0);
    for (const auto& l : w)
      for (std::size_t i = 0; i < counted.size(); ++i) v[i] += counted[i] == l;
    out.insert(v);
  }
  return out;
}

// Balanced words a^n b^n.
Pda anbn() {
  Pda p;
  int a = p.symbol_or_add("a"), b = p.symbol_or_add("b");
  int x = p.stack_symbol("X");
  auto s0 = p.add_state(), s1 = p.add_state(), s2 = p.add_state(true);
  p.add_edge(s0, a, kBottom, {x, kBottom}, s0);
  p.add_edge(s0, a, x, {x, x}, s0);
  p.add_neutral(s0, kEpsilon, s1);
  p.add_edge(s1, b, x, {}, s1);
  p.add_edge(s1, kEpsilon, kBottom, {kBottom}, s2);
  return p;
}

}  // namespace

TEST(Pda, BalancedWords) {
  Pda p = anbn();
  EXPECT_TRUE(pda_accepts(p, {}));
  EXPECT_TRUE(pda_accepts(p, {"a", "a", "b", "b"}));
  EXPECT_FALSE(pda_accepts(p, {"a", "b", "b"}));
  auto e = pda_emptiness(p);
  EXPECT_FALSE(e.empty);
  EXPECT_EQ(e.witness, std::optional<Word>(Word{}));
  auto image = parikh_of_pda(p, {"a", "b"});
  for (std::int64_t n = 0; n <= 5; ++n)
    for (std::int64_t m = 0; m <= 5; ++m) EXPECT_EQ(member(image, {n, m}), n == m) << n << "," << m;
}

TEST(Pda, LGeq0) {
  Pda p = l_geq0_pda();
  EXPECT_TRUE(pda_accepts(p, {"inc", "dec", "t"}));
  EXPECT_TRUE(pda_accepts(p, {"inc", "inc", "dec", "f", "dec"}));
  EXPECT_FALSE(pda_accepts(p, {"dec"}));
  EXPECT_FALSE(pda_accepts(p, {"inc", "dec", "dec", "inc"}));
}

TEST(Pda, EmptyLanguage) {
  Pda p;
  int a = p.symbol_or_add("a");
  auto s0 = p.add_state(), s1 = p.add_state(true);
  int x = p.stack_symbol("X");
  // Pops X, which is never pushed.
  p.add_edge(s0, a, x, {}, s1);
  EXPECT_TRUE(pda_emptiness(p).empty);
  EXPECT_TRUE(pda_to_cfg(p).productions.empty());
  EXPECT_TRUE(parikh_of_pda(p, {"a"}).is_empty());
}

TEST(Pda, ProductWithNfa) {
  Nfa even;
  even.alphabet = {"a", "b"};
  auto q0 = even.add_state(true), q1 = even.add_state();
  even.add_transition(q0, "a", q1);
  even.add_transition(q1, "a", q0);
  even.add_transition(q0, "b", q0);
  even.add_transition(q1, "b", q1);
  Pda prod = pda_nfa_product(anbn(), even);
  EXPECT_TRUE(pda_accepts(prod, {"a", "a", "b", "b"}));
  EXPECT_FALSE(pda_accepts(prod, {"a", "b"}));
}

// The energy PDA of a counter NFA counts the final energy with a-letters.
TEST(Pda, EnergyDrainCountsFinalValue) {
  Nfa n;
  n.alphabet = {"inc", "dec"};
  auto s = n.add_state(true);
  n.add_transition(s, "inc", s);
  n.add_transition(s, "dec", s);
  Pda p = energy_pda_of_nfa(n);
  // inc and dec become silent stack moves.
  EXPECT_EQ(p.alphabet, std::vector<std::string>{kDrainLetter});
  EXPECT_TRUE(pda_accepts(p, {}));
  EXPECT_TRUE(pda_accepts(p, {kDrainLetter, kDrainLetter}));
  auto image = parikh_of_pda(p, {kDrainLetter});
  for (std::int64_t k = 0; k <= 4; ++k) EXPECT_TRUE(member(image, {k}));

  // Only "inc x" is read: the final energy is 1.
  Nfa once;
  once.alphabet = {"inc", "x"};
  auto s0 = once.add_state(), s1 = once.add_state(), s2 = once.add_state(true);
  once.add_transition(s0, "inc", s1);
  once.add_transition(s1, "x", s2);
  Pda q = energy_pda_of_nfa(once);
  EXPECT_TRUE(pda_accepts(q, {"x", kDrainLetter}));
  EXPECT_FALSE(pda_accepts(q, {"x"}));
  EXPECT_FALSE(pda_accepts(q, {"x", kDrainLetter, kDrainLetter}));
}

TEST(Pda, GuardedEnergyEvaluatesMarkers) {
  // inc* then a guard e > 1, then accept.
  Nfa n;
  const std::string gt1 = guard_marker(Rel::Gt, 1);
  n.alphabet = {"inc", gt1};
  auto s0 = n.add_state(), s1 = n.add_state(true);
  n.add_transition(s0, "inc", s0);
  n.add_transition(s0, gt1, s1);
  Pda p = guarded_energy_pda(n, 1);
  auto image = parikh_of_pda(p, {kDrainLetter});
  for (std::int64_t k = 0; k <= 5; ++k) EXPECT_EQ(member(image, {k}), k >= 2) << k;
}

TEST(Pda, NonterminalCapRaisesResourceError) {
  PdaParikhOptions o;
  o.max_nonterminals = 1;
  EXPECT_THROW(parikh_of_pda(anbn(), {"a", "b"}, o), ResourceError);
}

TEST(Pda, DotOutput) { EXPECT_NE(pda_to_dot(anbn()).find("digraph"), std::string::npos); }

// Parikh images of energy PDAs of random counter NFAs match bounded words.
TEST(PdaProperty, ParikhImageMatchesWords) {
  std::mt19937 rng(21);
  const std::vector<std::string> letters{"inc", "dec", "x"};
  const std::vector<std::string> counted{"x", kDrainLetter};
  for (int i = 0; i < 40; ++i) {
    Nfa n = random_nfa(rng, letters, 3, 7);
    Pda p = energy_pda_of_nfa(n);
    auto image = parikh_of_pda(p, counted);
    const std::size_t len = 6;
    EXPECT_EQ(as_set(members_up_to(image, len)), word_vectors(pda_accepted_words(p, len), counted)) << i;
    auto e = pda_emptiness(p);
    EXPECT_EQ(e.empty, image.is_empty());
    if (!e.empty) {
      EXPECT_TRUE(pda_accepts(p, *e.witness));
    }
  }
}

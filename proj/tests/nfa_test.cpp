#include <gtest/gtest.h>

#include "metaopa/nfa.hpp"
#include "support.hpp"

using namespace metaopa;
using namespace metaopa::testing;

namespace {

const std::vector<std::string> kAb{"a", "b"};

std::vector<Word> all_words(const std::vector<std::string>& alphabet, std::size_t len) {
  std::vector<Word> out{{}};
  std::vector<Word> layer{{}};
  for (std::size_t n = 0; n < len; ++n) {
    std::vector<Word> next;
    for (const auto& w : layer)
      for (const auto& l : alphabet) {
        Word x = w;
        x.push_back(l);
        next.push_back(x);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Words over {a, b} with an even number of a.
Nfa even_a() {
  Nfa n;
  n.alphabet = kAb;
  auto s0 = n.add_state(true), s1 = n.add_state(false);
  n.add_transition(s0, "a", s1);
  n.add_transition(s1, "a", s0);
  n.add_transition(s0, "b", s0);
  n.add_transition(s1, "b", s1);
  return n;
}

}  // namespace

TEST(Nfa, AcceptsAndShortest) {
  Nfa n = even_a();
  EXPECT_TRUE(accepts(n, {}));
  EXPECT_TRUE(accepts(n, {"a", "b", "a"}));
  EXPECT_FALSE(accepts(n, {"a"}));
  EXPECT_EQ(shortest_accepted(n), std::optional<Word>(Word{}));
  auto path = accepting_path(n, {"a", "a"});
  ASSERT_TRUE(path.has_value());
  EXPECT_EQ(path->front(), n.initial);
}

TEST(Nfa, ProjectionSilencesLetters) {
  Nfa p = project(even_a(), {"b"});
  EXPECT_EQ(p.alphabet, std::vector<std::string>{"b"});
  EXPECT_TRUE(accepts(p, {"b", "b"}));
  EXPECT_TRUE(accepts(p, {}));
}

TEST(Nfa, ComplementAndInclusion) {
  Nfa n = even_a();
  Nfa c = complement(n);
  EXPECT_TRUE(accepts(c, {"a"}));
  EXPECT_FALSE(accepts(c, {"a", "a"}));
  Nfa any;
  any.alphabet = kAb;
  auto s = any.add_state(true);
  any.add_transition(s, "a", s);
  any.add_transition(s, "b", s);
  EXPECT_TRUE(nfa_inclusion(n, any).included);
  auto r = nfa_inclusion(any, n);
  ASSERT_FALSE(r.included);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_TRUE(accepts(any, *r.counterexample));
  EXPECT_FALSE(accepts(n, *r.counterexample));
}

TEST(Nfa, IntersectionWitness) {
  Nfa n = even_a();
  Nfa c = complement(n);
  EXPECT_TRUE(nfa_intersect_emptiness(n, c).empty);
  Nfa one_b;
  one_b.alphabet = kAb;
  auto s0 = one_b.add_state(), s1 = one_b.add_state(true);
  one_b.add_transition(s0, "b", s1);
  auto r = nfa_intersect_emptiness(n, one_b);
  ASSERT_FALSE(r.empty);
  EXPECT_EQ(r.witness, std::optional<Word>(Word{"b"}));
}

TEST(Nfa, DeterminizeCap) { EXPECT_THROW(determinize(even_a(), 1), ResourceError); }

TEST(Nfa, DotOutput) { EXPECT_NE(nfa_to_dot(even_a()).find("digraph"), std::string::npos); }

// Language-preserving operations agree with the original on all short words.
TEST(NfaProperty, OperationsPreserveLanguage) {
  std::mt19937 rng(7);
  const auto words = all_words(kAb, 5);
  for (int i = 0; i < 60; ++i) {
    Nfa a = random_nfa(rng, kAb, 4, 9);
    Nfa b = random_nfa(rng, kAb, 3, 6);
    Nfa no_eps = remove_epsilon(a), det = determinize(a), min = minimize(a), tr = trim(a), comp = complement(a);
    Nfa prod = product(a, b);
    for (const auto& w : words) {
      const bool in = accepts(a, w);
      ASSERT_EQ(accepts(no_eps, w), in) << "remove_epsilon " << i << " " << word_to_string(w);
      ASSERT_EQ(accepts(det, w), in) << "determinize " << i;
      ASSERT_EQ(accepts(min, w), in) << "minimize " << i;
      ASSERT_EQ(accepts(tr, w), in) << "trim " << i;
      ASSERT_EQ(accepts(comp, w), !in) << "complement " << i;
      ASSERT_EQ(accepts(prod, w), in && accepts(b, w)) << "product " << i;
    }
    EXPECT_LE(minimize(a).size(), complete(determinize(a)).size());
    // accepted_words is the filtered enumeration.
    std::vector<Word> expected;
    for (const auto& w : words)
      if (w.size() <= 3 && accepts(a, w)) expected.push_back(w);
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(accepted_words(a, 3), expected) << i;
  }
}

TEST(NfaProperty, InclusionAgreesWithWords) {
  std::mt19937 rng(8);
  const auto words = all_words(kAb, 6);
  for (int i = 0; i < 60; ++i) {
    Nfa a = random_nfa(rng, kAb, 3, 7);
    Nfa b = random_nfa(rng, kAb, 3, 7);
    auto r = nfa_inclusion(a, b);
    if (r.included) {
      for (const auto& w : words) {
        if (!accepts(a, w)) continue;
        ASSERT_TRUE(accepts(b, w)) << i << " " << word_to_string(w);
      }
    } else {
      ASSERT_TRUE(r.counterexample.has_value());
      EXPECT_TRUE(accepts(a, *r.counterexample));
      EXPECT_FALSE(accepts(b, *r.counterexample));
    }
  }
}

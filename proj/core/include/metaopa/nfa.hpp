#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metaopa/errors.hpp"

namespace metaopa {

constexpr int kEpsilon = -1;

using Word = std::vector<std::string>;

// Finite automaton over a named alphabet; symbol ids index `alphabet`.
struct Nfa {
  struct Transition {
    std::size_t src;
    int sym;  // kEpsilon or an index into alphabet
    std::size_t dst;
    bool operator==(const Transition&) const = default;
  };

  std::vector<std::string> alphabet;
  std::size_t initial = 0;
  std::vector<bool> accepting;
  std::vector<std::string> state_names;  // optional, parallel to accepting
  std::vector<Transition> transitions;

  std::size_t size() const { return accepting.size(); }
  std::size_t add_state(bool accept = false, std::string name = {});
  void add_transition(std::size_t src, int sym, std::size_t dst);
  void add_transition(std::size_t src, const std::string& letter, std::size_t dst);
  std::optional<int> symbol(const std::string& letter) const;
  int symbol_or_add(const std::string& letter);
  std::string state_name(std::size_t s) const;
};

using Adjacency = std::vector<std::vector<std::pair<int, std::size_t>>>;
Adjacency adjacency(const Nfa& a);

constexpr std::size_t kDefaultDeterminizeCap = std::size_t(1) << 16;

// Letters not listed become silent; the result's alphabet is `keep`.
Nfa project(const Nfa& a, const std::vector<std::string>& keep);
// Renames letters (nullopt = silent) and sets the alphabet to `alphabet`.
Nfa relabel(const Nfa& a, const std::map<std::string, std::optional<std::string>>& rename,
            const std::vector<std::string>& alphabet);
// Same alphabet as a set, ids reordered to `alphabet`.
Nfa align_alphabet(const Nfa& a, const std::vector<std::string>& alphabet);

std::vector<std::size_t> epsilon_closure(const Adjacency& adj, std::vector<std::size_t> states);
Nfa remove_epsilon(const Nfa& a);
Nfa trim(const Nfa& a);
Nfa determinize(const Nfa& a, std::size_t cap = kDefaultDeterminizeCap);
Nfa complete(const Nfa& dfa);
Nfa complement(const Nfa& a, std::size_t cap = kDefaultDeterminizeCap);
Nfa minimize(const Nfa& a, std::size_t cap = kDefaultDeterminizeCap);
Nfa product(const Nfa& a, const Nfa& b);

bool accepts(const Nfa& a, const Word& w);
std::optional<Word> shortest_accepted(const Nfa& a);
// Accepted words of at most max_len letters, sorted.
std::vector<Word> accepted_words(const Nfa& a, std::size_t max_len);
// States of one accepting path reading w (silent moves included).
std::optional<std::vector<std::size_t>> accepting_path(const Nfa& a, const Word& w);

struct InclusionResult {
  bool included = true;
  std::optional<Word> counterexample;
};

struct IntersectionResult {
  bool empty = true;
  std::optional<Word> witness;
};

// L(a) ⊆ L(b); the counterexample is in L(a) \ L(b).
InclusionResult nfa_inclusion(const Nfa& a, const Nfa& b, std::size_t cap = kDefaultDeterminizeCap);
IntersectionResult nfa_intersect_emptiness(const Nfa& a, const Nfa& b);

std::string nfa_to_dot(const Nfa& a, const std::string& name = "nfa");
std::string word_to_string(const Word& w);

}  // namespace metaopa

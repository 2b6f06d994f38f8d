#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metaopa/nfa.hpp"
#include "metaopa/semilinear.hpp"

namespace metaopa {

inline constexpr int kBottom = 0;  // stack symbol 0 is the bottom marker
inline constexpr const char* kDrainLetter = "a";

// Pushdown automaton accepting by final state. Every edge pops exactly one
// symbol and pushes a string written top-first, so pop X / push X is a
// stack-neutral move.
struct Pda {
  struct Edge {
    std::size_t src;
    int sym;  // kEpsilon or an index into alphabet
    int pop;
    std::vector<int> push;
    std::size_t dst;
    bool operator==(const Edge&) const = default;
  };

  std::vector<std::string> alphabet;
  std::vector<std::string> stack_alphabet{"⊥"};
  std::size_t initial = 0;
  std::vector<bool> accepting;
  std::vector<std::string> state_names;
  std::vector<Edge> edges;

  std::size_t size() const { return accepting.size(); }
  std::size_t add_state(bool accept = false, std::string name = {});
  int stack_symbol(const std::string& name);  // adds when missing
  int symbol_or_add(const std::string& letter);
  void add_edge(std::size_t src, int sym, int pop, std::vector<int> push, std::size_t dst);
  // One stack-neutral edge per stack symbol.
  void add_neutral(std::size_t src, int sym, std::size_t dst);
};

// inc pushes e and dec pops e as silent moves; other letters are read with
// the stack untouched.
// Each accepting state q gains an a-loop popping e and a bottom test into a
// fresh accepting q', so #a equals the final energy. Input letters: inc, dec
// and anything else except guard markers.
Pda energy_pda_of_nfa(const Nfa& nfa);

// M_E + 2 copies: copies 0..M_E hold the energy value in the control state
// and evaluate guard markers, the top copy stands for values above M_E and
// keeps the excess on the stack. Acceptance drains the energy as a-letters
// down to copy 0.
Pda guarded_energy_pda(const Nfa& nfa, std::int64_t max_energy_constant);

// One state, initial and accepting, over {inc, dec, t, f}: accepts the words
// in which every prefix has no more dec than inc.
Pda l_geq0_pda();

// L(result) = L(p) ∩ L(n). The non-silent alphabets must coincide as sets.
Pda pda_nfa_product(const Pda& p, const Nfa& n);

struct PdaEmptiness {
  bool empty = true;
  std::optional<Word> witness;  // a shortest accepted word
};

PdaEmptiness pda_emptiness(const Pda& p);

// Context-free grammar over the PDA alphabet.
struct Cfg {
  struct Symbol {
    bool terminal;
    std::size_t id;
    bool operator==(const Symbol&) const = default;
  };
  struct Production {
    std::size_t lhs;
    std::vector<Symbol> body;
  };
  std::vector<std::string> terminals;
  std::vector<std::string> nonterminals;
  std::size_t start = 0;
  std::vector<Production> productions;
};

// Triple grammar [p X q] restricted to useful nonterminals. An empty language
// yields a grammar with no productions.
Cfg pda_to_cfg(const Pda& p);

struct PdaParikhOptions {
  std::size_t max_nonterminals = 20000;
  std::size_t max_components = 100000;
};

SemilinearSet parikh_of_cfg(const Cfg& g, const std::vector<std::string>& counted,
                            const PdaParikhOptions& opts = {});
SemilinearSet parikh_of_pda(const Pda& p, const std::vector<std::string>& counted,
                            const PdaParikhOptions& opts = {});

// Bounded simulation: configurations whose stack exceeds max_stack are cut.
bool pda_accepts(const Pda& p, const Word& w, std::size_t max_stack = 64);
// Accepted words of at most max_len letters, sorted.
std::vector<Word> pda_accepted_words(const Pda& p, std::size_t max_len, std::size_t max_stack = 64);

std::string pda_to_dot(const Pda& p, const std::string& name = "pda");

}  // namespace metaopa

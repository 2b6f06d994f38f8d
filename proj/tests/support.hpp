#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "metaopa/model.hpp"
#include "metaopa/nfa.hpp"
#include "metaopa/semantics.hpp"
#include "metaopa/semilinear.hpp"

namespace metaopa::testing {

inline std::string model_path(const std::string& name) { return std::string(METAOPA_MODELS_DIR) + "/" + name; }
inline GuardedMeta load(const std::string& name) { return load_model(model_path(name)); }

struct RandomModelOptions {
  std::size_t max_locations = 4;  // including the private and final ones
  std::size_t energies = 2;
  std::int64_t max_constant = 2;
  bool energy_guards = false;  // single-energy guards in [0, max_constant]
};

// Random discrete positive model with one clock x: l0 initial, lp private,
// lf final, plus optional plain locations. Every non-final location reaches lf.
inline GuardedMeta random_positive_meta(std::uint32_t seed, const RandomModelOptions& o = {}) {
  std::mt19937 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  GuardedMeta m;
  m.actions = {"a", "b", "c"};
  m.clocks = {"x"};
  for (std::size_t i = 0; i < o.energies; ++i) m.energies.push_back("e" + std::to_string(i + 1));

  std::vector<std::string> names{"l0", "lp"};
  const std::size_t extra = o.max_locations > 3 ? static_cast<std::size_t>(pick(0, int(o.max_locations) - 3)) : 0;
  for (std::size_t i = 0; i < extra; ++i) names.push_back("l" + std::to_string(i + 1));
  for (const auto& n : names) {
    Location l;
    l.name = n;
    l.is_initial = n == "l0";
    l.is_private = n == "lp";
    if (pick(0, 2) == 0) l.invariant.atoms.push_back({"x", Rel::Le, o.max_constant});
    m.locations.push_back(l);
  }
  Location fin;
  fin.name = "lf";
  fin.is_final = true;
  m.locations.push_back(fin);

  auto random_guard = [&]() {
    Constraint g;
    int kind = pick(0, 3);
    std::int64_t c = pick(0, int(o.max_constant));
    if (kind == 1) g.atoms.push_back({"x", Rel::Ge, c});
    if (kind == 2) g.atoms.push_back({"x", Rel::Le, c});
    if (kind == 3) g.atoms.push_back({"x", Rel::Gt, std::min<std::int64_t>(c, o.max_constant - 1)});
    if (o.energy_guards && !m.energies.empty() && pick(0, 2) == 0) {
      static const Rel rels[] = {Rel::Lt, Rel::Le, Rel::Ge, Rel::Gt};
      g.atoms.push_back({m.energies[0], rels[pick(0, 3)], pick(0, int(o.max_constant))});
    }
    return g;
  };
  auto random_edge = [&](const std::string& from, const std::string& to) {
    Edge e;
    e.source = from;
    e.target = to;
    e.guard = random_guard();
    int act = pick(0, 3);
    if (act < 3) e.action = m.actions[act];
    for (const auto& en : m.energies)
      if (int u = pick(0, 3); u > 1) e.updates[en] = u - 1;
    if (pick(0, 2) == 0) e.resets.insert("x");
    return e;
  };

  // A spine guarantees reachability of lp and of lf from every location.
  m.edges.push_back(random_edge("l0", "lp"));
  m.edges.push_back(random_edge("lp", "lf"));
  for (std::size_t i = 2; i < names.size(); ++i) {
    m.edges.push_back(random_edge(names[pick(0, int(i) - 1)], names[i]));
    m.edges.push_back(random_edge(names[i], "lf"));
  }
  m.edges.push_back(random_edge("l0", "lf"));
  const int more = pick(0, 3);
  for (int i = 0; i < more; ++i) {
    const auto& from = names[pick(0, int(names.size()) - 1)];
    const bool to_final = pick(0, 2) == 0;
    m.edges.push_back(random_edge(from, to_final ? "lf" : names[pick(0, int(names.size()) - 1)]));
  }
  return m;
}

// Parikh vectors of the words of `a` over `counted` with at most `norm` counted
// letters, by word enumeration.
inline std::set<Vec> word_parikh_vectors(const Nfa& a, const std::vector<std::string>& counted, std::size_t norm) {
  std::set<Vec> out;
  for (const auto& w : accepted_words(project(a, counted), norm)) {
    Vec v(counted.size(), 0);
    for (const auto& l : w)
      for (std::size_t i = 0; i < counted.size(); ++i)
        if (counted[i] == l) ++v[i];
    out.insert(v);
  }
  return out;
}

// Random semilinear set with entries in [0, 3] and up to two periods per
// component.
inline SemilinearSet random_semilinear(std::mt19937& rng, std::size_t dim, std::size_t max_components = 2) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  SemilinearSet s;
  s.dim = dim;
  const int count = pick(1, int(max_components));
  for (int c = 0; c < count; ++c) {
    LinearSet l;
    for (std::size_t i = 0; i < dim; ++i) l.base.push_back(pick(0, 3));
    const int periods = pick(0, 2);
    for (int p = 0; p < periods; ++p) {
      Vec v;
      for (std::size_t i = 0; i < dim; ++i) v.push_back(pick(0, 2));
      l.periods.push_back(v);
    }
    s.components.push_back(l);
  }
  return s;
}

// Random NFA over `alphabet` with a few silent moves; state 0 is initial.
inline Nfa random_nfa(std::mt19937& rng, const std::vector<std::string>& alphabet, std::size_t states = 4,
                      std::size_t transitions = 8) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Nfa a;
  a.alphabet = alphabet;
  for (std::size_t i = 0; i < states; ++i) a.add_state(pick(0, 2) == 0);
  a.accepting[static_cast<std::size_t>(pick(0, int(states) - 1))] = true;
  for (std::size_t i = 0; i < transitions; ++i) {
    int sym = pick(-1, int(alphabet.size()) - 1);
    if (sym == kEpsilon && pick(0, 2) != 0) sym = 0;
    a.add_transition(static_cast<std::size_t>(pick(0, int(states) - 1)), sym,
                     static_cast<std::size_t>(pick(0, int(states) - 1)));
  }
  return a;
}

// The two automata of the Parikh-by-block example: letters a and b are
// counted, t is the tick.
inline Nfa block_example_n() {
  Nfa n;
  n.alphabet = {"a", "b", "t"};
  auto q0 = n.add_state(false, "q_init");
  auto q1 = n.add_state(false, "q1");
  auto q2 = n.add_state(false, "q2");
  auto q3 = n.add_state(false, "q3");
  auto qf = n.add_state(true, "qf");
  n.add_transition(q0, "a", q1);
  n.add_transition(q1, "b", q0);
  n.add_transition(q0, "b", q3);
  n.add_transition(q1, "t", q2);
  n.add_transition(q2, "t", q2);
  n.add_transition(q2, "b", q3);
  n.add_transition(q3, "t", q1);
  n.add_transition(q3, "a", qf);
  return n;
}

inline Nfa block_example_m() {
  Nfa m;
  m.alphabet = {"a", "b", "t"};
  auto q0 = m.add_state(false, "q_init'");
  auto q1 = m.add_state(false, "q1'");
  auto qf = m.add_state(true, "qf'");
  m.add_transition(q0, "a", q0);
  m.add_transition(q1, "b", q1);
  m.add_transition(q1, "t", q0);
  m.add_transition(q0, "t", q1);
  m.add_transition(q1, "a", qf);
  return m;
}

inline TwoCounterMachine small_two_counter_machine() {
  TwoCounterMachine m;
  m.states = {"q0", "q1", "q2", "halt"};
  m.halt_state = "halt";
  m.transitions = {TwoCounterMachine::Inc{1, "q0", "q1"}, TwoCounterMachine::Inc{2, "q1", "q2"},
                   TwoCounterMachine::DecOrZero{1, "q2", "q2", "halt"}};
  return m;
}

}  // namespace metaopa::testing

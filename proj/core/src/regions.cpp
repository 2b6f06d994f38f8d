#include "metaopa/regions.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "metaopa/errors.hpp"

namespace metaopa {

namespace {

// Recomputes dense ranks and clears the fraction of clocks above M.
void normalize(ClockRegion& r, const MaxConstants& m) {
  std::set<int> ranks;
  for (std::size_t i = 0; i < r.frac.size(); ++i) {
    if (r.ipart[i] > m[i]) {
      r.ipart[i] = m[i] + 1;
      r.frac[i] = 0;
    }
    if (r.frac[i] != 0) ranks.insert(r.frac[i]);
  }
  std::map<int, int> dense;
  int k = 0;
  for (int v : ranks) dense[v] = ++k;
  for (auto& f : r.frac)
    if (f != 0) f = dense[f];
}

void normalize_unbounded(ClockRegion& r) {
  std::set<int> ranks(r.frac.begin(), r.frac.end());
  ranks.erase(0);
  std::map<int, int> dense;
  int k = 0;
  for (int v : ranks) dense[v] = ++k;
  for (auto& f : r.frac)
    if (f != 0) f = dense[f];
}

bool region_satisfies_constraint(const GuardedMeta& ta, const ClockRegion& r, const Constraint& c,
                                 const MaxConstants& m) {
  for (const auto& a : c.atoms) {
    auto ci = ta.clock_index(a.var);
    if (!ci) throw UnsupportedClass("region construction requires clock-only constraints, found " + a.var);
    if (!region_satisfies(r, *ci, a.rel, a.bound, m)) return false;
  }
  return true;
}

}  // namespace

ClockRegion zero_region(std::size_t clocks) {
  return ClockRegion{std::vector<int>(clocks, 0), std::vector<int>(clocks, 0)};
}

ClockRegion clock_region_of(const std::vector<Rational>& valuation, const MaxConstants& m) {
  ClockRegion r = zero_region(valuation.size());
  std::vector<Rational> fracs;
  for (std::size_t i = 0; i < valuation.size(); ++i) {
    if (valuation[i] > m[i]) {
      r.ipart[i] = m[i] + 1;
      continue;
    }
    Rational fl = floor(valuation[i]);
    r.ipart[i] = static_cast<int>(fl.get_num().get_si());
    Rational f = valuation[i] - fl;
    if (f != 0) fracs.push_back(f);
  }
  std::sort(fracs.begin(), fracs.end());
  fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
  for (std::size_t i = 0; i < valuation.size(); ++i) {
    if (valuation[i] > m[i]) continue;
    Rational f = valuation[i] - floor(valuation[i]);
    if (f == 0) continue;
    r.frac[i] = static_cast<int>(std::lower_bound(fracs.begin(), fracs.end(), f) - fracs.begin()) + 1;
  }
  return r;
}

bool is_above(const ClockRegion& r, std::size_t clock, const MaxConstants& m) { return r.ipart[clock] > m[clock]; }

bool is_unbounded(const ClockRegion& r, const MaxConstants& m) {
  for (std::size_t i = 0; i < r.ipart.size(); ++i)
    if (!is_above(r, i, m)) return false;
  return true;
}

ClockRegion immediate_time_successor(const ClockRegion& r, const MaxConstants& m) {
  if (is_unbounded(r, m)) return r;
  ClockRegion s = r;
  bool any_zero = false;
  for (std::size_t i = 0; i < r.ipart.size(); ++i)
    if (!is_above(r, i, m) && r.frac[i] == 0) any_zero = true;
  if (any_zero) {
    // Clocks with zero fraction leave the integer point and get the new
    // smallest non-zero fraction.
    for (auto& f : s.frac)
      if (f != 0) ++f;
    for (std::size_t i = 0; i < r.ipart.size(); ++i) {
      if (is_above(r, i, m) || r.frac[i] != 0) continue;
      if (r.ipart[i] == m[i])
        s.ipart[i] = m[i] + 1;
      else
        s.frac[i] = 1;
    }
  } else {
    // The clocks with the largest fraction reach the next integer.
    int top = *std::max_element(r.frac.begin(), r.frac.end());
    for (std::size_t i = 0; i < r.ipart.size(); ++i) {
      if (is_above(r, i, m) || r.frac[i] != top) continue;
      s.ipart[i] += 1;
      s.frac[i] = 0;
    }
  }
  normalize(s, m);
  return s;
}

std::vector<ClockRegion> time_successors(const ClockRegion& r, const MaxConstants& m) {
  std::vector<ClockRegion> out{r};
  while (!is_unbounded(out.back(), m)) out.push_back(immediate_time_successor(out.back(), m));
  return out;
}

ClockRegion reset_clocks(const ClockRegion& r, const std::vector<std::size_t>& clocks) {
  ClockRegion s = r;
  for (auto c : clocks) {
    s.ipart[c] = 0;
    s.frac[c] = 0;
  }
  normalize_unbounded(s);
  return s;
}

bool region_satisfies(const ClockRegion& r, std::size_t clock, Rel rel, std::int64_t bound, const MaxConstants& m) {
  if (is_above(r, clock, m)) {
    // bound <= M by construction of M, so the clock exceeds it.
    return rel == Rel::Gt || rel == Rel::Ge;
  }
  std::int64_t n = r.ipart[clock];
  if (r.frac[clock] == 0) return rel_holds(n < bound ? -1 : (n > bound ? 1 : 0), rel);
  // x lies strictly inside (n, n+1).
  switch (rel) {
    case Rel::Lt:
    case Rel::Le:
      return n + 1 <= bound;
    case Rel::Gt:
    case Rel::Ge:
      return n >= bound;
  }
  return false;
}

std::string region_to_string(const ClockRegion& r, const std::vector<std::string>& clocks, const MaxConstants& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < clocks.size(); ++i) {
    if (i) os << ", ";
    if (is_above(r, i, m))
      os << clocks[i] << ">" << m[i];
    else if (r.frac[i] == 0)
      os << clocks[i] << "=" << r.ipart[i];
    else
      os << r.ipart[i] << "<" << clocks[i] << "<" << r.ipart[i] + 1;
  }
  std::map<int, std::vector<std::size_t>> by_rank;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < clocks.size(); ++i)
    if (r.frac[i] != 0) {
      by_rank[r.frac[i]].push_back(i);
      ++inside;
    }
  if (inside >= 2) {
    os << ", ";
    bool first_group = true;
    for (const auto& [rank, cs] : by_rank) {
      if (!first_group) os << "<";
      first_group = false;
      for (std::size_t j = 0; j < cs.size(); ++j) {
        if (j) os << "=";
        os << "frac(" << clocks[cs[j]] << ")";
      }
    }
  }
  return os.str();
}

MaxConstants max_constants(const GuardedMeta& ta) {
  MaxConstants m(ta.clocks.size(), 0);
  auto scan = [&](const Constraint& c) {
    for (const auto& a : c.atoms)
      if (auto ci = ta.clock_index(a.var)) m[*ci] = std::max<int>(m[*ci], static_cast<int>(a.bound));
  };
  for (const auto& l : ta.locations) scan(l.invariant);
  for (const auto& e : ta.edges) scan(e.guard);
  return m;
}

RegionAutomaton build_region_automaton(const GuardedMeta& ta, const RegionOptions& opts) {
  if (!ta.energies.empty()) throw UnsupportedClass("region automaton requires a timed automaton without energies");
  auto init = ta.initial_location();
  if (!init) throw UnsupportedClass("model has no initial location");

  RegionAutomaton ra;
  ra.max_consts = max_constants(ta);
  const auto& m = ra.max_consts;
  ra.nfa.alphabet = ta.actions;

  std::vector<std::vector<std::size_t>> reset_idx(ta.edges.size());
  std::vector<std::vector<std::size_t>> out_edges(ta.locations.size());
  for (std::size_t e = 0; e < ta.edges.size(); ++e) {
    for (const auto& c : ta.edges[e].resets) reset_idx[e].push_back(*ta.clock_index(c));
    out_edges[ta.location_index(ta.edges[e].source)].push_back(e);
  }

  std::map<std::pair<std::size_t, ClockRegion>, std::size_t> ids;
  std::deque<std::size_t> work;
  auto state_of = [&](std::size_t loc, const ClockRegion& r) {
    auto key = std::make_pair(loc, r);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (ids.size() >= opts.max_states)
      throw ResourceError("region automaton exceeds " + std::to_string(opts.max_states) + " states");
    const auto& l = ta.locations[loc];
    std::size_t id = ra.nfa.add_state(l.is_final, l.name + ", " + region_to_string(r, ta.clocks, m));
    ra.location.push_back(loc);
    ra.region.push_back(r);
    ids.emplace(key, id);
    work.push_back(id);
    return id;
  };

  ra.nfa.initial = state_of(*init, zero_region(ta.clocks.size()));
  while (!work.empty()) {
    std::size_t s = work.front();
    work.pop_front();
    std::size_t loc = ra.location[s];
    ClockRegion r = ra.region[s];
    const auto& l = ta.locations[loc];
    if (l.is_final) continue;

    for (auto e : out_edges[loc]) {
      const auto& edge = ta.edges[e];
      if (!region_satisfies_constraint(ta, r, edge.guard, m)) continue;
      ClockRegion r2 = reset_clocks(r, reset_idx[e]);
      std::size_t tgt = ta.location_index(edge.target);
      if (!region_satisfies_constraint(ta, r2, ta.locations[tgt].invariant, m)) continue;
      std::size_t d = state_of(tgt, r2);
      int sym = edge.action ? ra.nfa.symbol_or_add(*edge.action) : kEpsilon;
      ra.nfa.add_transition(s, sym, d);
      ra.transition_edge.push_back(static_cast<long>(e));
    }

    ClockRegion next = immediate_time_successor(r, m);
    if (next == r) {
      ra.nfa.add_transition(s, kEpsilon, s);
      ra.transition_edge.push_back(-1);
    } else if (region_satisfies_constraint(ta, next, l.invariant, m)) {
      std::size_t d = state_of(loc, next);
      ra.nfa.add_transition(s, kEpsilon, d);
      ra.transition_edge.push_back(-1);
    }
  }
  return ra;
}

bool region_path_exists(const RegionAutomaton& ra, const GuardedMeta& ta, const std::vector<std::size_t>& locations,
                        const std::vector<std::vector<Rational>>& clock_valuations) {
  (void)ta;
  std::map<std::pair<std::size_t, ClockRegion>, std::size_t> ids;
  for (std::size_t s = 0; s < ra.nfa.size(); ++s) ids[{ra.location[s], ra.region[s]}] = s;
  auto adj = adjacency(ra.nfa);
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    auto it = ids.find({locations[i], clock_region_of(clock_valuations[i], ra.max_consts)});
    if (it == ids.end()) return false;
    if (prev) {
      std::vector<bool> seen(ra.nfa.size(), false);
      std::deque<std::size_t> q{*prev};
      seen[*prev] = true;
      while (!q.empty() && !seen[it->second]) {
        auto u = q.front();
        q.pop_front();
        for (auto [sym, v] : adj[u])
          if (!seen[v]) {
            seen[v] = true;
            q.push_back(v);
          }
      }
      if (!seen[it->second]) return false;
    } else if (it->second != ra.nfa.initial) {
      return false;
    }
    prev = it->second;
  }
  return true;
}

std::string region_automaton_to_dot(const RegionAutomaton& ra, const GuardedMeta& ta) {
  (void)ta;
  return nfa_to_dot(ra.nfa, "regions");
}

}  // namespace metaopa

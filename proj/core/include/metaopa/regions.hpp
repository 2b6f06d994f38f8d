#pragma once

#include <map>
#include <string>
#include <vector>

#include "metaopa/model.hpp"
#include "metaopa/nfa.hpp"
#include "metaopa/rational.hpp"

namespace metaopa {

using MaxConstants = std::vector<int>;  // per clock, in meta.clocks order

// ipart[i] == M(i) + 1 encodes "above M(i)"; such clocks carry frac 0.
// frac[i] == 0 means zero fractional part, otherwise the dense rank of the
// clock's fractional part among the non-zero ones (1 = smallest).
struct ClockRegion {
  std::vector<int> ipart;
  std::vector<int> frac;

  bool operator==(const ClockRegion&) const = default;
  auto operator<=>(const ClockRegion&) const = default;
};

ClockRegion clock_region_of(const std::vector<Rational>& valuation, const MaxConstants& m);
ClockRegion zero_region(std::size_t clocks);
bool is_above(const ClockRegion& r, std::size_t clock, const MaxConstants& m);
bool is_unbounded(const ClockRegion& r, const MaxConstants& m);
ClockRegion immediate_time_successor(const ClockRegion& r, const MaxConstants& m);
// The chain from r (inclusive) up to and including the unbounded region.
std::vector<ClockRegion> time_successors(const ClockRegion& r, const MaxConstants& m);
ClockRegion reset_clocks(const ClockRegion& r, const std::vector<std::size_t>& clocks);
bool region_satisfies(const ClockRegion& r, std::size_t clock, Rel rel, std::int64_t bound, const MaxConstants& m);
std::string region_to_string(const ClockRegion& r, const std::vector<std::string>& clocks, const MaxConstants& m);

MaxConstants max_constants(const GuardedMeta& ta);

struct RegionOptions {
  std::size_t max_states = 1'000'000;
};

struct RegionAutomaton {
  Nfa nfa;
  std::vector<std::size_t> location;    // per NFA state
  std::vector<ClockRegion> region;      // per NFA state
  std::vector<long> transition_edge;    // per NFA transition: model edge, or -1 for delay
  MaxConstants max_consts;
};

// Reachable part of the region automaton. The input must be a timed
// automaton: no energy variables.
RegionAutomaton build_region_automaton(const GuardedMeta& ta, const RegionOptions& opts = {});

// True when the region states of a concrete run's configurations exist and
// are connected in order in the region automaton.
bool region_path_exists(const RegionAutomaton& ra, const GuardedMeta& ta, const std::vector<std::size_t>& locations,
                        const std::vector<std::vector<Rational>>& clock_valuations);

std::string region_automaton_to_dot(const RegionAutomaton& ra, const GuardedMeta& ta);

}  // namespace metaopa

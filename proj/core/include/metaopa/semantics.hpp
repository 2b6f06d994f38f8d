#pragma once

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "metaopa/model.hpp"
#include "metaopa/rational.hpp"

namespace metaopa {

// Clock and energy vectors follow meta.clocks / meta.energies order.
struct ConcreteState {
  std::size_t location = 0;
  std::vector<Rational> clocks;
  std::vector<Rational> energies;

  bool operator==(const ConcreteState&) const = default;
};

struct Step {
  Rational delay;
  std::size_t edge;
  ConcreteState next;
};

struct Run {
  ConcreteState initial;
  std::vector<Step> steps;

  const ConcreteState& last() const { return steps.empty() ? initial : steps.back().next; }
};

class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ConcreteState initial_state(const GuardedMeta& meta);

// nullopt when satisfied, otherwise the first violated atom.
std::optional<Atom> violated_atom(const GuardedMeta& meta, const Constraint& c, const ConcreteState& s);

ConcreteState delay_successor(const GuardedMeta& meta, const ConcreteState& s, const Rational& d);
ConcreteState discrete_successor(const GuardedMeta& meta, const ConcreteState& s, std::size_t edge);

// A scripted step: wait `delay`, then take an edge picked by index or by
// (action, target) among the edges leaving the current location.
struct ScriptStep {
  Rational delay;
  std::optional<std::size_t> edge;
  std::optional<std::string> action;  // "" selects a silent edge
  std::optional<std::string> target;
};

Run replay(const GuardedMeta& meta, const std::vector<ScriptStep>& script);

struct TimedLetter {
  Rational time;
  std::string action;
  bool operator==(const TimedLetter&) const = default;
};

struct RunStats {
  Rational duration;
  std::vector<Rational> final_energies;
  bool is_private = false;
  bool is_public = false;
  std::vector<TimedLetter> timed_word;
};

RunStats run_stats(const GuardedMeta& meta, const Run& run);
bool visits_private(const GuardedMeta& meta, const Run& run);
bool is_accepting(const GuardedMeta& meta, const Run& run);

using Valuation = std::vector<Rational>;

struct ObservationTrace {
  enum class Kind { DEO, BDEO } kind = Kind::DEO;
  std::vector<Valuation> levels;                // DEO entries
  std::vector<std::vector<Valuation>> buffers;  // bDEO entries
  bool zero_duration = false;

  std::size_t size() const { return kind == Kind::DEO ? levels.size() : buffers.size(); }
  bool operator==(const ObservationTrace&) const = default;
  bool operator<(const ObservationTrace& o) const {
    return std::tie(kind, levels, buffers) < std::tie(o.kind, o.levels, o.buffers);
  }
};

// Valuation after every event whose absolute time is <= t; zero before the
// first event.
Valuation energy_level(const Run& run, const Rational& t);
ObservationTrace deo(const Run& run);

struct TimedValuation {
  Valuation values;
  Rational time;
  bool operator==(const TimedValuation&) const = default;
};

std::vector<TimedValuation> abs_t(const Run& run);
std::vector<TimedValuation> destutter(const std::vector<TimedValuation>& seq);
// Entry for tick tau >= 1. The head of `seq` is the initial valuation and
// serves only as a reference point.
std::vector<Valuation> subseq_proj(const std::vector<TimedValuation>& seq, const Rational& tau);
ObservationTrace bdeo(const Run& run);

// Actual valuation at time t under continuous rates (after all events at t).
Valuation energy_at(const GuardedMeta& meta, const Run& run, const Rational& t);

struct EnumerationBounds {
  std::size_t max_steps = 4;
  Rational grid = Rational(1, 2);
  Rational horizon = 3;
};

// Visits every run with at most max_steps edges whose delays are multiples of
// grid and whose duration is at most horizon, in a fixed order (delays
// ascending, then edge index). The visitor returns false to stop.
void enumerate_runs(const GuardedMeta& meta, const EnumerationBounds& bounds,
                    const std::function<bool(const Run&)>& visit);

struct Observation {
  bool is_private = false;
  std::vector<Rational> final_energies;
  Rational duration;
  auto operator<=>(const Observation& o) const {
    if (auto c = is_private <=> o.is_private; c != 0) return c;
    if (final_energies != o.final_energies) return final_energies < o.final_energies ? std::strong_ordering::less : std::strong_ordering::greater;
    if (duration == o.duration) return std::strong_ordering::equal;
    return duration < o.duration ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  bool operator==(const Observation& o) const = default;
};

// Final-configuration observations of accepting runs within the bounds.
// Memoizes on (state, elapsed time, private-visited) which leaves the set of
// observations unchanged.
std::set<Observation> reachable_observations(const GuardedMeta& meta, const EnumerationBounds& bounds);

std::string run_to_json(const GuardedMeta& meta, const Run& run);
std::string trace_to_string(const ObservationTrace& t);

}  // namespace metaopa

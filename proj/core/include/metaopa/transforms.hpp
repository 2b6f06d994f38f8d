#pragma once

#include <string>
#include <vector>

#include "metaopa/model.hpp"

namespace metaopa {

// Names introduced by the constructions.
inline constexpr const char* kZeroClock = "cz";       // 0-time chains and urgent finals
inline constexpr const char* kTickClock = "ct";       // tick instrumentation
inline constexpr const char* kSwitchClock = "ct_is";  // integer-switch checks and discretization
inline constexpr const char* kTick = "t";
inline constexpr const char* kTickFrac = "t>0";
inline constexpr const char* kFlush = "f";

std::string inc_letter(std::size_t energy, std::size_t energy_count);
std::string dec_letter(std::size_t energy, std::size_t energy_count);

// Energy-guard marker: "?" + relation + bound, e.g. "?>2". Markers stand for
// a single atom over the only energy of an ETA.
std::string guard_marker(Rel rel, std::int64_t bound);
bool is_guard_marker(const std::string& letter);
// Parses a marker; throws std::invalid_argument on malformed input.
std::pair<Rel, std::int64_t> parse_guard_marker(const std::string& letter);

// Keeps only locations that are initial or not private, and drops every edge
// touching a private location.
GuardedMeta remove_private(const GuardedMeta& meta);

// Two copies: "#nV" (no private location visited yet) and "#V". Edges of the
// #nV copy entering a private location are redirected to the #V copy. Only
// #V finals stay final.
GuardedMeta duplicate_visited(const GuardedMeta& meta);

// Largest constant in an energy atom (0 when none).
std::int64_t energy_guard_max(const GuardedMeta& meta);

// Replaces energy atoms by copies tracking each guarded energy in
// {0..M_E, >M_E}. Requires a discrete positive model. Copies are built from
// the initial one by reachability. Unguarded inputs are returned unchanged.
GuardedMeta remove_energy_guards(const GuardedMeta& meta);

struct SplitOptions {
  // Turn energy atoms of guards and target invariants into marker letters
  // instead of rejecting them (single energy only).
  bool guard_markers = false;
};

// Replaces each update by unit inc/dec letters taken in zero time through
// intermediate locations guarded by cz = 0; other edges become silent.
// Energies are removed from the result.
GuardedMeta split_and_relabel(const GuardedMeta& meta, const SplitOptions& opts = {});

// Intermediate locations of the 0-time chains carry a cz atom in their
// invariant.
bool is_intermediate(const Location& l);

enum class TickMode { ET_EN, DE, BDE };

const char* tick_mode_name(TickMode m);

// Adds the tick clock ct, t-loops, 0 < ct guards, urgent finals with exit
// letters per mode, a time-zero prefix copy, and (BDE) an f letter after each
// update block. Input must be energy-free.
GuardedMeta add_tick_instrumentation(const GuardedMeta& ta, TickMode mode);

struct SwitchReport {
  bool is_integer_switching = false;
  bool is_integer_execution_time = false;
  std::string detail;  // first offending location/edge when a flag is false
};

// Region check over the energy-free skeleton with clock ct_is. Rate changes
// into final locations do not count: the run ends there. Energy
// non-negativity is ignored, so a true flag is sound and a false flag may be
// conservative.
SwitchReport integer_switch_checks(const GuardedMeta& meta);

// Adds ct_is, strengthens guards with ct_is < 1 and turns location rates into
// updates on silent tick loops at ct_is = 1. Requires an unguarded IS model.
GuardedMeta integer_switch_to_discrete(const GuardedMeta& meta);

// Drops energies, rates and updates. Requires an unguarded model.
GuardedMeta strip_energies(const GuardedMeta& meta);

}  // namespace metaopa

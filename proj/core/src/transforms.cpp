#include "metaopa/transforms.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "metaopa/errors.hpp"
#include "metaopa/regions.hpp"

namespace metaopa {

namespace {

Constraint conj(Constraint a, const Constraint& b) {
  a.atoms.insert(a.atoms.end(), b.atoms.begin(), b.atoms.end());
  return a;
}

Constraint atom(const std::string& var, Rel rel, std::int64_t bound) { return Constraint{{Atom{var, rel, bound}}}; }

Constraint clock_part(const GuardedMeta& m, const Constraint& c) {
  Constraint out;
  for (const auto& a : c.atoms)
    if (!m.is_energy(a.var)) out.atoms.push_back(a);
  return out;
}

Constraint energy_part(const GuardedMeta& m, const Constraint& c) {
  Constraint out;
  for (const auto& a : c.atoms)
    if (m.is_energy(a.var)) out.atoms.push_back(a);
  return out;
}

bool has_energy_atoms(const GuardedMeta& m) {
  for (const auto& l : m.locations)
    if (!energy_part(m, l.invariant).empty()) return true;
  for (const auto& e : m.edges)
    if (!energy_part(m, e.guard).empty()) return true;
  return false;
}

void add_clock(GuardedMeta& m, const std::string& c) {
  if (!m.is_clock(c)) m.clocks.push_back(c);
}

void add_action(GuardedMeta& m, const std::string& a) {
  if (std::find(m.actions.begin(), m.actions.end(), a) == m.actions.end()) m.actions.push_back(a);
}

bool is_update_letter(const std::string& a) {
  return a == "inc" || a == "dec" || a.rfind("inc_", 0) == 0 || a.rfind("dec_", 0) == 0;
}

int compare(std::int64_t a, std::int64_t b) { return a < b ? -1 : (a > b ? 1 : 0); }

// Atom over an abstract value in {0..M, M+1 = "above M"}.
bool abstract_holds(std::int64_t value, std::int64_t max, Rel rel, std::int64_t bound) {
  if (value > max) return rel == Rel::Gt || rel == Rel::Ge;
  return rel_holds(compare(value, bound), rel);
}

}  // namespace

std::string inc_letter(std::size_t energy, std::size_t energy_count) {
  return energy_count == 1 ? "inc" : "inc_" + std::to_string(energy + 1);
}

std::string dec_letter(std::size_t energy, std::size_t energy_count) {
  return energy_count == 1 ? "dec" : "dec_" + std::to_string(energy + 1);
}

std::string guard_marker(Rel rel, std::int64_t bound) {
  return std::string("?") + rel_symbol(rel) + std::to_string(bound);
}

bool is_guard_marker(const std::string& letter) { return !letter.empty() && letter[0] == '?'; }

std::pair<Rel, std::int64_t> parse_guard_marker(const std::string& letter) {
  if (!is_guard_marker(letter)) throw std::invalid_argument("not a guard marker: " + letter);
  std::string rest = letter.substr(1);
  for (Rel r : {Rel::Le, Rel::Ge, Rel::Lt, Rel::Gt}) {
    std::string sym = rel_symbol(r);
    if (rest.rfind(sym, 0) == 0) {
      std::string num = rest.substr(sym.size());
      std::size_t used = 0;
      std::int64_t v = 0;
      try {
        v = std::stoll(num, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (num.empty() || used != num.size()) break;
      return {r, v};
    }
  }
  throw std::invalid_argument("malformed guard marker: " + letter);
}

GuardedMeta remove_private(const GuardedMeta& meta) {
  GuardedMeta out = meta;
  out.locations.clear();
  out.edges.clear();
  std::set<std::string> priv;
  for (const auto& l : meta.locations)
    if (l.is_private) priv.insert(l.name);
  for (const auto& l : meta.locations)
    if (l.is_initial || !l.is_private) out.locations.push_back(l);
  for (const auto& e : meta.edges)
    if (!priv.count(e.source) && !priv.count(e.target)) out.edges.push_back(e);
  return out;
}

GuardedMeta duplicate_visited(const GuardedMeta& meta) {
  GuardedMeta out = meta;
  out.locations.clear();
  out.edges.clear();
  const std::string nv = "#nV", v = "#V";
  for (bool visited : {false, true}) {
    for (const auto& l : meta.locations) {
      Location c = l;
      c.name = l.name + (visited ? v : nv);
      c.is_initial = l.is_initial && (visited == l.is_private);
      c.is_final = visited && l.is_final;
      out.locations.push_back(c);
    }
  }
  std::set<std::string> priv;
  for (const auto& l : meta.locations)
    if (l.is_private) priv.insert(l.name);
  for (bool visited : {false, true}) {
    for (const auto& e : meta.edges) {
      Edge c = e;
      c.source = e.source + (visited ? v : nv);
      c.target = e.target + ((visited || priv.count(e.target)) ? v : nv);
      out.edges.push_back(c);
    }
  }
  return out;
}

std::int64_t energy_guard_max(const GuardedMeta& meta) {
  std::int64_t m = 0;
  auto scan = [&](const Constraint& c) {
    for (const auto& a : c.atoms)
      if (meta.is_energy(a.var)) m = std::max(m, a.bound);
  };
  for (const auto& l : meta.locations) scan(l.invariant);
  for (const auto& e : meta.edges) scan(e.guard);
  return m;
}

GuardedMeta remove_energy_guards(const GuardedMeta& meta) {
  auto rep = classify(meta);
  if (!rep.is_discrete || !rep.is_positive)
    throw UnsupportedClass("energy-guard removal requires a discrete positive model");
  if (!rep.is_guarded) return meta;

  std::vector<std::string> tracked;
  {
    std::set<std::string> used;
    auto scan = [&](const Constraint& c) {
      for (const auto& a : c.atoms)
        if (meta.is_energy(a.var)) used.insert(a.var);
    };
    for (const auto& l : meta.locations) scan(l.invariant);
    for (const auto& e : meta.edges) scan(e.guard);
    for (const auto& e : meta.energies)
      if (used.count(e)) tracked.push_back(e);
  }
  const std::int64_t max = energy_guard_max(meta);
  using Value = std::vector<std::int64_t>;

  auto value_of = [&](const Value& v, const std::string& energy) {
    auto it = std::find(tracked.begin(), tracked.end(), energy);
    return v[it - tracked.begin()];
  };
  auto energy_ok = [&](const Constraint& c, const Value& v) {
    for (const auto& a : c.atoms)
      if (meta.is_energy(a.var) && !abstract_holds(value_of(v, a.var), max, a.rel, a.bound)) return false;
    return true;
  };
  auto copy_name = [&](const std::string& loc, const Value& v) {
    std::string s = loc + "#[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += v[i] > max ? ">" + std::to_string(max) : std::to_string(v[i]);
    }
    return s + "]";
  };

  GuardedMeta out = meta;
  out.locations.clear();
  out.edges.clear();
  std::map<std::pair<std::size_t, Value>, std::string> names;
  std::deque<std::pair<std::size_t, Value>> work;
  auto visit = [&](std::size_t loc, const Value& v) {
    auto key = std::make_pair(loc, v);
    auto it = names.find(key);
    if (it != names.end()) return it->second;
    const auto& l = meta.locations[loc];
    Location c = l;
    c.name = copy_name(l.name, v);
    c.invariant = clock_part(meta, l.invariant);
    c.is_initial = false;
    out.locations.push_back(c);
    names.emplace(key, c.name);
    work.push_back(key);
    return c.name;
  };

  auto init = meta.initial_location();
  if (!init) throw UnsupportedClass("model has no initial location");
  visit(*init, Value(tracked.size(), 0));
  out.locations.front().is_initial = true;

  while (!work.empty()) {
    auto [loc, v] = work.front();
    work.pop_front();
    std::string src = names.at({loc, v});
    for (auto ei : meta.outgoing(loc)) {
      const auto& e = meta.edges[ei];
      if (!energy_ok(e.guard, v)) continue;
      Value w = v;
      for (std::size_t i = 0; i < tracked.size(); ++i) w[i] = std::min(max + 1, w[i] + update_of(e, tracked[i]));
      std::size_t tgt = meta.location_index(e.target);
      if (!energy_ok(meta.locations[tgt].invariant, w)) continue;
      Edge c = e;
      c.source = src;
      c.guard = clock_part(meta, e.guard);
      c.target = visit(tgt, w);
      out.edges.push_back(c);
    }
  }
  return out;
}

bool is_intermediate(const Location& l) {
  for (const auto& a : l.invariant.atoms)
    if (a.var == kZeroClock) return true;
  return false;
}

GuardedMeta split_and_relabel(const GuardedMeta& meta, const SplitOptions& opts) {
  auto rep = classify(meta);
  if (!rep.is_discrete) throw UnsupportedClass("update splitting requires a discrete model (all rates zero)");
  if (rep.is_guarded) {
    if (!opts.guard_markers) throw UnsupportedClass("energy guards must be removed before update splitting");
    if (meta.energies.size() != 1) throw UnsupportedClass("guard markers require exactly one energy variable");
  }
  const std::size_t n = meta.energies.size();

  GuardedMeta out;
  out.clocks = meta.clocks;
  for (const auto& l : meta.locations) {
    Location c = l;
    c.invariant = clock_part(meta, l.invariant);
    c.rates.clear();
    out.locations.push_back(c);
  }

  std::set<std::string> used;
  bool chains = false;
  for (std::size_t k = 0; k < meta.edges.size(); ++k) {
    const auto& e = meta.edges[k];
    std::vector<std::string> letters;
    for (const auto& a : energy_part(meta, e.guard).atoms) letters.push_back(guard_marker(a.rel, a.bound));
    for (std::size_t i = 0; i < n; ++i) {
      std::int64_t u = update_of(e, meta.energies[i]);
      for (std::int64_t j = 0; j < std::abs(u); ++j) letters.push_back(u > 0 ? inc_letter(i, n) : dec_letter(i, n));
    }
    const auto& tgt = meta.locations[meta.location_index(e.target)];
    for (const auto& a : energy_part(meta, tgt.invariant).atoms) letters.push_back(guard_marker(a.rel, a.bound));
    used.insert(letters.begin(), letters.end());

    if (letters.size() <= 1) {
      Edge c{e.source, clock_part(meta, e.guard), std::nullopt, e.resets, {}, e.target};
      if (!letters.empty()) c.action = letters[0];
      out.edges.push_back(c);
      continue;
    }
    chains = true;
    std::string prev = e.source;
    for (std::size_t j = 0; j < letters.size(); ++j) {
      bool last = j + 1 == letters.size();
      std::string next = last ? e.target : e.source + "#u" + std::to_string(k) + "." + std::to_string(j + 1);
      if (!last) {
        Location mid;
        mid.name = next;
        mid.invariant = equals(kZeroClock, 0);
        out.locations.push_back(mid);
      }
      Edge c;
      c.source = prev;
      c.action = letters[j];
      c.target = next;
      if (j == 0) {
        c.guard = clock_part(meta, e.guard);
        c.resets = e.resets;
        c.resets.insert(kZeroClock);
      } else {
        c.guard = equals(kZeroClock, 0);
      }
      out.edges.push_back(c);
      prev = next;
    }
  }
  if (chains) add_clock(out, kZeroClock);

  for (std::size_t i = 0; i < n; ++i)
    if (used.count(inc_letter(i, n))) out.actions.push_back(inc_letter(i, n));
  for (std::size_t i = 0; i < n; ++i)
    if (used.count(dec_letter(i, n))) out.actions.push_back(dec_letter(i, n));
  for (const auto& a : used)
    if (is_guard_marker(a)) out.actions.push_back(a);
  return out;
}

const char* tick_mode_name(TickMode m) {
  switch (m) {
    case TickMode::ET_EN:
      return "et-en";
    case TickMode::DE:
      return "de";
    case TickMode::BDE:
      return "bde";
  }
  return "?";
}

namespace {

// Inserts an f edge after every update block. The new locations are 0-time
// intermediates.
GuardedMeta insert_flushes(const GuardedMeta& ta) {
  GuardedMeta out = ta;
  out.edges.clear();
  add_clock(out, kZeroClock);
  add_action(out, kFlush);
  std::set<std::string> intermediate;
  for (const auto& l : ta.locations)
    if (is_intermediate(l)) intermediate.insert(l.name);
  for (std::size_t k = 0; k < ta.edges.size(); ++k) {
    Edge e = ta.edges[k];
    if (!e.action || !is_update_letter(*e.action) || intermediate.count(e.target)) {
      out.edges.push_back(e);
      continue;
    }
    Location flush;
    flush.name = e.target + "#f" + std::to_string(k);
    flush.invariant = equals(kZeroClock, 0);
    out.locations.push_back(flush);
    Edge f{flush.name, equals(kZeroClock, 0), std::string(kFlush), {}, {}, e.target};
    e.target = flush.name;
    e.resets.insert(kZeroClock);
    out.edges.push_back(e);
    out.edges.push_back(f);
  }
  return out;
}

}  // namespace

GuardedMeta add_tick_instrumentation(const GuardedMeta& input, TickMode mode) {
  if (!input.energies.empty()) throw UnsupportedClass("tick instrumentation expects an energy-free automaton");
  const GuardedMeta base = mode == TickMode::BDE ? insert_flushes(input) : input;
  const std::string exit_suffix = "#F";

  GuardedMeta out;
  out.actions = base.actions;
  out.clocks = base.clocks;
  add_clock(out, kZeroClock);
  add_clock(out, kTickClock);
  add_action(out, kTick);
  if (mode == TickMode::ET_EN) add_action(out, kTickFrac);

  std::set<std::string> finals;
  for (const auto& l : base.locations)
    if (l.is_final) finals.insert(l.name);

  // Main copy.
  for (const auto& l : base.locations) {
    Location c = l;
    c.is_initial = false;
    c.invariant = conj(c.invariant, atom(kTickClock, Rel::Le, 1));
    if (l.is_final) {
      c.is_final = false;
      c.invariant = conj(c.invariant, equals(kZeroClock, 0));
    }
    out.locations.push_back(c);
  }
  for (const auto& l : base.locations) {
    if (!l.is_final) continue;
    Location f;
    f.name = l.name + exit_suffix;
    f.labels = l.labels;
    f.is_final = true;
    out.locations.push_back(f);
  }
  std::set<std::string> intermediate;
  for (const auto& l : base.locations)
    if (is_intermediate(l)) intermediate.insert(l.name);
  for (const auto& e : base.edges) {
    Edge c = e;
    if (!intermediate.count(e.source)) c.guard = conj(c.guard, atom(kTickClock, Rel::Gt, 0));
    if (finals.count(e.target)) c.resets.insert(kZeroClock);
    out.edges.push_back(c);
  }
  for (const auto& l : base.locations) {
    if (l.is_final || is_intermediate(l)) continue;
    out.edges.push_back(Edge{l.name, equals(kTickClock, 1), std::string(kTick), {kTickClock}, {}, l.name});
  }
  const std::string frac_letter = mode == TickMode::ET_EN ? kTickFrac : kTick;
  for (const auto& l : base.locations) {
    if (!l.is_final) continue;
    out.edges.push_back(Edge{l.name, equals(kTickClock, 1), std::string(kTick), {}, {}, l.name + exit_suffix});
    Constraint frac = conj(atom(kTickClock, Rel::Gt, 0), atom(kTickClock, Rel::Lt, 1));
    out.edges.push_back(Edge{l.name, frac, frac_letter, {}, {}, l.name + exit_suffix});
  }

  // Time-zero prefix copies. The observed copy emits letters and joins the
  // main copy; in DE/BDE modes a zero-duration run has an empty observation,
  // so its accepting runs go through a silent copy instead.
  auto zero_copy = [&](const std::string& suffix, bool silent, bool accepting, bool joins) {
    for (const auto& l : base.locations) {
      Location c = l;
      c.name = l.name + suffix;
      c.is_initial = false;
      c.is_final = false;
      c.invariant = conj(c.invariant, atom(kTickClock, Rel::Le, 0));
      out.locations.push_back(c);
    }
    for (const auto& e : base.edges) {
      if (!accepting && finals.count(e.target)) continue;
      Edge c = e;
      c.source = e.source + suffix;
      c.target = e.target + suffix;
      c.guard = conj(c.guard, atom(kTickClock, Rel::Le, 0));
      if (silent && c.action && (is_update_letter(*c.action) || *c.action == kFlush)) c.action.reset();
      out.edges.push_back(c);
    }
    for (const auto& l : base.locations) {
      if (l.is_final) {
        if (accepting)
          out.edges.push_back(Edge{l.name + suffix, {}, std::nullopt, {}, {}, l.name + exit_suffix});
      } else if (joins && !is_intermediate(l)) {
        out.edges.push_back(Edge{l.name + suffix, atom(kTickClock, Rel::Le, 0), std::nullopt, {}, {}, l.name});
      }
    }
  };

  auto init = base.initial_location();
  if (!init) throw UnsupportedClass("model has no initial location");
  const std::string init_name = base.locations[*init].name;
  const std::size_t zero_start = out.locations.size();
  if (mode == TickMode::ET_EN) {
    zero_copy("#0", false, true, true);
  } else {
    zero_copy("#0", false, false, true);
    zero_copy("#0s", true, true, false);
    out.edges.push_back(
        Edge{init_name + "#0", atom(kTickClock, Rel::Le, 0), std::nullopt, {}, {}, init_name + "#0s"});
  }
  out.locations[zero_start + *init].is_initial = true;
  return out;
}

GuardedMeta strip_energies(const GuardedMeta& meta) {
  if (has_energy_atoms(meta)) throw UnsupportedClass("cannot strip energies from a guarded model");
  GuardedMeta out = meta;
  out.energies.clear();
  for (auto& l : out.locations) l.rates.clear();
  for (auto& e : out.edges) e.updates.clear();
  return out;
}

SwitchReport integer_switch_checks(const GuardedMeta& meta) {
  if (has_energy_atoms(meta))
    throw UnsupportedClass("integer-switch checks are only available for models without energy guards");
  GuardedMeta sk = strip_energies(meta);
  add_clock(sk, kSwitchClock);
  const std::size_t original_edges = sk.edges.size();
  for (auto& l : sk.locations) l.invariant = conj(l.invariant, atom(kSwitchClock, Rel::Le, 1));
  for (const auto& l : meta.locations)
    if (!l.is_final)
      sk.edges.push_back(Edge{l.name, equals(kSwitchClock, 1), std::nullopt, {kSwitchClock}, {}, l.name});

  RegionAutomaton ra = build_region_automaton(sk);
  const std::size_t tick = *sk.clock_index(kSwitchClock);

  SwitchReport rep{true, true, {}};
  for (std::size_t i = 0; i < ra.nfa.transitions.size(); ++i) {
    long ei = ra.transition_edge[i];
    if (ei < 0 || static_cast<std::size_t>(ei) >= original_edges) continue;
    const auto& tr = ra.nfa.transitions[i];
    if (ra.region[tr.src].frac[tick] == 0) continue;
    const auto& e = meta.edges[ei];
    const auto& src = meta.locations[meta.location_index(e.source)];
    const auto& tgt = meta.locations[meta.location_index(e.target)];
    if (tgt.is_final) {
      if (rep.is_integer_execution_time)
        rep.detail += (rep.detail.empty() ? "" : "; ") + std::string("final '") + tgt.name +
                      "' reachable at a non-integer time";
      rep.is_integer_execution_time = false;
      continue;
    }
    bool changes = false;
    for (const auto& en : meta.energies) changes |= meta.rate(src, en) != meta.rate(tgt, en);
    if (changes) {
      if (rep.is_integer_switching)
        rep.detail += (rep.detail.empty() ? "" : "; ") + std::string("rate change on edge ") + e.source + " -> " +
                      e.target + " at a non-integer time";
      rep.is_integer_switching = false;
    }
  }
  return rep;
}

GuardedMeta integer_switch_to_discrete(const GuardedMeta& meta) {
  auto rep = integer_switch_checks(meta);
  if (!rep.is_integer_switching) throw UnsupportedClass("model is not integer-switching: " + rep.detail);
  GuardedMeta out = meta;
  add_clock(out, kSwitchClock);
  for (auto& e : out.edges) e.guard = conj(e.guard, atom(kSwitchClock, Rel::Lt, 1));
  for (auto& l : out.locations) {
    l.invariant = conj(l.invariant, atom(kSwitchClock, Rel::Le, 1));
    if (!l.is_final) {
      IntMap updates;
      for (const auto& en : meta.energies)
        if (auto r = meta.rate(l, en); r != 0) updates[en] = r;
      out.edges.push_back(Edge{l.name, equals(kSwitchClock, 1), std::nullopt, {kSwitchClock}, updates, l.name});
    }
    l.rates.clear();
  }
  return out;
}

}  // namespace metaopa

#include "metaopa/semantics.hpp"

#include <map>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

namespace metaopa {

using nlohmann::json;

ConcreteState initial_state(const GuardedMeta& meta) {
  auto init = meta.initial_location();
  if (!init) throw SemanticsError("model has no initial location");
  ConcreteState s;
  s.location = *init;
  s.clocks.assign(meta.clocks.size(), Rational(0));
  s.energies.assign(meta.energies.size(), Rational(0));
  return s;
}

namespace {

const Rational& value_of(const GuardedMeta& meta, const ConcreteState& s, const std::string& var) {
  if (auto c = meta.clock_index(var)) return s.clocks[*c];
  if (auto e = meta.energy_index(var)) return s.energies[*e];
  throw SemanticsError("undeclared variable '" + var + "'");
}

std::optional<std::string> negative_energy(const GuardedMeta& meta, const ConcreteState& s) {
  for (std::size_t i = 0; i < s.energies.size(); ++i)
    if (s.energies[i] < 0) return meta.energies[i] + " = " + to_string(s.energies[i]) + " < 0";
  return std::nullopt;
}

}  // namespace

std::optional<Atom> violated_atom(const GuardedMeta& meta, const Constraint& c, const ConcreteState& s) {
  for (const auto& a : c.atoms) {
    const Rational& v = value_of(meta, s, a.var);
    int cmp = ::cmp(v, Rational(a.bound));
    if (!rel_holds(cmp < 0 ? -1 : (cmp > 0 ? 1 : 0), a.rel)) return a;
  }
  return std::nullopt;
}

// Every atom and the non-negativity constraints are affine in the delay, so
// checking both endpoints covers the whole interval.
ConcreteState delay_successor(const GuardedMeta& meta, const ConcreteState& s, const Rational& d) {
  if (d < 0) throw SemanticsError("negative delay " + to_string(d));
  const auto& loc = meta.locations.at(s.location);
  if (auto a = violated_atom(meta, loc.invariant, s))
    throw SemanticsError("state outside invariant of '" + loc.name + "': " + to_string(*a));
  if (auto neg = negative_energy(meta, s)) throw SemanticsError("negative energy: " + *neg);
  ConcreteState n = s;
  for (auto& c : n.clocks) c += d;
  for (std::size_t i = 0; i < n.energies.size(); ++i)
    n.energies[i] += Rational(meta.rate(loc, meta.energies[i])) * d;
  if (auto a = violated_atom(meta, loc.invariant, n))
    throw SemanticsError("invariant of '" + loc.name + "' violated after delay " + to_string(d) + ": " +
                         to_string(*a));
  if (auto neg = negative_energy(meta, n))
    throw SemanticsError("energy becomes negative during delay " + to_string(d) + ": " + *neg);
  return n;
}

ConcreteState discrete_successor(const GuardedMeta& meta, const ConcreteState& s, std::size_t edge) {
  const auto& e = meta.edges.at(edge);
  const auto& src = meta.locations.at(s.location);
  if (e.source != src.name)
    throw SemanticsError("edge " + std::to_string(edge) + " does not leave '" + src.name + "'");
  if (auto a = violated_atom(meta, src.invariant, s))
    throw SemanticsError("state outside invariant of '" + src.name + "': " + to_string(*a));
  if (auto a = violated_atom(meta, e.guard, s)) throw SemanticsError("guard unsatisfied: " + to_string(*a));
  ConcreteState n = s;
  n.location = meta.location_index(e.target);
  for (const auto& r : e.resets) n.clocks[*meta.clock_index(r)] = 0;
  for (const auto& [v, u] : e.updates) n.energies[*meta.energy_index(v)] += Rational(u);
  if (auto a = violated_atom(meta, meta.locations[n.location].invariant, n))
    throw SemanticsError("target invariant of '" + e.target + "' violated: " + to_string(*a));
  if (auto neg = negative_energy(meta, n)) throw SemanticsError("negative energy after update: " + *neg);
  return n;
}

Run replay(const GuardedMeta& meta, const std::vector<ScriptStep>& script) {
  Run run;
  run.initial = initial_state(meta);
  ConcreteState cur = run.initial;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& st = script[i];
    std::string where = "step " + std::to_string(i) + ": ";
    std::size_t edge;
    if (st.edge) {
      edge = *st.edge;
      if (edge >= meta.edges.size()) throw SemanticsError(where + "no edge with index " + std::to_string(edge));
    } else {
      std::vector<std::size_t> match;
      for (auto k : meta.outgoing(cur.location)) {
        const auto& e = meta.edges[k];
        std::string act = e.action.value_or("");
        if (st.action && *st.action != act) continue;
        if (st.target && *st.target != e.target) continue;
        match.push_back(k);
      }
      if (match.empty())
        throw SemanticsError(where + "no matching edge leaves '" + meta.locations[cur.location].name + "'");
      if (match.size() > 1)
        throw SemanticsError(where + "ambiguous edge choice from '" + meta.locations[cur.location].name +
                             "'; give a target or an edge index");
      edge = match.front();
    }
    try {
      ConcreteState mid = delay_successor(meta, cur, st.delay);
      cur = discrete_successor(meta, mid, edge);
    } catch (const SemanticsError& e) {
      throw SemanticsError(where + e.what());
    }
    run.steps.push_back(Step{st.delay, edge, cur});
  }
  return run;
}

bool visits_private(const GuardedMeta& meta, const Run& run) {
  if (meta.locations[run.initial.location].is_private) return true;
  for (const auto& s : run.steps)
    if (meta.locations[s.next.location].is_private) return true;
  return false;
}

bool is_accepting(const GuardedMeta& meta, const Run& run) { return meta.locations[run.last().location].is_final; }

RunStats run_stats(const GuardedMeta& meta, const Run& run) {
  RunStats st;
  st.duration = 0;
  for (const auto& s : run.steps) {
    st.duration += s.delay;
    const auto& e = meta.edges.at(s.edge);
    if (e.action) st.timed_word.push_back({st.duration, *e.action});
  }
  st.final_energies = run.last().energies;
  bool acc = is_accepting(meta, run);
  bool priv = visits_private(meta, run);
  st.is_private = acc && priv;
  st.is_public = acc && !priv;
  return st;
}

Valuation energy_level(const Run& run, const Rational& t) {
  Valuation v = run.initial.energies;
  Rational time = 0;
  for (const auto& s : run.steps) {
    time += s.delay;
    if (time > t) break;
    v = s.next.energies;
  }
  return v;
}

namespace {

Rational duration_of(const Run& run) {
  Rational d = 0;
  for (const auto& s : run.steps) d += s.delay;
  return d;
}

}  // namespace

ObservationTrace deo(const Run& run) {
  ObservationTrace tr;
  tr.kind = ObservationTrace::Kind::DEO;
  Rational d = duration_of(run);
  tr.zero_duration = d == 0;
  long k = ceil(d).get_num().get_si();
  for (long tau = 1; tau <= k; ++tau) tr.levels.push_back(energy_level(run, Rational(tau)));
  return tr;
}

std::vector<TimedValuation> abs_t(const Run& run) {
  std::vector<TimedValuation> out;
  Rational time = 0;
  out.push_back({run.initial.energies, time});
  for (const auto& s : run.steps) {
    time += s.delay;
    out.push_back({s.next.energies, time});
  }
  return out;
}

std::vector<TimedValuation> destutter(const std::vector<TimedValuation>& seq) {
  std::vector<TimedValuation> out;
  for (const auto& q : seq)
    if (out.empty() || out.back().values != q.values) out.push_back(q);
  return out;
}

std::vector<Valuation> subseq_proj(const std::vector<TimedValuation>& seq, const Rational& tau) {
  std::vector<Valuation> out;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    const auto& t = seq[i].time;
    bool inside = tau == 1 ? (t >= 0 && t <= 1) : (t > tau - 1 && t <= tau);
    if (inside) out.push_back(seq[i].values);
  }
  return out;
}

ObservationTrace bdeo(const Run& run) {
  ObservationTrace tr;
  tr.kind = ObservationTrace::Kind::BDEO;
  Rational d = duration_of(run);
  tr.zero_duration = d == 0;
  auto seq = destutter(abs_t(run));
  long k = ceil(d).get_num().get_si();
  for (long tau = 1; tau <= k; ++tau) tr.buffers.push_back(subseq_proj(seq, Rational(tau)));
  return tr;
}

Valuation energy_at(const GuardedMeta& meta, const Run& run, const Rational& t) {
  const ConcreteState* cur = &run.initial;
  Rational time = 0;
  for (const auto& s : run.steps) {
    if (time + s.delay > t) break;
    time += s.delay;
    cur = &s.next;
  }
  Valuation v = cur->energies;
  const auto& loc = meta.locations[cur->location];
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += Rational(meta.rate(loc, meta.energies[i])) * (t - time);
  return v;
}

// ---------------------------------------------------------------------------

namespace {

struct Enumerator {
  const GuardedMeta& meta;
  const EnumerationBounds& b;
  const std::function<bool(const Run&)>& visit;
  std::vector<std::vector<std::size_t>> out;
  Run run;
  bool stopped = false;

  void go(const Rational& time, std::size_t left) {
    if (stopped) return;
    if (!visit(run)) {
      stopped = true;
      return;
    }
    if (left == 0) return;
    const ConcreteState cur = run.last();
    if (meta.locations[cur.location].is_final) return;
    for (Rational d = 0; time + d <= b.horizon; d += b.grid) {
      ConcreteState mid;
      try {
        mid = delay_successor(meta, cur, d);
      } catch (const SemanticsError&) {
        break;  // the set of admissible delays is an interval
      }
      for (auto k : out[cur.location]) {
        ConcreteState nxt;
        try {
          nxt = discrete_successor(meta, mid, k);
        } catch (const SemanticsError&) {
          continue;
        }
        run.steps.push_back(Step{d, k, std::move(nxt)});
        go(time + d, left - 1);
        run.steps.pop_back();
        if (stopped) return;
      }
    }
  }
};

}  // namespace

void enumerate_runs(const GuardedMeta& meta, const EnumerationBounds& bounds,
                    const std::function<bool(const Run&)>& visit) {
  if (bounds.grid <= 0) throw SemanticsError("delay grid must be positive");
  Enumerator en{meta, bounds, visit, {}, {}, false};
  for (std::size_t l = 0; l < meta.locations.size(); ++l) en.out.push_back(meta.outgoing(l));
  en.run.initial = initial_state(meta);
  en.go(Rational(0), bounds.max_steps);
}

namespace {

std::string state_key(const ConcreteState& s, const Rational& time, bool priv) {
  std::string k = std::to_string(s.location);
  k += priv ? "|p|" : "|n|";
  k += time.get_str();
  for (const auto& c : s.clocks) k += "," + c.get_str();
  k += ";";
  for (const auto& e : s.energies) k += "," + e.get_str();
  return k;
}

struct ObservationSearch {
  const GuardedMeta& meta;
  const EnumerationBounds& b;
  std::vector<std::vector<std::size_t>> out;
  std::unordered_map<std::string, std::size_t> best;
  std::set<Observation> found;

  void go(const ConcreteState& cur, const Rational& time, bool priv, std::size_t left) {
    const auto& loc = meta.locations[cur.location];
    priv = priv || loc.is_private;
    if (loc.is_final) {
      found.insert(Observation{priv, cur.energies, time});
      return;
    }
    auto key = state_key(cur, time, priv);
    auto it = best.find(key);
    if (it != best.end() && it->second >= left) return;
    best[key] = left;
    if (left == 0) return;
    for (Rational d = 0; time + d <= b.horizon; d += b.grid) {
      ConcreteState mid;
      try {
        mid = delay_successor(meta, cur, d);
      } catch (const SemanticsError&) {
        break;
      }
      for (auto k : out[cur.location]) {
        try {
          go(discrete_successor(meta, mid, k), time + d, priv, left - 1);
        } catch (const SemanticsError&) {
        }
      }
    }
  }
};

}  // namespace

std::set<Observation> reachable_observations(const GuardedMeta& meta, const EnumerationBounds& bounds) {
  if (bounds.grid <= 0) throw SemanticsError("delay grid must be positive");
  ObservationSearch s{meta, bounds, {}, {}, {}};
  for (std::size_t l = 0; l < meta.locations.size(); ++l) s.out.push_back(meta.outgoing(l));
  s.go(initial_state(meta), Rational(0), false, bounds.max_steps);
  return s.found;
}

// ---------------------------------------------------------------------------

namespace {

json state_json(const GuardedMeta& meta, const ConcreteState& s) {
  json j;
  j["location"] = meta.locations[s.location].name;
  j["clocks"] = json::object();
  for (std::size_t i = 0; i < s.clocks.size(); ++i) j["clocks"][meta.clocks[i]] = to_string(s.clocks[i]);
  j["energies"] = json::object();
  for (std::size_t i = 0; i < s.energies.size(); ++i) j["energies"][meta.energies[i]] = to_string(s.energies[i]);
  return j;
}

std::string valuation_text(const Valuation& v) {
  if (v.size() == 1) return to_string(v[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + ")";
}

}  // namespace

std::string run_to_json(const GuardedMeta& meta, const Run& run) {
  json j;
  j["initial"] = state_json(meta, run.initial);
  j["steps"] = json::array();
  for (const auto& s : run.steps) {
    json sj;
    sj["delay"] = to_string(s.delay);
    sj["edge"] = s.edge;
    const auto& e = meta.edges[s.edge];
    sj["action"] = e.action ? json(*e.action) : json();
    sj["state"] = state_json(meta, s.next);
    j["steps"].push_back(sj);
  }
  return j.dump(2);
}

std::string trace_to_string(const ObservationTrace& t) {
  std::string s;
  if (t.kind == ObservationTrace::Kind::DEO) {
    for (std::size_t i = 0; i < t.levels.size(); ++i) s += (i ? ", " : "") + valuation_text(t.levels[i]);
    return s;
  }
  for (std::size_t i = 0; i < t.buffers.size(); ++i) {
    if (i) s += ", ";
    const auto& b = t.buffers[i];
    if (b.empty()) {
      s += "ε";
      continue;
    }
    s += "(";
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (k) s += ", ";
      s += b[k].size() == 1 ? to_string(b[k][0]) : valuation_text(b[k]);
    }
    s += ")";
  }
  return s;
}

}  // namespace metaopa

#include <map>
#include <set>

#include "metaopa/deciders.hpp"
#include "metaopa/transforms.hpp"

namespace metaopa {

using nlohmann::json;

namespace {

// Run searches behind an observation match stop after this many visits.
constexpr std::size_t kRunSearchVisits = 500000;

bool same_observation(Property p, const Observation& a, const Observation& b) {
  if (a.final_energies != b.final_energies) return false;
  return p == Property::EN || a.duration == b.duration;
}

json observation_json(const Observation& o, bool timed) {
  json j{{"final_energies", to_strings(o.final_energies)}};
  if (timed) j["duration"] = to_string(o.duration);
  return j;
}

std::optional<json> observation_witness(const GuardedMeta& meta, Property p, const EnumerationBounds& bounds) {
  auto obs = reachable_observations(meta, bounds);
  std::optional<Observation> hit;
  for (const auto& a : obs) {
    if (!a.is_private) continue;
    for (const auto& b : obs)
      if (!b.is_private && same_observation(p, a, b)) {
        hit = a;
        break;
      }
    if (hit) break;
  }
  if (!hit) return std::nullopt;

  json w{{"kind", "runs"}, {"observation", observation_json(*hit, p == Property::ET_EN)}};
  std::size_t visits = 0;
  enumerate_runs(meta, bounds, [&](const Run& run) {
    if (++visits > kRunSearchVisits) return false;
    if (!is_accepting(meta, run)) return true;
    auto st = run_stats(meta, run);
    Observation o{st.is_private, st.final_energies, st.duration};
    if (!same_observation(p, o, *hit)) return true;
    const char* key = st.is_private ? "private_run" : "public_run";
    if (!w.contains(key)) w[key] = json::parse(run_to_json(meta, run));
    return !(w.contains("private_run") && w.contains("public_run"));
  });
  return w;
}

std::optional<json> trace_witness(const GuardedMeta& meta, Property p, const EnumerationBounds& bounds) {
  struct Pair {
    std::optional<std::string> priv, pub;
  };
  std::map<ObservationTrace, Pair> seen;
  std::optional<json> found;
  enumerate_runs(meta, bounds, [&](const Run& run) {
    if (!is_accepting(meta, run)) return true;
    ObservationTrace t = p == Property::DE ? deo(run) : bdeo(run);
    auto& slot = seen[t];
    auto& side = visits_private(meta, run) ? slot.priv : slot.pub;
    if (!side) side = run_to_json(meta, run);
    if (slot.priv && slot.pub) {
      found = json{{"kind", "runs"},
                   {"observation", trace_to_string(t)},
                   {"private_run", json::parse(*slot.priv)},
                   {"public_run", json::parse(*slot.pub)}};
      return false;
    }
    return true;
  });
  return found;
}

// Observation vector in the layout of a Parikh counterexample: final
// energies, then #t and t>0 when the duration is observed.
Vec observation_vector(const Observation& o, bool timed) {
  Vec v;
  for (const auto& e : o.final_energies) v.push_back(floor(e).get_num().get_si());
  if (timed) {
    v.push_back(floor(o.duration).get_num().get_si());
    v.push_back(is_integer(o.duration) ? 0 : 1);
  }
  return v;
}

bool integral(const Observation& o) {
  for (const auto& e : o.final_energies)
    if (!is_integer(e)) return false;
  return true;
}

}  // namespace

std::optional<json> bounded_exists_witness(const GuardedMeta& meta, Property p, const EnumerationBounds& bounds) {
  if (p == Property::EN || p == Property::ET_EN) return observation_witness(meta, p, bounds);
  return trace_witness(meta, p, bounds);
}

OracleReport oracle_compare(const GuardedMeta& meta, const OpacityQuery& q, const EnumerationBounds& bounds,
                            const DeciderOptions& opts) {
  OracleReport rep;
  rep.verdict = decide(meta, q, opts);
  const Status st = rep.verdict.status;
  const bool exists = q.variant == Variant::EXISTS;

  if (st == Status::UNSUPPORTED || st == Status::RESOURCE) {
    rep.agreement = "inconclusive";
    rep.detail = std::string("decider returned ") + to_string(st);
    return rep;
  }

  if (exists) {
    auto w = bounded_exists_witness(meta, q.property, bounds);
    rep.oracle = w ? *w : json(nullptr);
    if (w && st == Status::FAILS) {
      rep.agreement = "disagree";
      rep.detail = "the bounded search found a private and a public run with equal observations";
    } else if (w) {
      rep.agreement = "agree";
      rep.detail = "the bounded search found a witness";
    } else if (st == Status::FAILS) {
      rep.agreement = "agree";
      rep.detail = "no witness within the bounds";
    } else {
      rep.agreement = "inconclusive";
      rep.detail = "no witness within the bounds; the symbolic witness may need longer runs";
    }
    return rep;
  }

  if (q.property == Property::DE || q.property == Property::BDE) {
    rep.agreement = "inconclusive";
    rep.detail = "word verdicts for the weak and full variants are not replayed by the oracle";
    return rep;
  }

  const bool timed = q.property == Property::ET_EN;
  auto obs = reachable_observations(meta, bounds);
  std::set<Vec> priv, pub;
  json listed = json::array();
  for (const auto& o : obs) {
    if (!integral(o)) continue;
    (o.is_private ? priv : pub).insert(observation_vector(o, timed));
    json entry = observation_json(o, timed);
    entry["side"] = o.is_private ? "private" : "public";
    listed.push_back(entry);
  }
  rep.oracle = json{{"observations", listed}};

  if (st == Status::FAILS) {
    const auto& wit = rep.verdict.witness;
    if (!wit.is_object() || !wit.contains("vector")) {
      rep.agreement = "inconclusive";
      rep.detail = "no counterexample vector to replay";
      return rep;
    }
    Vec cex = wit["vector"].get<Vec>();
    const bool on_private = wit.value("side", "") == "private";
    const auto& own = on_private ? priv : pub;
    const auto& other = on_private ? pub : priv;
    if (other.count(cex)) {
      rep.agreement = "disagree";
      rep.detail = "the counterexample is observed on the other side within the bounds";
    } else if (own.count(cex)) {
      rep.agreement = "agree";
      rep.detail = "the counterexample is observed on its side and not on the other within the bounds";
    } else {
      rep.agreement = "inconclusive";
      rep.detail = "the counterexample is not reached within the bounds";
    }
    return rep;
  }

  // HOLDS for weak/full: bounded observations can only look consistent.
  bool consistent = true;
  for (const auto& v : priv) consistent &= pub.count(v) > 0;
  if (q.variant == Variant::FULL)
    for (const auto& v : pub) consistent &= priv.count(v) > 0;
  rep.agreement = consistent ? "agree" : "inconclusive";
  rep.detail = consistent ? "bounded observation sets match"
                          : "bounded observation sets differ; the matching runs may lie beyond the bounds";
  return rep;
}

json oracle_report_to_json(const OracleReport& r) {
  return json{{"agreement", r.agreement},
              {"verdict", verdict_to_json(r.verdict, true)},
              {"oracle", r.oracle},
              {"detail", r.detail}};
}

}  // namespace metaopa

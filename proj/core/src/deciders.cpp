#include "metaopa/deciders.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <map>
#include <set>
#include <utility>

#include "metaopa/errors.hpp"
#include "metaopa/transforms.hpp"

namespace metaopa {

using nlohmann::json;

const char* to_string(Property p) {
  switch (p) {
    case Property::EN: return "en";
    case Property::ET_EN: return "et-en";
    case Property::DE: return "de";
    case Property::BDE: return "bde";
  }
  return "?";
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::EXISTS: return "exists";
    case Variant::WEAK: return "weak";
    case Variant::FULL: return "full";
  }
  return "?";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::HOLDS: return "HOLDS";
    case Status::FAILS: return "FAILS";
    case Status::UNSUPPORTED: return "UNSUPPORTED";
    case Status::RESOURCE: return "RESOURCE";
  }
  return "?";
}

std::optional<Property> parse_property(const std::string& s) {
  if (s == "en" || s == "EN") return Property::EN;
  if (s == "et-en" || s == "ET-EN" || s == "et_en" || s == "ET_EN") return Property::ET_EN;
  if (s == "de" || s == "DE") return Property::DE;
  if (s == "bde" || s == "BDE" || s == "bDE") return Property::BDE;
  return std::nullopt;
}

std::optional<Variant> parse_variant(const std::string& s) {
  if (s == "exists" || s == "EXISTS" || s == "∃") return Variant::EXISTS;
  if (s == "weak" || s == "WEAK") return Variant::WEAK;
  if (s == "full" || s == "FULL") return Variant::FULL;
  return std::nullopt;
}

json verdict_to_json(const Verdict& v, bool include_witness) {
  json j;
  j["status"] = to_string(v.status);
  j["pipeline"] = v.pipeline;
  j["property"] = to_string(v.query.property);
  j["variant"] = to_string(v.query.variant);
  if (include_witness && !v.witness.is_null()) j["witness"] = v.witness;
  if (include_witness && v.private_image) {
    j["images"] = {{"letters", v.counted},
                   {"private", to_string(*v.private_image)},
                   {"public", v.public_image ? to_string(*v.public_image) : std::string("?")}};
  }
  if (!v.unsupported_reason.empty()) j["unsupported_reason"] = v.unsupported_reason;
  if (!v.notes.empty()) j["notes"] = v.notes;
  return j;
}

// ---------------------------------------------------------------------------
// Dispatch

namespace {

const char* kUndecidableEn =
    "discrete guarded METAs with at least 2 energies are undecidable for EN and ET-EN opacity "
    "(2 guarded energies and 1 clock simulate a two-counter machine)";
const char* kUndecidableDe =
    "discrete guarded METAs with at least 2 energies are undecidable for DE opacity "
    "(2 guarded energies and 1 clock simulate a two-counter machine)";

std::string property_prefix(Property p) { return to_string(p); }

}  // namespace

Dispatch dispatch(const SubclassReport& r, const OpacityQuery& q) {
  const std::size_t k = r.energy_count;
  const bool pos = r.is_positive;
  const bool guarded = r.is_guarded;
  const bool exists = q.variant == Variant::EXISTS;
  Dispatch d;

  auto open = [&](const std::string& cls) {
    d.route = Route::Unsupported;
    d.reason = "open case: " + std::string(to_string(q.property)) + " opacity (" + to_string(q.variant) +
               ") for " + cls + " has no known decision procedure";
    d.bounded_search = exists;
  };
  auto undecidable = [&](const char* why) {
    d.route = Route::Unsupported;
    d.reason = why;
  };
  auto route = [&](Route rt, bool gr, const std::string& name) {
    d.route = rt;
    d.guard_removal = gr;
    d.pipeline = (gr ? "guard-removal+" : "") + name;
  };

  if (!r.is_discrete) {
    if (guarded) {
      d.reason = "guarded non-discrete models are left out: the integer-switching discretization does not encode energy guards";
      return d;
    }
    if (!r.is_integer_switching || !r.is_integer_execution_time) {
      d.reason = "non-discrete model: integer-switching flags were not computed";
      return d;
    }
    if (!*r.is_integer_switching) {
      d.reason = "non-discrete model that is not integer-switching (a rate changes at a non-integer time)";
      return d;
    }
    if (!*r.is_integer_execution_time) {
      d.reason = "non-discrete model without integer execution time (a final location is reachable at a non-integer time)";
      return d;
    }
    if (q.property == Property::BDE) {
      d.reason = "integer-switching models are not handled for bDE opacity: the discretization keeps the energy at "
                 "integer times but not the buffered changes within a time unit";
      return d;
    }
    SubclassReport sub = r;
    sub.is_discrete = true;
    Dispatch inner = dispatch(sub, q);
    inner.is_transform = true;
    if (inner.route != Route::Unsupported) inner.pipeline = "is-discretize+" + inner.pipeline;
    return inner;
  }

  const std::string p = property_prefix(q.property);
  switch (q.property) {
    case Property::EN:
    case Property::ET_EN:
      if (pos) route(Route::ParikhNfa, guarded, p + "-parikh");
      else if (k == 1) route(guarded ? Route::GuardedEnergyPda : Route::EnergyPda, false,
                             p + (guarded ? "-guarded-energy-pda" : "-energy-pda"));
      else if (guarded && k >= 2) undecidable(kUndecidableEn);
      else open("discrete non-positive METAs with several energies");
      break;
    case Property::DE:
      if (pos && k <= 1) route(Route::NfaWords, guarded, "de-region-words");
      else if (pos && exists) {
        route(Route::ParikhByBlock, guarded, "de-parikh-by-block");
        if (guarded)
          d.notes = "guarded METAs are handled by composing guard removal with the Parikh-by-block check";
      } else if (pos) open("discrete positive METAs with several energies");
      else if (guarded && k >= 2) undecidable(kUndecidableDe);
      else open(k <= 1 ? "discrete non-positive ETAs" : "discrete non-positive METAs");
      break;
    case Property::BDE:
      if (pos) route(Route::NfaWords, guarded, "bde-region-words");
      else if (k == 1 && !guarded) route(Route::LGeq0Pda, false, "bde-lgeq0-pda");
      else open(k == 1 ? "discrete non-positive guarded ETAs" : "discrete non-positive (guarded) METAs");
      break;
  }
  return d;
}

// ---------------------------------------------------------------------------
// Parikh by block

PbbAutomaton parikh_by_block(const Nfa& nfa, const std::vector<std::string>& counted, const ParikhOptions& opts) {
  PbbAutomaton out;
  out.counted = counted;
  const auto tick = nfa.symbol(kTick);

  // Block states: the initial state and every tick target, in id order.
  std::set<std::size_t> blocks{nfa.initial};
  std::map<std::size_t, std::set<std::size_t>> tick_sources;  // target -> sources
  for (const auto& tr : nfa.transitions)
    if (tick && tr.sym == *tick) {
      blocks.insert(tr.dst);
      tick_sources[tr.dst].insert(tr.src);
    }

  std::map<std::size_t, std::size_t> id;
  for (auto b : blocks) {
    id[b] = out.state_names.size();
    out.state_names.push_back(nfa.state_name(b));
    out.accepting.push_back(false);
  }
  out.initial = id.at(nfa.initial);
  const std::size_t end = out.state_names.size();
  out.state_names.push_back("end");
  out.accepting.push_back(true);

  // Tick-free fragment; only the initial and accepting states vary.
  Nfa frag;
  frag.alphabet = nfa.alphabet;
  frag.accepting.assign(nfa.size(), false);
  frag.state_names = nfa.state_names;
  for (const auto& tr : nfa.transitions)
    if (!tick || tr.sym != *tick) frag.transitions.push_back(tr);

  auto image = [&](std::size_t from, const std::set<std::size_t>& to) {
    Nfa f = frag;
    f.initial = from;
    for (auto s : to) f.accepting[s] = true;
    return parikh_of_nfa(f, counted, opts);
  };

  std::set<std::size_t> finals;
  for (std::size_t s = 0; s < nfa.size(); ++s)
    if (nfa.accepting[s]) finals.insert(s);

  for (auto b : blocks) {
    for (const auto& [target, sources] : tick_sources) {
      auto img = image(b, sources);
      if (!img.is_empty()) out.edges.push_back({id.at(b), kTick, id.at(target), std::move(img)});
    }
    auto img = image(b, finals);
    if (!img.is_empty()) out.edges.push_back({id.at(b), kFlush, end, std::move(img)});
  }
  return out;
}

std::string pbb_to_dot(const PbbAutomaton& p, const std::string& name) {
  auto esc = [](const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r;
  };
  std::string out = "digraph \"" + esc(name) + "\" {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (std::size_t s = 0; s < p.state_names.size(); ++s)
    out += "  s" + std::to_string(s) + " [label=\"" + esc(p.state_names[s]) + "\", shape=" +
           (p.accepting[s] ? "doublecircle" : "circle") + "];\n";
  out += "  __start -> s" + std::to_string(p.initial) + ";\n";
  auto edges = p.edges;
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.src, a.letter, a.dst) < std::tie(b.src, b.letter, b.dst);
  });
  for (const auto& e : edges)
    out += "  s" + std::to_string(e.src) + " -> s" + std::to_string(e.dst) + " [label=\"" + esc(e.letter) + " / " +
           esc(to_string(e.image)) + "\"];\n";
  out += "}\n";
  return out;
}

PbbProductResult pbb_product_check(const PbbAutomaton& a, const PbbAutomaton& b) {
  if (a.counted.size() != b.counted.size())
    throw std::invalid_argument("Parikh-by-block automata count different letter sets");
  PbbProductResult res;
  auto outgoing = [](const PbbAutomaton& p) {
    std::vector<std::vector<std::size_t>> out(p.state_names.size());
    for (std::size_t i = 0; i < p.edges.size(); ++i) out[p.edges[i].src].push_back(i);
    return out;
  };
  const auto out_a = outgoing(a), out_b = outgoing(b);

  using Pair = std::pair<std::size_t, std::size_t>;
  std::map<Pair, std::optional<std::size_t>> parent;  // product edge that reached the pair
  std::deque<Pair> queue;
  const Pair start{a.initial, b.initial};
  parent[start] = std::nullopt;
  queue.push_back(start);
  std::optional<Pair> goal;
  while (!queue.empty()) {
    auto [sa, sb] = queue.front();
    queue.pop_front();
    if (a.accepting[sa] && b.accepting[sb] && !goal) goal = Pair{sa, sb};
    for (auto ea : out_a[sa])
      for (auto eb : out_b[sb]) {
        const auto& x = a.edges[ea];
        const auto& y = b.edges[eb];
        if (x.letter != y.letter) continue;
        PbbProductEdge pe{sa, sb, x.dst, y.dst, x.letter, ea, eb, intersection_witness(x.image, y.image)};
        res.edges.push_back(pe);
        if (!pe.common) continue;
        Pair next{x.dst, y.dst};
        if (parent.emplace(next, res.edges.size() - 1).second) queue.push_back(next);
      }
  }
  if (goal) {
    res.accepting_path = true;
    Pair cur = *goal;
    while (auto e = parent.at(cur)) {
      res.path.push_back(res.edges[*e]);
      cur = {res.edges[*e].src_a, res.edges[*e].src_b};
    }
    std::reverse(res.path.begin(), res.path.end());
  }
  return res;
}

// ---------------------------------------------------------------------------
// Pipelines

namespace {

struct Sides {
  GuardedMeta priv;
  GuardedMeta pub;
};

Sides make_sides(const GuardedMeta& meta, bool guard_removal, bool markers) {
  GuardedMeta m = guard_removal ? remove_energy_guards(meta) : meta;
  GuardedMeta split = split_and_relabel(m, SplitOptions{markers});
  return {duplicate_visited(split), remove_private(split)};
}

std::vector<std::string> inc_letters(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(inc_letter(i, k));
  return out;
}

// Runs f on both sides, concurrently.
template <class F>
auto both(const Sides& s, F f) {
  auto fut = std::async(std::launch::async, [&] { return f(s.priv); });
  auto pub = f(s.pub);
  return std::make_pair(fut.get(), std::move(pub));
}

Nfa region_nfa(const GuardedMeta& ta, const DeciderOptions& opts) {
  return build_region_automaton(ta, opts.region).nfa;
}

json vec_json(const Vec& v) { return json(v); }

void compare_images(Verdict& v, const SemilinearSet& priv, const SemilinearSet& pub) {
  v.private_image = priv;
  v.public_image = pub;
  switch (v.query.variant) {
    case Variant::EXISTS:
      if (auto w = intersection_witness(priv, pub)) {
        v.status = Status::HOLDS;
        v.witness = {{"kind", "parikh"}, {"letters", v.counted}, {"vector", vec_json(*w)}};
      } else {
        v.status = Status::FAILS;
        if (priv.is_empty()) v.notes = "the private image is empty";
      }
      return;
    case Variant::WEAK:
    case Variant::FULL: {
      auto inc = includes(pub, priv);
      if (!inc.included) {
        v.status = Status::FAILS;
        v.witness = {{"kind", "counterexample"}, {"letters", v.counted}, {"side", "private"}};
        if (inc.counterexample) v.witness["vector"] = vec_json(*inc.counterexample);
        return;
      }
      if (v.query.variant == Variant::FULL) {
        auto back = includes(priv, pub);
        if (!back.included) {
          v.status = Status::FAILS;
          v.witness = {{"kind", "counterexample"}, {"letters", v.counted}, {"side", "public"}};
          if (back.counterexample) v.witness["vector"] = vec_json(*back.counterexample);
          return;
        }
      }
      v.status = Status::HOLDS;
      return;
    }
  }
}

void run_parikh_nfa(Verdict& v, const GuardedMeta& meta, const Dispatch& d, const DeciderOptions& opts) {
  const bool timed = v.query.property == Property::ET_EN;
  Sides s = make_sides(meta, d.guard_removal, false);
  v.counted = inc_letters(meta.energies.size());
  if (timed) {
    v.counted.push_back(kTick);
    v.counted.push_back(kTickFrac);
  }
  auto [priv, pub] = both(s, [&](const GuardedMeta& side) {
    GuardedMeta ta = timed ? add_tick_instrumentation(side, TickMode::ET_EN) : side;
    return parikh_of_nfa(region_nfa(ta, opts), v.counted, opts.parikh);
  });
  compare_images(v, priv, pub);
}

void run_energy_pda(Verdict& v, const GuardedMeta& meta, const Dispatch& d, const DeciderOptions& opts) {
  const bool timed = v.query.property == Property::ET_EN;
  const bool guarded = d.route == Route::GuardedEnergyPda;
  const std::int64_t max_energy = energy_guard_max(meta);
  Sides s = make_sides(meta, false, guarded);
  v.counted = {kDrainLetter};
  if (timed) {
    v.counted.push_back(kTick);
    v.counted.push_back(kTickFrac);
  }
  auto [priv, pub] = both(s, [&](const GuardedMeta& side) {
    Nfa n = region_nfa(add_tick_instrumentation(side, TickMode::ET_EN), opts);
    std::vector<std::string> keep{inc_letter(0, 1), dec_letter(0, 1)};
    for (const auto& a : n.alphabet)
      if (is_guard_marker(a)) keep.push_back(a);
    if (timed) {
      keep.push_back(kTick);
      keep.push_back(kTickFrac);
    }
    n = project(n, keep);
    try {
      n = minimize(n, opts.determinize_cap);
    } catch (const ResourceError&) {
      n = trim(remove_epsilon(n));
    }
    Pda p = guarded ? guarded_energy_pda(n, max_energy) : energy_pda_of_nfa(n);
    return parikh_of_pda(p, v.counted, opts.pda);
  });
  compare_images(v, priv, pub);
  if (!v.notes.empty()) v.notes += "; ";
  v.notes += "letter 'a' counts the final energy";
}

json path_names(const Nfa& n, const Word& w) {
  json names = json::array();
  if (auto path = accepting_path(n, w))
    for (auto s : *path) names.push_back(n.state_name(s));
  return names;
}

void run_nfa_words(Verdict& v, const GuardedMeta& meta, const Dispatch& d, const DeciderOptions& opts) {
  const bool buffered = v.query.property == Property::BDE;
  Sides s = make_sides(meta, d.guard_removal, false);
  std::vector<std::string> keep = inc_letters(meta.energies.size());
  keep.push_back(kTick);
  if (buffered) keep.push_back(kFlush);
  auto [priv, pub] = both(s, [&](const GuardedMeta& side) {
    return project(region_nfa(add_tick_instrumentation(side, buffered ? TickMode::BDE : TickMode::DE), opts), keep);
  });
  if (v.query.variant == Variant::EXISTS) {
    auto r = nfa_intersect_emptiness(priv, pub);
    if (r.empty) {
      v.status = Status::FAILS;
      return;
    }
    v.status = Status::HOLDS;
    v.witness = {{"kind", "word"},
                 {"word", *r.witness},
                 {"private_path", path_names(priv, *r.witness)},
                 {"public_path", path_names(pub, *r.witness)}};
    return;
  }
  auto check = [&](const Nfa& a, const Nfa& b, const char* side) {
    auto inc = nfa_inclusion(a, b, opts.determinize_cap);
    if (inc.included) return true;
    v.status = Status::FAILS;
    v.witness = {{"kind", "counterexample"}, {"side", side}};
    if (inc.counterexample) {
      v.witness["word"] = *inc.counterexample;
      v.witness["path"] = path_names(a, *inc.counterexample);
    }
    return false;
  };
  if (!check(priv, pub, "private")) return;
  if (v.query.variant == Variant::FULL && !check(pub, priv, "public")) return;
  v.status = Status::HOLDS;
}

void run_lgeq0(Verdict& v, const GuardedMeta& meta, const DeciderOptions& opts) {
  Sides s = make_sides(meta, false, false);
  const std::vector<std::string> keep{inc_letter(0, 1), dec_letter(0, 1), kTick, kFlush};
  auto [priv, pub] = both(s, [&](const GuardedMeta& side) {
    return project(region_nfa(add_tick_instrumentation(side, TickMode::BDE), opts), keep);
  });
  const Pda lgeq0 = l_geq0_pda();
  if (v.query.variant == Variant::EXISTS) {
    auto r = pda_emptiness(pda_nfa_product(lgeq0, product(priv, pub)));
    if (r.empty) {
      v.status = Status::FAILS;
      return;
    }
    v.status = Status::HOLDS;
    v.witness = {{"kind", "word"}, {"word", *r.witness}};
    return;
  }
  auto check = [&](const Nfa& a, const Nfa& b, const char* side) {
    auto r = pda_emptiness(pda_nfa_product(lgeq0, product(a, complement(b, opts.determinize_cap))));
    if (r.empty) return true;
    v.status = Status::FAILS;
    v.witness = {{"kind", "counterexample"}, {"side", side}, {"word", *r.witness}};
    return false;
  };
  if (!check(priv, pub, "private")) return;
  if (v.query.variant == Variant::FULL && !check(pub, priv, "public")) return;
  v.status = Status::HOLDS;
}

void run_parikh_by_block(Verdict& v, const GuardedMeta& meta, const Dispatch& d, const DeciderOptions& opts) {
  Sides s = make_sides(meta, d.guard_removal, false);
  v.counted = inc_letters(meta.energies.size());
  std::vector<std::string> keep = v.counted;
  keep.push_back(kTick);
  auto [priv, pub] = both(s, [&](const GuardedMeta& side) {
    return parikh_by_block(project(region_nfa(add_tick_instrumentation(side, TickMode::DE), opts), keep),
                           v.counted, opts.parikh);
  });
  auto r = pbb_product_check(priv, pub);
  if (!r.accepting_path) {
    v.status = Status::FAILS;
    return;
  }
  v.status = Status::HOLDS;
  json path = json::array();
  for (const auto& e : r.path)
    path.push_back({{"from", {priv.state_names[e.src_a], pub.state_names[e.src_b]}},
                    {"to", {priv.state_names[e.dst_a], pub.state_names[e.dst_b]}},
                    {"letter", e.letter},
                    {"common", vec_json(*e.common)}});
  v.witness = {{"kind", "block-path"}, {"letters", v.counted}, {"path", path}};
}

Verdict run_dispatch(const GuardedMeta& meta, const OpacityQuery& q, const Dispatch& d, const DeciderOptions& opts) {
  Verdict v;
  v.query = q;
  v.pipeline = d.pipeline;
  v.notes = d.notes;
  if (d.route == Route::Unsupported) {
    v.status = Status::UNSUPPORTED;
    v.unsupported_reason = d.reason;
    if (d.bounded_search && opts.search_open_cells) {
      if (auto w = bounded_exists_witness(meta, q.property, opts.search_bounds)) {
        v.status = Status::HOLDS;
        v.pipeline = std::string(to_string(q.property)) + "/bounded-witness-search";
        v.unsupported_reason.clear();
        v.witness = std::move(*w);
        v.notes = "open case decided by a bounded run search that found a witness";
      } else {
        v.unsupported_reason += "; a bounded run search found no witness";
      }
    }
    return v;
  }
  try {
    switch (d.route) {
      case Route::ParikhNfa: run_parikh_nfa(v, meta, d, opts); break;
      case Route::EnergyPda:
      case Route::GuardedEnergyPda: run_energy_pda(v, meta, d, opts); break;
      case Route::NfaWords: run_nfa_words(v, meta, d, opts); break;
      case Route::LGeq0Pda: run_lgeq0(v, meta, opts); break;
      case Route::ParikhByBlock: run_parikh_by_block(v, meta, d, opts); break;
      case Route::Unsupported: break;
    }
  } catch (const ResourceError& e) {
    v.status = Status::RESOURCE;
    v.witness = nullptr;
    v.notes = std::string("resource cap reached: ") + e.what();
  } catch (const UnsupportedClass& e) {
    v.status = Status::UNSUPPORTED;
    v.witness = nullptr;
    v.unsupported_reason = e.what();
  }
  return v;
}

}  // namespace

SubclassReport classify_with_switch_flags(const GuardedMeta& meta) {
  SubclassReport r = classify(meta);
  if (!r.is_guarded) {
    auto sw = integer_switch_checks(meta);
    r.is_integer_switching = sw.is_integer_switching;
    r.is_integer_execution_time = sw.is_integer_execution_time;
  }
  return r;
}

Verdict decide_via_is_transform(const GuardedMeta& meta, const OpacityQuery& q, const DeciderOptions& opts) {
  SubclassReport r = classify(meta);
  std::string detail;
  if (!r.is_guarded) {
    auto sw = integer_switch_checks(meta);
    r.is_integer_switching = sw.is_integer_switching;
    r.is_integer_execution_time = sw.is_integer_execution_time;
    detail = sw.detail;
  }
  r.is_discrete = false;
  Dispatch d = dispatch(r, q);
  if (!d.is_transform) {
    Verdict v;
    v.query = q;
    v.status = Status::UNSUPPORTED;
    v.unsupported_reason = d.reason + (detail.empty() ? "" : " (" + detail + ")");
    return v;
  }
  GuardedMeta disc = integer_switch_to_discrete(meta);
  SubclassReport rd = classify(disc);
  Dispatch inner = dispatch(rd, q);
  Verdict v = run_dispatch(disc, q, inner, opts);
  if (!v.pipeline.empty()) v.pipeline = "is-discretize+" + v.pipeline;
  return v;
}

Verdict decide(const GuardedMeta& meta, const OpacityQuery& q, const DeciderOptions& opts) {
  SubclassReport r = classify(meta);
  if (!r.is_discrete) {
    if (r.is_guarded) {
      Verdict v;
      v.query = q;
      v.unsupported_reason = dispatch(r, q).reason;
      return v;
    }
    return decide_via_is_transform(meta, q, opts);
  }
  return run_dispatch(meta, q, dispatch(r, q), opts);
}

Verdict decide_en(const GuardedMeta& meta, Variant v, const DeciderOptions& opts) {
  return decide(meta, {Property::EN, v}, opts);
}
Verdict decide_et_en(const GuardedMeta& meta, Variant v, const DeciderOptions& opts) {
  return decide(meta, {Property::ET_EN, v}, opts);
}
Verdict decide_de(const GuardedMeta& meta, Variant v, const DeciderOptions& opts) {
  return decide(meta, {Property::DE, v}, opts);
}
Verdict decide_bde(const GuardedMeta& meta, Variant v, const DeciderOptions& opts) {
  return decide(meta, {Property::BDE, v}, opts);
}

}  // namespace metaopa

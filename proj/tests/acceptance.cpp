// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "metaopa/deciders.hpp"
#include "metaopa/regions.hpp"
#include "metaopa/transforms.hpp"
#include "presburger_suite.hpp"
#include "support.hpp"

using namespace metaopa;
using namespace metaopa::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string strip_spaces(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

ScriptStep step(const std::string& delay, const std::string& action, std::optional<std::string> target = {}) {
  return ScriptStep{parse_rational(delay), std::nullopt, action, std::move(target)};
}

// 1. Drone replay.
Outcome drone_replay() {
  Outcome o;
  auto meta = load("drone.json");
  Run run = replay(meta, {step("0", "charge"), step("10", "cool"), step("5", "fly"), step("2", "flash"),
                          step("0", ""), step("0", "land")});
  auto st = run_stats(meta, run);
  o.require(st.duration == 17, "duration " + to_string(st.duration));
  o.require(st.final_energies == std::vector<Rational>{14, 11}, "final energies differ");
  std::vector<TimedLetter> expected{{0, "charge"}, {10, "cool"}, {15, "fly"}, {17, "flash"}, {17, "land"}};
  o.require(st.timed_word == expected, "timed word differs");
  return o;
}

// 2. EN opacity on the private-loop model.
Outcome en_private_loop() {
  Outcome o;
  auto meta = load("priv_loop_en.json");
  o.require(decide_en(meta, Variant::EXISTS).status == Status::HOLDS, "exists is not HOLDS");
  o.require(decide_en(meta, Variant::WEAK).status == Status::FAILS, "weak is not FAILS");
  Verdict full = decide_en(meta, Variant::FULL);
  o.require(full.status == Status::FAILS, "full is not FAILS");
  o.require(full.private_image && full.public_image, "images missing");
  if (full.private_image && full.public_image)
    for (std::int64_t n = 0; n <= 10; ++n) {
      o.require(member(*full.private_image, Vec{n}), "private image misses " + std::to_string(n));
      o.require(member(*full.public_image, Vec{n}) == (n == 2), "public image disagrees at " + std::to_string(n));
    }
  return o;
}

// 3. ET-EN opacity on the same model.
Outcome et_en_private_loop() {
  Outcome o;
  auto meta = load("priv_loop_en.json");
  Verdict v = decide_et_en(meta, Variant::EXISTS);
  o.require(v.status == Status::HOLDS, "exists is not HOLDS");
  o.require(v.counted == std::vector<std::string>{"inc", "t", "t>0"}, "counted letters differ");
  const Vec expected{2, 2, 1};
  o.require(v.private_image && member(*v.private_image, expected), "(2,2,1) not in the private image");
  o.require(v.public_image && member(*v.public_image, expected), "(2,2,1) not in the public image");
  if (v.witness.contains("vector")) {
    Vec w = v.witness["vector"].get<Vec>();
    o.require(member(*v.private_image, w) && member(*v.public_image, w), "witness not in both images");
  } else {
    o.require(false, "no witness vector");
  }
  return o;
}

// 4. One clock, maximal constant 3: 8 clock regions.
Outcome region_count() {
  Outcome o;
  const MaxConstants m{3};
  auto chain = time_successors(zero_region(1), m);
  o.require(chain.size() == 8, "time-successor chain has " + std::to_string(chain.size()) + " regions");
  std::set<ClockRegion> sampled;
  for (int q = 0; q <= 40; ++q) sampled.insert(clock_region_of({Rational(q, 4)}, m));
  o.require(sampled.size() == 8, "sampling yields " + std::to_string(sampled.size()) + " regions");
  return o;
}

// 5. DEO on the example run.
Outcome deo_example() {
  Outcome o;
  auto meta = load("deo_example.json");
  Run run = replay(meta, {step("1.8", "a"), step("0.4", "b", "lpriv"), step("0.6", "b", "lpriv"),
                          step("1.1", "b", "lf")});
  std::string got = trace_to_string(deo(run));
  o.require(strip_spaces(got) == "0,1,5,5", "DEO " + got);
  return o;
}

// 6. bDEO on the buffered example and the DE / bDE verdicts.
Outcome buffered_example() {
  Outcome o;
  auto meta = load("buffered_eta.json");
  Run r1 = replay(meta, {step("1.5", "a"), step("1", "a"), step("0.1", "b", "lpriv"), step("0.1", "b", "lpriv"),
                         step("0.1", "b", "lf")});
  Run r2 = replay(meta, {step("1.5", "a"), step("1.3", "c")});
  o.require(strip_spaces(trace_to_string(bdeo(r1))) == "ε,(2),(1,0)", "bDEO(r1) " + trace_to_string(bdeo(r1)));
  o.require(strip_spaces(trace_to_string(bdeo(r2))) == "ε,(2),(0)", "bDEO(r2) " + trace_to_string(bdeo(r2)));
  o.require(decide_de(meta, Variant::EXISTS).status == Status::HOLDS, "exists-DE is not HOLDS");
  o.require(decide_bde(meta, Variant::EXISTS).status == Status::FAILS, "exists-bDE is not FAILS");
  return o;
}

// 7. Parikh-by-block product on the two example automata.
Outcome parikh_by_block_example() {
  Outcome o;
  PbbAutomaton n = parikh_by_block(block_example_n(), {"a", "b"});
  PbbAutomaton m = parikh_by_block(block_example_m(), {"a", "b"});
  auto id = [](const PbbAutomaton& p, const std::string& name) {
    return std::size_t(std::find(p.state_names.begin(), p.state_names.end(), name) - p.state_names.begin());
  };
  auto r = pbb_product_check(n, m);
  auto find = [&](const std::string& a, const std::string& b) -> const PbbProductEdge* {
    for (const auto& e : r.edges)
      if (e.src_a == n.initial && e.src_b == m.initial && e.dst_a == id(n, a) && e.dst_b == id(m, b) &&
          e.letter == "t")
        return &e;
    return nullptr;
  };
  const auto* to_q1 = find("q1", "q1'");
  const auto* to_q2 = find("q2", "q1'");
  o.require(to_q1 && !to_q1->common, "edge to (q1,q1') missing or non-empty");
  o.require(to_q2 && to_q2->common, "edge to (q2,q1') missing or empty");
  if (to_q2) {
    o.require(member(n.edges[to_q2->edge_a].image, Vec{1, 0}) && member(m.edges[to_q2->edge_b].image, Vec{1, 0}),
              "(1,0) not common to the (q2,q1') edge");
  }
  o.require(r.accepting_path, "no accepting path");
  return o;
}

// 8. Class rejection and the dispatch table.
std::string route_name(const Dispatch& d) {
  switch (d.route) {
    case Route::ParikhNfa: return d.guard_removal ? "parikh-nfa+gr" : "parikh-nfa";
    case Route::EnergyPda: return "energy-pda";
    case Route::GuardedEnergyPda: return "guarded-energy-pda";
    case Route::NfaWords: return d.guard_removal ? "nfa-words+gr" : "nfa-words";
    case Route::ParikhByBlock: return d.guard_removal ? "pbb+gr" : "pbb";
    case Route::LGeq0Pda: return "lgeq0";
    case Route::Unsupported: return d.reason.find("undecidable") != std::string::npos ? "undecidable" : "open";
  }
  return "?";
}

struct ClassSample {
  std::string name;
  bool positive, guarded;
  std::size_t energies;
};

// Expected cells, transcribed from the decidability tables: EN/ET-EN, then
// DE exists, DE weak/full, bDE (all variants).
struct Row {
  ClassSample cls;
  std::string en, de_exists, de_other, bde;
};

const std::vector<Row>& dispatch_table() {
  static const std::vector<Row> rows{
      {{"positive META", true, false, 2}, "parikh-nfa", "pbb", "open", "nfa-words"},
      {{"positive guarded META", true, true, 2}, "parikh-nfa+gr", "pbb+gr", "open", "nfa-words+gr"},
      {{"positive ETA", true, false, 1}, "parikh-nfa", "nfa-words", "nfa-words", "nfa-words"},
      {{"positive guarded ETA", true, true, 1}, "parikh-nfa+gr", "nfa-words+gr", "nfa-words+gr", "nfa-words+gr"},
      {{"ETA", false, false, 1}, "energy-pda", "open", "open", "lgeq0"},
      {{"guarded ETA", false, true, 1}, "guarded-energy-pda", "open", "open", "open"},
      {{"META", false, false, 2}, "open", "open", "open", "open"},
      {{"guarded META", false, true, 2}, "undecidable", "undecidable", "undecidable", "open"},
  };
  return rows;
}

Outcome class_rejection() {
  Outcome o;
  GuardedMeta gadget = encode_two_counter_machine(small_two_counter_machine());
  auto r = classify(gadget);
  o.require(r.is_discrete && r.is_guarded && r.energy_count == 2 && r.clock_count == 1, "gadget class differs");
  for (auto p : {Property::EN, Property::ET_EN, Property::DE, Property::BDE})
    for (auto v : {Variant::EXISTS, Variant::WEAK, Variant::FULL}) {
      Verdict verdict = decide(gadget, {p, v});
      std::string cell = std::string(to_string(p)) + "/" + to_string(v);
      o.require(verdict.status == Status::UNSUPPORTED, "gadget " + cell + " is " + to_string(verdict.status));
      if (p != Property::BDE)
        o.require(verdict.unsupported_reason.find("two-counter") != std::string::npos,
                  "gadget " + cell + " reason does not cite the two-counter reduction");
    }

  std::size_t cells = 0;
  for (const auto& row : dispatch_table()) {
    SubclassReport rep;
    rep.is_discrete = true;
    rep.is_positive = row.cls.positive;
    rep.is_guarded = row.cls.guarded;
    rep.energy_count = row.cls.energies;
    rep.clock_count = 1;
    for (auto p : {Property::EN, Property::ET_EN, Property::DE, Property::BDE})
      for (auto v : {Variant::EXISTS, Variant::WEAK, Variant::FULL}) {
        std::string expected = p == Property::BDE ? row.bde
                               : p == Property::DE ? (v == Variant::EXISTS ? row.de_exists : row.de_other)
                                                   : row.en;
        std::string got = route_name(dispatch(rep, {p, v}));
        o.require(got == expected, row.cls.name + " " + to_string(p) + "/" + to_string(v) + ": " + got +
                                       " instead of " + expected);
        ++cells;
      }
  }
  o.require(cells >= 24, "fewer than 24 cells");
  return o;
}

// 9. Guard removal keeps bounded timed words.
using WordKey = std::pair<std::vector<std::pair<std::string, std::string>>, bool>;

std::set<WordKey> bounded_words(const GuardedMeta& meta, const EnumerationBounds& b) {
  std::set<WordKey> out;
  enumerate_runs(meta, b, [&](const Run& run) {
    if (!is_accepting(meta, run)) return true;
    auto st = run_stats(meta, run);
    WordKey k;
    for (const auto& l : st.timed_word) k.first.push_back({to_string(l.time), l.action});
    k.second = st.is_private;
    out.insert(k);
    return true;
  });
  return out;
}

Outcome guard_removal_words() {
  Outcome o;
  const EnumerationBounds b{6, Rational(1, 2), 1};
  std::vector<std::pair<std::string, GuardedMeta>> models{{"guarded_positive_meta", load("guarded_positive_meta.json")}};
  for (std::uint32_t seed = 1; models.size() < 6; ++seed) {
    auto m = random_positive_meta(seed, {4, 1, 2, true});
    if (!classify(m).is_guarded || energy_guard_max(m) > 2 || !validate(m).empty()) continue;
    models.push_back({"random seed " + std::to_string(seed), m});
  }
  std::size_t total = 0;
  for (const auto& [name, m] : models) {
    auto in = bounded_words(m, b);
    auto out = bounded_words(remove_energy_guards(m), b);
    o.require(in == out, name + ": timed-word sets differ (" + std::to_string(in.size()) + " vs " +
                             std::to_string(out.size()) + ")");
    if (name == "guarded_positive_meta") o.require(!in.empty(), "no bounded words on the fixture");
    total += in.size();
  }
  if (o.pass) o.detail = std::to_string(total) + " timed words compared";
  return o;
}

// 10. Oracle equivalence on random discrete positive METAs.
Outcome oracle_equivalence() {
  Outcome o;
  const EnumerationBounds b{6, Rational(1, 2), 3};
  int checked = 0, witnesses = 0;
  for (std::uint32_t seed = 100; checked < 20; ++seed) {
    auto m = random_positive_meta(seed, {4, 2, 2, false});
    if (!validate(m).empty()) continue;
    ++checked;
    const std::string tag = "seed " + std::to_string(seed);
    for (auto p : {Property::EN, Property::ET_EN}) {
      auto w = bounded_exists_witness(m, p, b);
      if (!w) continue;
      ++witnesses;
      auto v = decide(m, {p, Variant::EXISTS});
      o.require(v.status == Status::HOLDS, tag + ": oracle witness but " + to_string(p) + " verdict " +
                                               to_string(v.status));
    }
    GuardedMeta split = split_and_relabel(m);
    std::vector<std::string> counted{inc_letter(0, 2), inc_letter(1, 2)};
    for (const auto& side : {remove_private(split), duplicate_visited(split)}) {
      Nfa nfa = build_region_automaton(side).nfa;
      auto image = parikh_of_nfa(nfa, counted);
      auto symbolic = members_up_to(image, 8);
      auto brute = word_parikh_vectors(nfa, counted, 8);
      o.require(std::set<Vec>(symbolic.begin(), symbolic.end()) == brute, tag + ": Parikh image differs");
    }
  }
  o.require(witnesses > 0, "the oracle found no witness on any model");
  if (o.pass) o.detail = std::to_string(witnesses) + " oracle witnesses confirmed";
  return o;
}

// 11. Integer-switching checks and discretization.
std::set<std::vector<Valuation>> integer_traces(const GuardedMeta& meta, const EnumerationBounds& b) {
  std::set<std::vector<Valuation>> out;
  enumerate_runs(meta, b, [&](const Run& run) {
    if (!is_accepting(meta, run)) return true;
    Rational d = run_stats(meta, run).duration;
    std::vector<Valuation> trace;
    for (long k = 0; k <= floor(d).get_num().get_si(); ++k) trace.push_back(energy_at(meta, run, Rational(k)));
    out.insert(trace);
    return true;
  });
  return out;
}

Outcome integer_switching() {
  Outcome o;
  auto sw = integer_switch_checks(load("switching_meta.json"));
  o.require(sw.is_integer_switching && !sw.is_integer_execution_time, "flags on the switching model differ");
  auto iet = load("switching_meta_iet.json");
  auto sw2 = integer_switch_checks(iet);
  o.require(sw2.is_integer_switching && sw2.is_integer_execution_time, "flags on the adjusted model differ");
  GuardedMeta disc = integer_switch_to_discrete(iet);
  const std::size_t steps = 5;
  const Rational horizon = 2;
  auto cont_small = integer_traces(iet, {steps, Rational(1, 2), horizon});
  auto disc_large = integer_traces(disc, {steps + 3, Rational(1, 2), horizon});
  auto disc_small = integer_traces(disc, {steps, Rational(1, 2), horizon});
  o.require(!cont_small.empty(), "no accepting runs sampled");
  if (o.pass) o.detail = std::to_string(cont_small.size()) + " continuous traces";
  o.require(std::includes(disc_large.begin(), disc_large.end(), cont_small.begin(), cont_small.end()),
            "a continuous trace is missing from the discretization");
  o.require(std::includes(cont_small.begin(), cont_small.end(), disc_small.begin(), disc_small.end()),
            "a discretized trace is missing from the continuous model");
  return o;
}

// 12. Presburger and semilinear kernel properties.
Outcome kernel_properties() {
  Outcome o;
  for (const auto& c : presburger_cases())
    o.require(presburger::decide(c.sentence) == c.expected, "Presburger: " + c.text);

  std::mt19937 rng(12);
  for (int i = 0; i < 200; ++i) {
    auto a = random_semilinear(rng, 2), b = random_semilinear(rng, 2);
    if (auto w = intersection_witness(a, b))
      o.require(member(a, *w) && member(b, *w), "intersection witness " + to_string(*w) + " does not validate");

    auto inc = includes(a, b);
    auto sub = members_up_to(b, 8);
    auto sup = members_up_to(a, 8);
    const std::set<Vec> sup_set(sup.begin(), sup.end());
    bool bounded_included = std::all_of(sub.begin(), sub.end(), [&](const Vec& v) { return sup_set.count(v) > 0; });
    if (inc.included) {
      o.require(bounded_included, "inclusion claimed for " + to_string(a) + " ⊇ " + to_string(b));
    } else {
      o.require(inc.counterexample && member(b, *inc.counterexample) && !member(a, *inc.counterexample),
                "invalid inclusion counterexample");
    }
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
    double max_seconds;  // 0: no limit
  };
  const std::vector<Criterion> criteria{
      {"drone replay: duration 17, energies (14,11), timed word", drone_replay, 1},
      {"EN opacity verdicts and Parikh images", en_private_loop, 10},
      {"ET-EN exists verdict with (2,2,1)", et_en_private_loop, 10},
      {"8 clock regions for max constant 3", region_count, 0},
      {"DEO 0,1,5,5 on the example run", deo_example, 0},
      {"bDEO traces, DE exists HOLDS, bDE exists FAILS", buffered_example, 30},
      {"Parikh-by-block product check", parikh_by_block_example, 0},
      {"class rejection and dispatch table", class_rejection, 0},
      {"guard removal keeps bounded timed words", guard_removal_words, 60},
      {"oracle equivalence on random positive METAs", oracle_equivalence, 300},
      {"integer-switching checks and discretization", integer_switching, 0},
      {"Presburger and semilinear kernel properties", kernel_properties, 0},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = seconds_since(start);
    if (criteria[i].max_seconds > 0)
      o.require(secs < criteria[i].max_seconds, "took longer than " + std::to_string(criteria[i].max_seconds) + " s");
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].name << " (" << secs << " s)";
    if (!o.detail.empty()) line << ": " << o.detail;
    std::cout << line.str() << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

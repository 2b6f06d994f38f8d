// metaopa: command-line front end. Reports are JSON on stdout, diagnostics on
// stderr. Exit codes: 0 HOLDS / success, 1 FAILS, 2 UNSUPPORTED, 3 error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "metaopa/deciders.hpp"
#include "metaopa/errors.hpp"
#include "metaopa/model.hpp"
#include "metaopa/regions.hpp"
#include "metaopa/semantics.hpp"
#include "metaopa/transforms.hpp"

using namespace metaopa;
using nlohmann::json;

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUnsupported = 2;
constexpr int kExitError = 3;

struct Caps {
  std::size_t max_states = 0;
  std::size_t max_semilinear = 0;

  void add(CLI::App* app) {
    app->add_option("--max-states", max_states, "cap on region, determinization and Parikh state counts");
    app->add_option("--max-semilinear", max_semilinear, "cap on semilinear components");
  }
  DeciderOptions options() const {
    DeciderOptions o;
    if (max_states) {
      o.region.max_states = max_states;
      o.parikh.max_states = max_states;
      o.pda.max_nonterminals = max_states;
      o.determinize_cap = max_states;
    }
    if (max_semilinear) {
      o.parikh.max_components = max_semilinear;
      o.pda.max_components = max_semilinear;
    }
    return o;
  }
};

struct Bounds {
  std::size_t steps = 6;
  std::string grid = "1/2";
  std::string horizon = "4";

  void add(CLI::App* app) {
    app->add_option("--steps", steps, "maximum number of edges per run")->capture_default_str();
    app->add_option("--grid", grid, "delay granularity")->capture_default_str();
    app->add_option("--horizon", horizon, "maximum run duration")->capture_default_str();
  }
  EnumerationBounds get() const { return {steps, parse_rational(grid), parse_rational(horizon)}; }
};

Property property_of(const std::string& s) {
  auto p = parse_property(s);
  if (!p) throw std::invalid_argument("unknown property '" + s + "' (en, et-en, de, bde)");
  return *p;
}

Variant variant_of(const std::string& s) {
  auto v = parse_variant(s);
  if (!v) throw std::invalid_argument("unknown variant '" + s + "' (exists, weak, full)");
  return *v;
}

TickMode tick_mode_of(const std::string& s) {
  if (s == "et-en") return TickMode::ET_EN;
  if (s == "de") return TickMode::DE;
  if (s == "bde") return TickMode::BDE;
  throw std::invalid_argument("unknown tick mode '" + s + "' (et-en, de, bde)");
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int exit_code(Status s) {
  switch (s) {
    case Status::HOLDS: return kExitHolds;
    case Status::FAILS: return kExitFails;
    case Status::UNSUPPORTED: return kExitUnsupported;
    case Status::RESOURCE: return kExitError;
  }
  return kExitError;
}

std::vector<ScriptStep> load_script(const std::string& text) {
  json j = json::parse(text);
  if (j.is_object()) j = j.at("steps");
  if (!j.is_array()) throw std::invalid_argument("script must be a JSON array of steps");
  std::vector<ScriptStep> out;
  for (const auto& s : j) {
    ScriptStep st;
    const auto& d = s.at("delay");
    st.delay = d.is_string() ? parse_rational(d.get<std::string>()) : parse_rational(d.dump());
    if (s.contains("edge")) st.edge = s.at("edge").get<std::size_t>();
    if (s.contains("action")) st.action = s.at("action").is_null() ? std::string() : s.at("action").get<std::string>();
    if (s.contains("target")) st.target = s.at("target").get<std::string>();
    out.push_back(std::move(st));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json run_report(const GuardedMeta& meta, const Run& run) {
  auto st = run_stats(meta, run);
  json word = json::array();
  for (const auto& l : st.timed_word) word.push_back({to_string(l.time), l.action});
  json energies = json::object();
  for (std::size_t i = 0; i < meta.energies.size(); ++i) energies[meta.energies[i]] = to_string(st.final_energies[i]);
  return json{{"duration", to_string(st.duration)},
              {"final_energies", energies},
              {"final_location", meta.locations[run.last().location].name},
              {"accepting", is_accepting(meta, run)},
              {"private", st.is_private},
              {"public", st.is_public},
              {"timed_word", word},
              {"deo", trace_to_string(deo(run))},
              {"bdeo", trace_to_string(bdeo(run))}};
}

GuardedMeta stage_model(const GuardedMeta& meta, const std::string& stage, const std::string& mode) {
  if (stage == "model") return meta;
  if (stage == "apub") return remove_private(meta);
  if (stage == "apriv") return duplicate_visited(meta);
  if (stage == "split") return split_and_relabel(meta);
  if (stage == "guard-removal") return remove_energy_guards(meta);
  if (stage == "discretize") return integer_switch_to_discrete(meta);
  if (stage == "instrumented") return add_tick_instrumentation(strip_energies(split_and_relabel(meta)), tick_mode_of(mode));
  throw std::invalid_argument("unknown stage '" + stage + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opacity checker for guarded multi-energy timed automata"};
  app.require_subcommand(1);

  std::string model_path, property = "en", variant = "exists", stage, mode = "de", script;
  bool witness = false, no_search = false, enumerate = false;
  Caps caps;
  Bounds bounds;

  auto* check = app.add_subcommand("check", "decide an opacity query");
  check->add_option("model", model_path, "model file")->required();
  check->add_option("--property", property, "en, et-en, de or bde")->capture_default_str();
  check->add_option("--variant", variant, "exists, weak or full")->capture_default_str();
  check->add_flag("--witness", witness, "include witnesses and images");
  check->add_flag("--no-search", no_search, "do not run the bounded search on open cases");
  caps.add(check);

  auto* classify_cmd = app.add_subcommand("classify", "report the subclass flags");
  classify_cmd->add_option("model", model_path, "model file")->required();

  auto* simulate = app.add_subcommand("simulate", "replay a scripted run or enumerate bounded runs");
  simulate->add_option("model", model_path, "model file")->required();
  simulate->add_option("--script", script, "JSON steps, inline or @file");
  simulate->add_flag("--enumerate", enumerate, "list the observations of bounded accepting runs");
  bounds.add(simulate);

  auto* transform = app.add_subcommand("transform", "print a transformed model as JSON");
  transform->add_option("model", model_path, "model file")->required();
  transform
      ->add_option("--stage", stage, "apub, apriv, split, guard-removal, discretize or instrumented")
      ->required();
  transform->add_option("--mode", mode, "tick mode for instrumented: et-en, de or bde")->capture_default_str();

  auto* export_cmd = app.add_subcommand("export", "print a construction stage as DOT");
  export_cmd->add_option("model", model_path, "model file")->required();
  export_cmd->add_option("--stage", stage, "model, apub, apriv, instrumented, regions or pbb")->required();
  export_cmd->add_option("--mode", mode, "tick mode for instrumented/regions/pbb")->capture_default_str();
  caps.add(export_cmd);

  auto* oracle = app.add_subcommand("oracle-compare", "compare a decider verdict with the bounded oracle");
  oracle->add_option("model", model_path, "model file")->required();
  oracle->add_option("--property", property, "en, et-en, de or bde")->capture_default_str();
  oracle->add_option("--variant", variant, "exists, weak or full")->capture_default_str();
  bounds.add(oracle);
  caps.add(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    const GuardedMeta meta = load_model(model_path);

    if (*check) {
      DeciderOptions opts = caps.options();
      opts.search_open_cells = !no_search;
      Verdict v = decide(meta, {property_of(property), variant_of(variant)}, opts);
      print(verdict_to_json(v, witness));
      return exit_code(v.status);
    }

    if (*classify_cmd) {
      json j = json::parse(report_to_json(classify_with_switch_flags(meta)));
      if (!j.value("is_guarded", false) && !j.value("is_discrete", true)) {
        auto sw = integer_switch_checks(meta);
        if (!sw.detail.empty()) j["integer_switch_detail"] = sw.detail;
      }
      print(j);
      return 0;
    }

    if (*simulate) {
      if (enumerate) {
        json list = json::array();
        for (const auto& o : reachable_observations(meta, bounds.get()))
          list.push_back({{"private", o.is_private},
                          {"final_energies", to_strings(o.final_energies)},
                          {"duration", to_string(o.duration)}});
        print(json{{"observations", list}});
        return 0;
      }
      std::string text = script.empty() ? "[]" : script;
      if (!text.empty() && text[0] == '@') text = read_file(text.substr(1));
      Run run = replay(meta, load_script(text));
      print(run_report(meta, run));
      return 0;
    }

    if (*transform) {
      std::cout << serialize_model(stage_model(meta, stage, mode)) << "\n";
      return 0;
    }

    if (*export_cmd) {
      if (stage == "model" || stage == "apub" || stage == "apriv" || stage == "instrumented") {
        std::cout << model_to_dot(stage_model(meta, stage, mode));
        return 0;
      }
      if (stage == "regions" || stage == "pbb") {
        const DeciderOptions opts = caps.options();
        GuardedMeta ta = classify(meta).is_ta ? meta : stage_model(meta, "instrumented", mode);
        RegionAutomaton ra = build_region_automaton(ta, opts.region);
        if (stage == "regions") {
          std::cout << region_automaton_to_dot(ra, ta);
          return 0;
        }
        std::vector<std::string> counted;
        for (std::size_t i = 0; i < meta.energies.size(); ++i) counted.push_back(inc_letter(i, meta.energies.size()));
        std::vector<std::string> keep = counted;
        keep.push_back(kTick);
        std::cout << pbb_to_dot(parikh_by_block(project(ra.nfa, keep), counted, opts.parikh));
        return 0;
      }
      throw std::invalid_argument("unknown stage '" + stage + "'");
    }

    if (*oracle) {
      auto rep = oracle_compare(meta, {property_of(property), variant_of(variant)}, bounds.get(), caps.options());
      print(oracle_report_to_json(rep));
      return rep.agreement == "disagree" ? kExitFails : 0;
    }
  } catch (const UnsupportedClass& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const ModelError& e) {
    std::cerr << "model error [" << e.code() << "]: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metaopa/model.hpp"
#include "metaopa/nfa.hpp"
#include "metaopa/regions.hpp"
#include "metaopa/semantics.hpp"
#include "metaopa/semilinear.hpp"
#include "metaopa/pda.hpp"

namespace metaopa {

enum class Property { EN, ET_EN, DE, BDE };
enum class Variant { EXISTS, WEAK, FULL };
enum class Status { HOLDS, FAILS, UNSUPPORTED, RESOURCE };

const char* to_string(Property p);  // "en", "et-en", "de", "bde"
const char* to_string(Variant v);   // "exists", "weak", "full"
const char* to_string(Status s);    // "HOLDS", ...
std::optional<Property> parse_property(const std::string& s);
std::optional<Variant> parse_variant(const std::string& s);

struct OpacityQuery {
  Property property = Property::EN;
  Variant variant = Variant::EXISTS;
};

struct Verdict {
  Status status = Status::UNSUPPORTED;
  std::string pipeline;
  OpacityQuery query;
  nlohmann::json witness;  // null when absent
  std::string unsupported_reason;
  std::string notes;
  // Parikh routes keep both images and the counted letters.
  std::vector<std::string> counted;
  std::optional<SemilinearSet> private_image;
  std::optional<SemilinearSet> public_image;
};

// {status, pipeline, property, variant, witness?, unsupported_reason?, notes?}
nlohmann::json verdict_to_json(const Verdict& v, bool include_witness);

struct DeciderOptions {
  RegionOptions region;
  ParikhOptions parikh;
  PdaParikhOptions pda;
  std::size_t determinize_cap = kDefaultDeterminizeCap;
  // Bounded run search used on open cells for the existential variant.
  bool search_open_cells = true;
  EnumerationBounds search_bounds{6, Rational(1, 2), 4};
};

enum class Route { ParikhNfa, EnergyPda, GuardedEnergyPda, NfaWords, ParikhByBlock, LGeq0Pda, Unsupported };

struct Dispatch {
  Route route = Route::Unsupported;
  bool guard_removal = false;
  bool is_transform = false;
  bool bounded_search = false;  // open cell, existential variant
  std::string pipeline;
  std::string reason;  // why the cell is unsupported
  std::string notes;
};

// Table lookup on the subclass report. Non-discrete models need the
// integer-switching flags filled in.
Dispatch dispatch(const SubclassReport& r, const OpacityQuery& q);

// classify() plus the integer-switching flags for unguarded models.
SubclassReport classify_with_switch_flags(const GuardedMeta& meta);

// Parikh-by-block automaton: states are the initial state and every target of
// a tick; a t-edge carries the Parikh image of the tick-free words leading to
// a tick, an f-edge (into the single accepting state) the image of the
// tick-free words leading to acceptance.
struct PbbAutomaton {
  struct Edge {
    std::size_t src;
    std::string letter;  // "t" or "f"
    std::size_t dst;
    SemilinearSet image;
  };
  std::vector<std::string> counted;
  std::vector<std::string> state_names;
  std::size_t initial = 0;
  std::vector<bool> accepting;
  std::vector<Edge> edges;
};

PbbAutomaton parikh_by_block(const Nfa& nfa, const std::vector<std::string>& counted, const ParikhOptions& opts = {});
std::string pbb_to_dot(const PbbAutomaton& p, const std::string& name = "pbb");

struct PbbProductEdge {
  std::size_t src_a, src_b, dst_a, dst_b;
  std::string letter;
  std::size_t edge_a, edge_b;
  std::optional<Vec> common;  // nullopt: the two images do not intersect
};

struct PbbProductResult {
  bool accepting_path = false;
  std::vector<PbbProductEdge> edges;  // every explored pair of letter-matching edges
  std::vector<PbbProductEdge> path;   // an accepting path when one exists
};

PbbProductResult pbb_product_check(const PbbAutomaton& a, const PbbAutomaton& b);

Verdict decide_en(const GuardedMeta& meta, Variant v, const DeciderOptions& opts = {});
Verdict decide_et_en(const GuardedMeta& meta, Variant v, const DeciderOptions& opts = {});
Verdict decide_de(const GuardedMeta& meta, Variant v, const DeciderOptions& opts = {});
Verdict decide_bde(const GuardedMeta& meta, Variant v, const DeciderOptions& opts = {});
Verdict decide_via_is_transform(const GuardedMeta& meta, const OpacityQuery& q, const DeciderOptions& opts = {});
Verdict decide(const GuardedMeta& meta, const OpacityQuery& q, const DeciderOptions& opts = {});

// Private and public runs within the bounds with equal observations, as a
// JSON witness, or nullopt.
std::optional<nlohmann::json> bounded_exists_witness(const GuardedMeta& meta, Property p,
                                                     const EnumerationBounds& bounds);

struct OracleReport {
  std::string agreement;  // "agree", "disagree" or "inconclusive"
  Verdict verdict;
  nlohmann::json oracle;
  std::string detail;
};

OracleReport oracle_compare(const GuardedMeta& meta, const OpacityQuery& q, const EnumerationBounds& bounds,
                            const DeciderOptions& opts = {});
nlohmann::json oracle_report_to_json(const OracleReport& r);

}  // namespace metaopa

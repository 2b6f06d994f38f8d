#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metaopa/nfa.hpp"

namespace metaopa {

using Vec = std::vector<std::int64_t>;

// base + N-combinations of periods; all entries are non-negative.
struct LinearSet {
  Vec base;
  std::vector<Vec> periods;
  bool operator==(const LinearSet&) const = default;
  auto operator<=>(const LinearSet&) const = default;
};

// Finite union of linear sets of dimension `dim`; no components is the empty set.
struct SemilinearSet {
  std::size_t dim = 0;
  std::vector<LinearSet> components;

  static SemilinearSet empty(std::size_t dim);
  static SemilinearSet singleton(const Vec& v);
  static SemilinearSet linear(const Vec& base, const std::vector<Vec>& periods);
  bool is_empty() const { return components.empty(); }
  bool operator==(const SemilinearSet&) const = default;
};

// Drops zero and duplicate periods, sorts, removes duplicate components and
// components contained in another one (by a sufficient check).
SemilinearSet normalize(const SemilinearSet& s);

bool member(const LinearSet& l, const Vec& v);
bool member(const SemilinearSet& s, const Vec& v);

// L(a, P) is contained in L(b, Q) when a is in L(b, Q) and every p in P lies
// in L(0, Q). Sufficient, not necessary.
bool subsumes(const LinearSet& big, const LinearSet& small);

SemilinearSet set_union(const SemilinearSet& a, const SemilinearSet& b);
// Minkowski sum. Throws ResourceError past max_components.
SemilinearSet set_sum(const SemilinearSet& a, const SemilinearSet& b, std::size_t max_components = 100000);
// Kleene star under vector addition.
SemilinearSet set_star(const SemilinearSet& s, std::size_t max_components = 100000);

// A vector in a and b, or nullopt when the intersection is empty.
std::optional<Vec> intersection_witness(const SemilinearSet& a, const SemilinearSet& b);

struct SlInclusion {
  bool included = true;
  std::optional<Vec> counterexample;  // in subset, not in superset
};

SlInclusion includes(const SemilinearSet& superset, const SemilinearSet& subset);

// Vectors of l1-norm at most `norm` in s, sorted.
std::vector<Vec> members_up_to(const SemilinearSet& s, std::int64_t norm);

struct ParikhOptions {
  std::size_t max_states = 5000;
  std::size_t max_components = 100000;
};

// Parikh image of L(nfa) counted over `counted` (other letters are silent).
SemilinearSet parikh_of_nfa(const Nfa& nfa, const std::vector<std::string>& counted, const ParikhOptions& opts = {});

std::string to_string(const Vec& v);
// "(0,2) + α(1,1)"; several periods are numbered α1, α2, ...; "∅" when empty.
std::string to_string(const LinearSet& l);
std::string to_string(const SemilinearSet& s);
// Inverse of to_string; "a" is accepted for "α". Throws std::invalid_argument.
SemilinearSet parse_semilinear(const std::string& text, std::size_t dim = 0);

nlohmann::json to_json(const SemilinearSet& s);
SemilinearSet semilinear_from_json(const nlohmann::json& j);

}  // namespace metaopa

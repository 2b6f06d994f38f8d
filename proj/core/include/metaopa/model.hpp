#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace metaopa {

enum class Rel { Lt, Le, Ge, Gt };

const char* rel_symbol(Rel r);
bool rel_holds(int cmp, Rel r);  // cmp = sign(lhs - rhs)

struct Atom {
  std::string var;
  Rel rel;
  std::int64_t bound;

  bool operator==(const Atom&) const = default;
};

std::string to_string(const Atom& a);

// A conjunction of atoms; the empty list is "true".
struct Constraint {
  std::vector<Atom> atoms;

  bool empty() const { return atoms.empty(); }
  bool operator==(const Constraint&) const = default;
};

// x = c is stored as x <= c && x >= c.
Constraint equals(const std::string& var, std::int64_t c);

using IntMap = std::map<std::string, std::int64_t>;

struct Location {
  std::string name;
  Constraint invariant;
  IntMap rates;
  std::set<std::string> labels;
  bool is_private = false;
  bool is_final = false;
  bool is_initial = false;

  bool operator==(const Location&) const = default;
};

struct Edge {
  std::string source;
  Constraint guard;
  std::optional<std::string> action;  // nullopt is the silent action
  std::set<std::string> resets;
  IntMap updates;
  std::string target;

  bool operator==(const Edge&) const = default;
};

struct GuardedMeta {
  std::vector<std::string> actions;
  std::vector<std::string> clocks;
  std::vector<std::string> energies;  // declaration order fixes vector layouts
  std::vector<Location> locations;
  std::vector<Edge> edges;

  bool operator==(const GuardedMeta&) const = default;

  std::optional<std::size_t> find_location(const std::string& name) const;
  std::size_t location_index(const std::string& name) const;  // throws when absent
  std::optional<std::size_t> initial_location() const;
  bool is_clock(const std::string& v) const;
  bool is_energy(const std::string& v) const;
  std::optional<std::size_t> clock_index(const std::string& v) const;
  std::optional<std::size_t> energy_index(const std::string& v) const;
  std::int64_t rate(const Location& l, const std::string& energy) const;
  std::vector<std::size_t> outgoing(std::size_t loc) const;
};

std::int64_t update_of(const Edge& e, const std::string& energy);

struct Violation {
  std::string code;
  std::string message;
};

std::vector<Violation> validate(const GuardedMeta& meta);

class ModelError : public std::runtime_error {
 public:
  ModelError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct ParseOptions {
  bool require_valid = true;     // run validate() and reject on violations
  bool allow_reserved = false;   // accept names produced by the transforms
};

GuardedMeta parse_model(const std::string& text, const ParseOptions& opts = {});
GuardedMeta load_model(const std::string& path, const ParseOptions& opts = {});
std::string serialize_model(const GuardedMeta& meta);

// Names the constructions introduce. User models may not use them.
bool is_reserved_action(const std::string& name);
bool is_reserved_clock(const std::string& name);

struct SubclassReport {
  bool is_guarded = false;
  bool is_discrete = false;
  bool is_positive = false;
  std::size_t energy_count = 0;
  std::size_t clock_count = 0;
  bool is_ta = false;
  bool is_eta = false;
  bool is_meta = false;
  std::optional<bool> is_integer_switching;
  std::optional<bool> is_integer_execution_time;

  bool operator==(const SubclassReport&) const = default;
};

SubclassReport classify(const GuardedMeta& meta);
std::string report_to_json(const SubclassReport& r);

struct TwoCounterMachine {
  struct Inc {
    int counter;  // 1 or 2
    std::string from, to;
  };
  struct DecOrZero {
    int counter;
    std::string from, to_if_nonzero, to_if_zero;
  };
  using Transition = std::variant<Inc, DecOrZero>;

  std::vector<std::string> states;  // states[0] is the start state
  std::string halt_state;
  std::vector<Transition> transitions;
};

// One location per state, a single clock t pinned to 0, one energy per
// counter. The start state is marked private (unless it halts) and the halt
// state final, so machines with at least one transition give valid models.
GuardedMeta encode_two_counter_machine(const TwoCounterMachine& m);

std::string model_to_dot(const GuardedMeta& meta);

}  // namespace metaopa

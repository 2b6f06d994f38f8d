#include "metaopa/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace metaopa {

using nlohmann::json;

const char* rel_symbol(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

bool rel_holds(int cmp, Rel r) {
  switch (r) {
    case Rel::Lt: return cmp < 0;
    case Rel::Le: return cmp <= 0;
    case Rel::Ge: return cmp >= 0;
    case Rel::Gt: return cmp > 0;
  }
  return false;
}

std::string to_string(const Atom& a) {
  return a.var + " " + rel_symbol(a.rel) + " " + std::to_string(a.bound);
}

Constraint equals(const std::string& var, std::int64_t c) {
  return Constraint{{Atom{var, Rel::Le, c}, Atom{var, Rel::Ge, c}}};
}

std::optional<std::size_t> GuardedMeta::find_location(const std::string& name) const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i].name == name) return i;
  return std::nullopt;
}

std::size_t GuardedMeta::location_index(const std::string& name) const {
  auto i = find_location(name);
  if (!i) throw ModelError("unknown-location", "unknown location '" + name + "'");
  return *i;
}

std::optional<std::size_t> GuardedMeta::initial_location() const {
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i].is_initial) return i;
  return std::nullopt;
}

bool GuardedMeta::is_clock(const std::string& v) const { return clock_index(v).has_value(); }
bool GuardedMeta::is_energy(const std::string& v) const { return energy_index(v).has_value(); }

std::optional<std::size_t> GuardedMeta::clock_index(const std::string& v) const {
  auto it = std::find(clocks.begin(), clocks.end(), v);
  if (it == clocks.end()) return std::nullopt;
  return static_cast<std::size_t>(it - clocks.begin());
}

std::optional<std::size_t> GuardedMeta::energy_index(const std::string& v) const {
  auto it = std::find(energies.begin(), energies.end(), v);
  if (it == energies.end()) return std::nullopt;
  return static_cast<std::size_t>(it - energies.begin());
}

std::int64_t GuardedMeta::rate(const Location& l, const std::string& energy) const {
  auto it = l.rates.find(energy);
  return it == l.rates.end() ? 0 : it->second;
}

std::vector<std::size_t> GuardedMeta::outgoing(std::size_t loc) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].source == locations[loc].name) out.push_back(i);
  return out;
}

std::int64_t update_of(const Edge& e, const std::string& energy) {
  auto it = e.updates.find(energy);
  return it == e.updates.end() ? 0 : it->second;
}

bool is_reserved_action(const std::string& name) {
  if (name == "t" || name == "t>0" || name == "f" || name == "inc" || name == "dec") return true;
  if (!name.empty() && name[0] == '?') return true;  // energy-guard markers
  for (const char* prefix : {"inc_", "dec_"}) {
    std::string p(prefix);
    if (name.size() > p.size() && name.compare(0, p.size(), p) == 0 &&
        name.find_first_not_of("0123456789", p.size()) == std::string::npos)
      return true;
  }
  return false;
}

bool is_reserved_clock(const std::string& name) {
  return name == "cz" || name == "ct" || name == "ct_is";
}

namespace {

void check_constraint(const GuardedMeta& m, const Constraint& c, const std::string& where,
                      std::vector<Violation>& out) {
  for (const auto& a : c.atoms)
    if (!m.is_clock(a.var) && !m.is_energy(a.var))
      out.push_back({"unknown-variable", where + ": undeclared variable '" + a.var + "'"});
}

bool zero_satisfies(const Constraint& c) {
  for (const auto& a : c.atoms) {
    int cmp = a.bound > 0 ? -1 : (a.bound == 0 ? 0 : 1);
    if (!rel_holds(cmp, a.rel)) return false;
  }
  return true;
}

template <class T>
void check_unique(const std::vector<T>& names, const std::string& kind, std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second) out.push_back({"duplicate-name", "duplicate " + kind + " '" + n + "'"});
}

}  // namespace

std::vector<Violation> validate(const GuardedMeta& m) {
  std::vector<Violation> out;
  check_unique(m.actions, "action", out);
  check_unique(m.clocks, "clock", out);
  check_unique(m.energies, "energy", out);
  std::vector<std::string> locnames;
  for (const auto& l : m.locations) locnames.push_back(l.name);
  check_unique(locnames, "location", out);
  for (const auto& c : m.clocks)
    if (m.is_energy(c))
      out.push_back({"duplicate-name", "'" + c + "' declared both as clock and energy"});

  std::size_t initials = 0, privates = 0, finals = 0;
  for (const auto& l : m.locations) {
    initials += l.is_initial;
    privates += l.is_private;
    finals += l.is_final;
    if (l.is_private && l.is_final)
      out.push_back({"private-final", "location '" + l.name + "' is both private and final"});
    check_constraint(m, l.invariant, "invariant of '" + l.name + "'", out);
    for (const auto& [e, r] : l.rates)
      if (!m.is_energy(e))
        out.push_back({"unknown-variable", "rate of '" + l.name + "' names undeclared energy '" + e + "'"});
  }
  if (initials == 0) out.push_back({"no-initial", "no initial location"});
  if (initials > 1) out.push_back({"multiple-initial", "more than one initial location"});
  if (privates == 0) out.push_back({"empty-private-set", "empty private set"});
  if (finals == 0) out.push_back({"empty-final-set", "empty final set"});

  std::set<std::string> actions(m.actions.begin(), m.actions.end());
  for (std::size_t i = 0; i < m.edges.size(); ++i) {
    const auto& e = m.edges[i];
    std::string where = "edge " + std::to_string(i);
    auto src = m.find_location(e.source);
    if (!src) out.push_back({"unknown-location", where + ": unknown source '" + e.source + "'"});
    if (!m.find_location(e.target))
      out.push_back({"unknown-location", where + ": unknown target '" + e.target + "'"});
    if (src && m.locations[*src].is_final)
      out.push_back({"final-outgoing-edge", "final location has outgoing edge (" + e.source + ")"});
    if (e.action && !actions.count(*e.action))
      out.push_back({"unknown-action", where + ": undeclared action '" + *e.action + "'"});
    check_constraint(m, e.guard, where + " guard", out);
    for (const auto& r : e.resets)
      if (!m.is_clock(r)) out.push_back({"unknown-variable", where + ": reset of non-clock '" + r + "'"});
    for (const auto& [v, u] : e.updates)
      if (!m.is_energy(v)) out.push_back({"unknown-variable", where + ": update of non-energy '" + v + "'"});
  }

  if (auto init = m.initial_location(); init && initials == 1) {
    if (!zero_satisfies(m.locations[*init].invariant))
      out.push_back({"initial-outside-invariant", "initial state outside invariant"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON format

namespace {

class PathError : public std::runtime_error {
 public:
  PathError(std::string code, std::string path, const std::string& msg)
      : std::runtime_error(msg), code(std::move(code)), path(std::move(path)) {}
  std::string code, path;
};

Rel parse_rel(const std::string& op, const std::string& path) {
  if (op == "<") return Rel::Lt;
  if (op == "<=") return Rel::Le;
  if (op == ">=") return Rel::Ge;
  if (op == ">") return Rel::Gt;
  throw PathError("bad-operator", path, "unknown comparison operator '" + op + "'");
}

Constraint parse_constraint(const json& j, const std::string& path) {
  Constraint c;
  if (j.is_null()) return c;
  if (!j.is_array()) throw PathError("type", path, "constraint must be an array of [var, op, int]");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& t = j[i];
    std::string p = path + "/" + std::to_string(i);
    if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string() ||
        !t[2].is_number_integer())
      throw PathError("type", p, "atom must be [var, op, int]");
    auto var = t[0].get<std::string>();
    auto op = t[1].get<std::string>();
    auto bound = t[2].get<std::int64_t>();
    if (op == "=") {
      for (auto& a : equals(var, bound).atoms) c.atoms.push_back(a);
    } else {
      c.atoms.push_back(Atom{var, parse_rel(op, p + "/1"), bound});
    }
  }
  return c;
}

std::vector<std::string> parse_names(const json& j, const std::string& key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const auto& a = j.at(key);
  if (!a.is_array()) throw PathError("type", "/" + key, "'" + key + "' must be an array of names");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_string()) throw PathError("type", "/" + key + "/" + std::to_string(i), "name must be a string");
    out.push_back(a[i].get<std::string>());
  }
  return out;
}

IntMap parse_intmap(const json& j, const std::string& path) {
  IntMap m;
  if (j.is_null()) return m;
  if (!j.is_object()) throw PathError("type", path, "expected an object of integers");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_integer())
      throw PathError("type", path + "/" + it.key(), "expected an integer");
    auto v = it.value().get<std::int64_t>();
    if (v != 0) m[it.key()] = v;
  }
  return m;
}

bool get_bool(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) return false;
  if (!j.at(key).is_boolean()) throw PathError("type", path + "/" + key, "expected a boolean");
  return j.at(key).get<bool>();
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json constraint_json(const Constraint& c) {
  json a = json::array();
  for (const auto& at : c.atoms) a.push_back(json::array({at.var, rel_symbol(at.rel), at.bound}));
  return a;
}

}  // namespace

GuardedMeta parse_model(const std::string& text, const ParseOptions& opts) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ModelError("syntax", "syntax error at line " + std::to_string(line) + ", column " +
                                   std::to_string(col) + ": " + e.what());
  }

  GuardedMeta m;
  try {
    if (!j.is_object()) throw PathError("type", "", "model must be a JSON object");
    m.actions = parse_names(j, "actions");
    m.clocks = parse_names(j, "clocks");
    m.energies = parse_names(j, "energies");
    if (!j.contains("locations") || !j.at("locations").is_array())
      throw PathError("type", "/locations", "'locations' must be an array");
    const auto& locs = j.at("locations");
    for (std::size_t i = 0; i < locs.size(); ++i) {
      const auto& lj = locs[i];
      std::string p = "/locations/" + std::to_string(i);
      if (!lj.is_object() || !lj.contains("name") || !lj.at("name").is_string())
        throw PathError("type", p, "location needs a string 'name'");
      Location l;
      l.name = lj.at("name").get<std::string>();
      l.invariant = parse_constraint(lj.value("invariant", json()), p + "/invariant");
      l.rates = parse_intmap(lj.value("rates", json()), p + "/rates");
      for (const auto& s : lj.value("labels", json::array())) {
        if (!s.is_string()) throw PathError("type", p + "/labels", "labels must be strings");
        l.labels.insert(s.get<std::string>());
      }
      l.is_private = get_bool(lj, "private", p);
      l.is_final = get_bool(lj, "final", p);
      l.is_initial = get_bool(lj, "initial", p);
      m.locations.push_back(std::move(l));
    }
    if (j.contains("edges")) {
      const auto& es = j.at("edges");
      if (!es.is_array()) throw PathError("type", "/edges", "'edges' must be an array");
      for (std::size_t i = 0; i < es.size(); ++i) {
        const auto& ej = es[i];
        std::string p = "/edges/" + std::to_string(i);
        if (!ej.is_object() || !ej.contains("from") || !ej.contains("to") || !ej.at("from").is_string() ||
            !ej.at("to").is_string())
          throw PathError("type", p, "edge needs string 'from' and 'to'");
        Edge e;
        e.source = ej.at("from").get<std::string>();
        e.target = ej.at("to").get<std::string>();
        e.guard = parse_constraint(ej.value("guard", json()), p + "/guard");
        if (ej.contains("action") && !ej.at("action").is_null()) {
          if (!ej.at("action").is_string()) throw PathError("type", p + "/action", "action must be a string or null");
          e.action = ej.at("action").get<std::string>();
        }
        for (const auto& r : ej.value("resets", json::array())) {
          if (!r.is_string()) throw PathError("type", p + "/resets", "resets must be clock names");
          e.resets.insert(r.get<std::string>());
        }
        e.updates = parse_intmap(ej.value("updates", json()), p + "/updates");
        m.edges.push_back(std::move(e));
      }
    }
  } catch (const PathError& e) {
    throw ModelError(e.code, "at " + (e.path.empty() ? std::string("/") : e.path) + ": " + e.what());
  }

  if (!opts.allow_reserved) {
    for (const auto& a : m.actions)
      if (is_reserved_action(a)) throw ModelError("reserved-name", "action name '" + a + "' is reserved");
    for (const auto& c : m.clocks)
      if (is_reserved_clock(c)) throw ModelError("reserved-name", "clock name '" + c + "' is reserved");
    for (const auto& l : m.locations)
      if (l.name.find('#') != std::string::npos)
        throw ModelError("reserved-name", "location name '" + l.name + "' contains reserved '#'");
  }

  // Reference errors are reported even when full validation is off.
  for (const auto& v : validate(m)) {
    bool structural = v.code == "unknown-variable" || v.code == "unknown-location" ||
                      v.code == "unknown-action" || v.code == "duplicate-name";
    if (structural || opts.require_valid) throw ModelError(v.code, v.message);
  }
  return m;
}

GuardedMeta load_model(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ModelError("io", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), opts);
}

std::string serialize_model(const GuardedMeta& m) {
  json j;
  j["actions"] = m.actions;
  j["clocks"] = m.clocks;
  j["energies"] = m.energies;
  j["locations"] = json::array();
  for (const auto& l : m.locations) {
    json lj;
    lj["name"] = l.name;
    lj["invariant"] = constraint_json(l.invariant);
    lj["rates"] = json::object();
    for (const auto& [e, r] : l.rates) lj["rates"][e] = r;
    lj["labels"] = std::vector<std::string>(l.labels.begin(), l.labels.end());
    lj["private"] = l.is_private;
    lj["final"] = l.is_final;
    lj["initial"] = l.is_initial;
    j["locations"].push_back(lj);
  }
  j["edges"] = json::array();
  for (const auto& e : m.edges) {
    json ej;
    ej["from"] = e.source;
    ej["to"] = e.target;
    ej["guard"] = constraint_json(e.guard);
    ej["action"] = e.action ? json(*e.action) : json();
    ej["resets"] = std::vector<std::string>(e.resets.begin(), e.resets.end());
    ej["updates"] = json::object();
    for (const auto& [v, u] : e.updates) ej["updates"][v] = u;
    j["edges"].push_back(ej);
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

SubclassReport classify(const GuardedMeta& m) {
  SubclassReport r;
  r.energy_count = m.energies.size();
  r.clock_count = m.clocks.size();
  auto has_energy_atom = [&](const Constraint& c) {
    return std::any_of(c.atoms.begin(), c.atoms.end(), [&](const Atom& a) { return m.is_energy(a.var); });
  };
  r.is_discrete = true;
  r.is_positive = true;
  for (const auto& l : m.locations) {
    if (has_energy_atom(l.invariant)) r.is_guarded = true;
    for (const auto& [e, rate] : l.rates) {
      if (rate != 0) r.is_discrete = false;
      if (rate < 0) r.is_positive = false;
    }
  }
  for (const auto& e : m.edges) {
    if (has_energy_atom(e.guard)) r.is_guarded = true;
    for (const auto& [v, u] : e.updates)
      if (u < 0) r.is_positive = false;
  }
  r.is_ta = r.energy_count == 0;
  r.is_meta = !r.is_guarded;
  r.is_eta = r.energy_count == 1 && !r.is_guarded;
  return r;
}

std::string report_to_json(const SubclassReport& r) {
  json j;
  j["is_guarded"] = r.is_guarded;
  j["is_discrete"] = r.is_discrete;
  j["is_positive"] = r.is_positive;
  j["energy_count"] = r.energy_count;
  j["clock_count"] = r.clock_count;
  j["is_ta"] = r.is_ta;
  j["is_eta"] = r.is_eta;
  j["is_meta"] = r.is_meta;
  j["is_integer_switching"] = r.is_integer_switching ? json(*r.is_integer_switching) : json();
  j["is_integer_execution_time"] = r.is_integer_execution_time ? json(*r.is_integer_execution_time) : json();
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

GuardedMeta encode_two_counter_machine(const TwoCounterMachine& tcm) {
  std::set<std::string> sources;
  auto source_of = [](const TwoCounterMachine::Transition& t) {
    return std::visit([](const auto& x) { return x.from; }, t);
  };
  for (const auto& t : tcm.transitions)
    if (!sources.insert(source_of(t)).second)
      throw ModelError("nondeterministic", "two-counter machine has several transitions from '" + source_of(t) + "'");

  GuardedMeta m;
  m.clocks = {"t"};
  m.energies = {"eta1", "eta2"};
  auto counter = [](int c) {
    if (c != 1 && c != 2) throw ModelError("bad-counter", "counter must be 1 or 2");
    return std::string(c == 1 ? "eta1" : "eta2");
  };
  for (std::size_t i = 0; i < tcm.states.size(); ++i) {
    Location l;
    l.name = tcm.states[i];
    l.invariant = equals("t", 0);
    l.is_initial = i == 0;
    l.is_final = tcm.states[i] == tcm.halt_state;
    l.is_private = i == 0 && !l.is_final;
    m.locations.push_back(l);
  }
  for (const auto& tr : tcm.transitions) {
    if (const auto* inc = std::get_if<TwoCounterMachine::Inc>(&tr)) {
      Edge e;
      e.source = inc->from;
      e.target = inc->to;
      e.updates[counter(inc->counter)] = 1;
      m.edges.push_back(e);
    } else {
      const auto& dz = std::get<TwoCounterMachine::DecOrZero>(tr);
      auto v = counter(dz.counter);
      Edge dec;
      dec.source = dz.from;
      dec.target = dz.to_if_nonzero;
      dec.guard.atoms.push_back(Atom{v, Rel::Gt, 0});
      dec.updates[v] = -1;
      m.edges.push_back(dec);
      Edge zero;
      zero.source = dz.from;
      zero.target = dz.to_if_zero;
      zero.guard = equals(v, 0);
      m.edges.push_back(zero);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"') out += '\\';
    out += c;
  }
  return out;
}

std::string constraint_text(const Constraint& c) {
  std::string s;
  for (std::size_t i = 0; i < c.atoms.size(); ++i) s += (i ? " & " : "") + to_string(c.atoms[i]);
  return s;
}

}  // namespace

std::string model_to_dot(const GuardedMeta& m) {
  std::ostringstream os;
  os << "digraph model {\n  rankdir=LR;\n";
  std::vector<std::size_t> order(m.locations.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return m.locations[a].name < m.locations[b].name; });
  for (auto i : order) {
    const auto& l = m.locations[i];
    std::string label = l.name;
    if (!l.invariant.empty()) label += "\\n" + constraint_text(l.invariant);
    for (const auto& [e, r] : l.rates) label += "\\n" + e + "' = " + std::to_string(r);
    os << "  \"" << dot_escape(l.name) << "\" [label=\"" << dot_escape(label) << "\"";
    if (l.is_final) os << ", shape=doublecircle";
    if (l.is_private) os << ", style=filled, fillcolor=\"#fde0dd\"";
    if (l.is_initial) os << ", penwidth=2";
    os << "];\n";
  }
  std::vector<std::string> lines;
  for (const auto& e : m.edges) {
    std::string label = e.action ? *e.action : "eps";
    if (!e.guard.empty()) label += "\\n" + constraint_text(e.guard);
    for (const auto& [v, u] : e.updates) label += "\\n" + v + (u >= 0 ? ":+" : ":") + std::to_string(u);
    if (!e.resets.empty()) {
      label += "\\n";
      for (const auto& r : e.resets) label += r + ":=0 ";
    }
    lines.push_back("  \"" + dot_escape(e.source) + "\" -> \"" + dot_escape(e.target) + "\" [label=\"" +
                    dot_escape(label) + "\"];\n");
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) os << l;
  os << "}\n";
  return os.str();
}

}  // namespace metaopa

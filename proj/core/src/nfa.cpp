#include "metaopa/nfa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace metaopa {

std::size_t Nfa::add_state(bool accept, std::string name) {
  accepting.push_back(accept);
  if (!name.empty() || !state_names.empty()) {
    state_names.resize(accepting.size() - 1);
    state_names.push_back(std::move(name));
  }
  return accepting.size() - 1;
}

void Nfa::add_transition(std::size_t src, int sym, std::size_t dst) {
  transitions.push_back(Transition{src, sym, dst});
}

void Nfa::add_transition(std::size_t src, const std::string& letter, std::size_t dst) {
  add_transition(src, symbol_or_add(letter), dst);
}

std::optional<int> Nfa::symbol(const std::string& letter) const {
  for (std::size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == letter) return static_cast<int>(i);
  return std::nullopt;
}

int Nfa::symbol_or_add(const std::string& letter) {
  if (auto s = symbol(letter)) return *s;
  alphabet.push_back(letter);
  return static_cast<int>(alphabet.size() - 1);
}

std::string Nfa::state_name(std::size_t s) const {
  if (s < state_names.size() && !state_names[s].empty()) return state_names[s];
  return "q" + std::to_string(s);
}

Adjacency adjacency(const Nfa& a) {
  Adjacency adj(a.size());
  for (const auto& t : a.transitions) adj[t.src].push_back({t.sym, t.dst});
  return adj;
}

namespace {

std::vector<int> symbol_map(const std::vector<std::string>& from, const std::vector<std::string>& to,
                            bool missing_is_silent) {
  std::vector<int> map(from.size(), kEpsilon);
  for (std::size_t i = 0; i < from.size(); ++i) {
    auto it = std::find(to.begin(), to.end(), from[i]);
    if (it != to.end()) {
      map[i] = static_cast<int>(it - to.begin());
    } else if (!missing_is_silent) {
      throw std::invalid_argument("alphabet mismatch: letter '" + from[i] + "'");
    }
  }
  return map;
}

Nfa with_symbols(const Nfa& a, const std::vector<int>& map, const std::vector<std::string>& alphabet) {
  Nfa r;
  r.alphabet = alphabet;
  r.initial = a.initial;
  r.accepting = a.accepting;
  r.state_names = a.state_names;
  r.transitions.reserve(a.transitions.size());
  for (const auto& t : a.transitions) r.transitions.push_back({t.src, t.sym == kEpsilon ? kEpsilon : map[t.sym], t.dst});
  return r;
}

void check_same_alphabet(const Nfa& a, const Nfa& b) {
  std::set<std::string> sa(a.alphabet.begin(), a.alphabet.end());
  std::set<std::string> sb(b.alphabet.begin(), b.alphabet.end());
  if (sa != sb) throw std::invalid_argument("alphabet mismatch");
}

void dedupe(std::vector<Nfa::Transition>& ts) {
  std::sort(ts.begin(), ts.end(), [](const auto& x, const auto& y) {
    return std::tie(x.src, x.sym, x.dst) < std::tie(y.src, y.sym, y.dst);
  });
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

}  // namespace

Nfa project(const Nfa& a, const std::vector<std::string>& keep) {
  return with_symbols(a, symbol_map(a.alphabet, keep, true), keep);
}

Nfa relabel(const Nfa& a, const std::map<std::string, std::optional<std::string>>& rename,
            const std::vector<std::string>& alphabet) {
  std::vector<int> map(a.alphabet.size(), kEpsilon);
  for (std::size_t i = 0; i < a.alphabet.size(); ++i) {
    std::optional<std::string> target = a.alphabet[i];
    if (auto it = rename.find(a.alphabet[i]); it != rename.end()) target = it->second;
    if (!target) continue;
    auto it = std::find(alphabet.begin(), alphabet.end(), *target);
    if (it == alphabet.end()) throw std::invalid_argument("relabel target '" + *target + "' not in alphabet");
    map[i] = static_cast<int>(it - alphabet.begin());
  }
  return with_symbols(a, map, alphabet);
}

Nfa align_alphabet(const Nfa& a, const std::vector<std::string>& alphabet) {
  std::set<std::string> sa(a.alphabet.begin(), a.alphabet.end());
  std::set<std::string> sb(alphabet.begin(), alphabet.end());
  if (sa != sb) throw std::invalid_argument("alphabet mismatch");
  return with_symbols(a, symbol_map(a.alphabet, alphabet, false), alphabet);
}

std::vector<std::size_t> epsilon_closure(const Adjacency& adj, std::vector<std::size_t> states) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::size_t> stack;
  for (auto s : states)
    if (!seen[s]) {
      seen[s] = 1;
      stack.push_back(s);
    }
  std::vector<std::size_t> out;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (const auto& [sym, d] : adj[s])
      if (sym == kEpsilon && !seen[d]) {
        seen[d] = 1;
        stack.push_back(d);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Nfa remove_epsilon(const Nfa& a) {
  auto adj = adjacency(a);
  Nfa r;
  r.alphabet = a.alphabet;
  r.initial = a.initial;
  r.accepting.assign(a.size(), false);
  r.state_names = a.state_names;
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (auto c : epsilon_closure(adj, {s})) {
      if (a.accepting[c]) r.accepting[s] = true;
      for (const auto& [sym, d] : adj[c])
        if (sym != kEpsilon) r.transitions.push_back({s, sym, d});
    }
  }
  dedupe(r.transitions);
  return trim(r);
}

Nfa trim(const Nfa& a) {
  auto adj = adjacency(a);
  std::vector<std::vector<std::size_t>> radj(a.size());
  for (const auto& t : a.transitions) radj[t.dst].push_back(t.src);
  std::vector<char> fwd(a.size(), 0), bwd(a.size(), 0);
  std::vector<std::size_t> stack{a.initial};
  fwd[a.initial] = 1;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (const auto& [sym, d] : adj[s])
      if (!fwd[d]) {
        fwd[d] = 1;
        stack.push_back(d);
      }
  }
  for (std::size_t s = 0; s < a.size(); ++s)
    if (a.accepting[s]) {
      bwd[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (auto p : radj[s])
      if (!bwd[p]) {
        bwd[p] = 1;
        stack.push_back(p);
      }
  }
  Nfa r;
  r.alphabet = a.alphabet;
  std::vector<std::size_t> id(a.size(), SIZE_MAX);
  if (!bwd[a.initial]) {
    r.add_state(false, a.state_name(a.initial));
    r.initial = 0;
    return r;
  }
  for (std::size_t s = 0; s < a.size(); ++s)
    if (fwd[s] && bwd[s]) id[s] = r.add_state(a.accepting[s], s < a.state_names.size() ? a.state_names[s] : "");
  r.initial = id[a.initial];
  for (const auto& t : a.transitions)
    if (id[t.src] != SIZE_MAX && id[t.dst] != SIZE_MAX) r.transitions.push_back({id[t.src], t.sym, id[t.dst]});
  dedupe(r.transitions);
  return r;
}

Nfa determinize(const Nfa& a, std::size_t cap) {
  auto adj = adjacency(a);
  Nfa r;
  r.alphabet = a.alphabet;
  std::map<std::vector<std::size_t>, std::size_t> ids;
  std::vector<std::vector<std::size_t>> sets;
  auto intern = [&](std::vector<std::size_t> set) {
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    if (sets.size() >= cap) throw ResourceError("determinization exceeded " + std::to_string(cap) + " subset states");
    bool acc = std::any_of(set.begin(), set.end(), [&](auto s) { return a.accepting[s]; });
    auto id = r.add_state(acc);
    ids.emplace(set, id);
    sets.push_back(std::move(set));
    return id;
  };
  r.initial = intern(epsilon_closure(adj, {a.initial}));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::map<int, std::vector<std::size_t>> succ;
    for (auto s : sets[i])
      for (const auto& [sym, d] : adj[s])
        if (sym != kEpsilon) succ[sym].push_back(d);
    for (auto& [sym, ds] : succ) {
      auto target = intern(epsilon_closure(adj, ds));
      r.transitions.push_back({i, sym, target});
    }
  }
  return r;
}

Nfa complete(const Nfa& dfa) {
  Nfa r = dfa;
  std::vector<std::vector<char>> has(r.size(), std::vector<char>(r.alphabet.size(), 0));
  for (const auto& t : r.transitions) has[t.src][t.sym] = 1;
  std::optional<std::size_t> sink;
  std::size_t n = r.size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t c = 0; c < r.alphabet.size(); ++c)
      if (!has[s][c]) {
        if (!sink) {
          sink = r.add_state(false, r.state_names.empty() ? "" : "sink");
          for (std::size_t k = 0; k < r.alphabet.size(); ++k) r.add_transition(*sink, static_cast<int>(k), *sink);
        }
        r.add_transition(s, static_cast<int>(c), *sink);
      }
  return r;
}

Nfa complement(const Nfa& a, std::size_t cap) {
  Nfa d = complete(determinize(a, cap));
  for (std::size_t s = 0; s < d.size(); ++s) d.accepting[s] = !d.accepting[s];
  return d;
}

Nfa minimize(const Nfa& a, std::size_t cap) {
  Nfa d = complete(determinize(a, cap));
  std::size_t n = d.size(), k = d.alphabet.size();
  std::vector<std::vector<std::size_t>> delta(n, std::vector<std::size_t>(k, 0));
  for (const auto& t : d.transitions) delta[t.src][t.sym] = t.dst;
  std::vector<std::size_t> cls(n);
  for (std::size_t s = 0; s < n; ++s) cls[s] = d.accepting[s] ? 1 : 0;
  std::size_t classes = 0;
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> sig_ids;
    std::vector<std::size_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> sig{cls[s]};
      for (std::size_t c = 0; c < k; ++c) sig.push_back(cls[delta[s][c]]);
      auto [it, fresh] = sig_ids.emplace(sig, sig_ids.size());
      next[s] = it->second;
    }
    std::size_t count = sig_ids.size();
    cls = next;
    if (count == classes) break;
    classes = count;
  }
  Nfa r;
  r.alphabet = d.alphabet;
  for (std::size_t c = 0; c < classes; ++c) r.add_state(false);
  for (std::size_t s = 0; s < n; ++s)
    if (d.accepting[s]) r.accepting[cls[s]] = true;
  r.initial = cls[d.initial];
  for (const auto& t : d.transitions) r.transitions.push_back({cls[t.src], t.sym, cls[t.dst]});
  dedupe(r.transitions);
  return trim(r);
}

Nfa product(const Nfa& a, const Nfa& b) {
  check_same_alphabet(a, b);
  Nfa bb = align_alphabet(b, a.alphabet);
  auto adja = adjacency(a), adjb = adjacency(bb);
  Nfa r;
  r.alphabet = a.alphabet;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::vector<std::pair<std::size_t, std::size_t>> queue;
  auto intern = [&](std::size_t x, std::size_t y) {
    auto it = ids.find({x, y});
    if (it != ids.end()) return it->second;
    auto id = r.add_state(a.accepting[x] && bb.accepting[y]);
    ids.emplace(std::make_pair(x, y), id);
    queue.push_back({x, y});
    return id;
  };
  r.initial = intern(a.initial, bb.initial);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto [x, y] = queue[i];
    for (const auto& [sa, xa] : adja[x]) {
      if (sa == kEpsilon) {
        r.transitions.push_back({i, kEpsilon, intern(xa, y)});
        continue;
      }
      for (const auto& [sb, yb] : adjb[y])
        if (sb == sa) r.transitions.push_back({i, sa, intern(xa, yb)});
    }
    for (const auto& [sb, yb] : adjb[y])
      if (sb == kEpsilon) r.transitions.push_back({i, kEpsilon, intern(x, yb)});
  }
  return r;
}

bool accepts(const Nfa& a, const Word& w) { return accepting_path(a, w).has_value(); }

std::optional<Word> shortest_accepted(const Nfa& a) {
  auto adj = adjacency(a);
  const std::size_t none = SIZE_MAX;
  std::vector<std::size_t> dist(a.size(), none), parent(a.size(), none);
  std::vector<int> via(a.size(), kEpsilon);
  std::deque<std::size_t> dq{a.initial};
  dist[a.initial] = 0;
  std::vector<char> done(a.size(), 0);
  while (!dq.empty()) {
    auto s = dq.front();
    dq.pop_front();
    if (done[s]) continue;
    done[s] = 1;
    if (a.accepting[s]) {
      Word w;
      for (auto cur = s; parent[cur] != none; cur = parent[cur])
        if (via[cur] != kEpsilon) w.push_back(a.alphabet[via[cur]]);
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (const auto& [sym, d] : adj[s]) {
      std::size_t nd = dist[s] + (sym == kEpsilon ? 0 : 1);
      if (nd < dist[d]) {
        dist[d] = nd;
        parent[d] = s;
        via[d] = sym;
        if (sym == kEpsilon)
          dq.push_front(d);
        else
          dq.push_back(d);
      }
    }
  }
  return std::nullopt;
}

std::vector<Word> accepted_words(const Nfa& a, std::size_t max_len) {
  auto adj = adjacency(a);
  std::vector<Word> out;
  std::vector<std::pair<Word, std::vector<std::size_t>>> layer{{{}, epsilon_closure(adj, {a.initial})}};
  for (std::size_t len = 0; len <= max_len && !layer.empty(); ++len) {
    std::vector<std::pair<Word, std::vector<std::size_t>>> next;
    for (const auto& [w, set] : layer) {
      if (std::any_of(set.begin(), set.end(), [&](auto s) { return a.accepting[s]; })) out.push_back(w);
      if (len == max_len) continue;
      for (std::size_t c = 0; c < a.alphabet.size(); ++c) {
        std::vector<std::size_t> succ;
        for (auto s : set)
          for (const auto& [sym, d] : adj[s])
            if (sym == static_cast<int>(c)) succ.push_back(d);
        if (succ.empty()) continue;
        Word nw = w;
        nw.push_back(a.alphabet[c]);
        next.push_back({std::move(nw), epsilon_closure(adj, succ)});
      }
    }
    layer = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<std::size_t>> accepting_path(const Nfa& a, const Word& w) {
  std::vector<int> syms;
  for (const auto& l : w) {
    auto s = a.symbol(l);
    if (!s) return std::nullopt;
    syms.push_back(*s);
  }
  auto adj = adjacency(a);
  std::size_t n = a.size(), len = syms.size();
  auto idx = [&](std::size_t s, std::size_t pos) { return pos * n + s; };
  const std::size_t none = SIZE_MAX;
  std::vector<std::size_t> parent((len + 1) * n, none);
  std::vector<char> seen((len + 1) * n, 0);
  std::deque<std::size_t> q{idx(a.initial, 0)};
  seen[idx(a.initial, 0)] = 1;
  while (!q.empty()) {
    auto cur = q.front();
    q.pop_front();
    std::size_t s = cur % n, pos = cur / n;
    if (pos == len && a.accepting[s]) {
      std::vector<std::size_t> path;
      for (auto c = cur; c != none; c = parent[c]) path.push_back(c % n);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto& [sym, d] : adj[s]) {
      std::size_t nxt;
      if (sym == kEpsilon)
        nxt = idx(d, pos);
      else if (pos < len && sym == syms[pos])
        nxt = idx(d, pos + 1);
      else
        continue;
      if (!seen[nxt]) {
        seen[nxt] = 1;
        parent[nxt] = cur;
        q.push_back(nxt);
      }
    }
  }
  return std::nullopt;
}

InclusionResult nfa_inclusion(const Nfa& a, const Nfa& b, std::size_t cap) {
  check_same_alphabet(a, b);
  Nfa nb = complement(align_alphabet(b, a.alphabet), cap);
  auto w = shortest_accepted(product(a, nb));
  return InclusionResult{!w.has_value(), w};
}

IntersectionResult nfa_intersect_emptiness(const Nfa& a, const Nfa& b) {
  auto w = shortest_accepted(product(a, b));
  return IntersectionResult{!w.has_value(), w};
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "ε";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + w[i];
  return s;
}

std::string nfa_to_dot(const Nfa& a, const std::string& name) {
  auto esc = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '"') o += '\\';
      o += c;
    }
    return o;
  };
  std::ostringstream os;
  os << "digraph \"" << esc(name) << "\" {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (std::size_t s = 0; s < a.size(); ++s) {
    os << "  s" << s << " [label=\"" << esc(a.state_name(s)) << "\"";
    if (a.accepting[s]) os << ", shape=doublecircle";
    os << "];\n";
  }
  os << "  __start -> s" << a.initial << ";\n";
  auto ts = a.transitions;
  dedupe(ts);
  for (const auto& t : ts)
    os << "  s" << t.src << " -> s" << t.dst << " [label=\""
       << esc(t.sym == kEpsilon ? std::string("ε") : a.alphabet[t.sym]) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace metaopa

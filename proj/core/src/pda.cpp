#include "metaopa/pda.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "metaopa/errors.hpp"
#include "metaopa/transforms.hpp"

namespace metaopa {

std::size_t Pda::add_state(bool accept, std::string name) {
  accepting.push_back(accept);
  if (name.empty()) name = "s" + std::to_string(accepting.size() - 1);
  state_names.push_back(std::move(name));
  return accepting.size() - 1;
}

int Pda::stack_symbol(const std::string& name) {
  auto it = std::find(stack_alphabet.begin(), stack_alphabet.end(), name);
  if (it != stack_alphabet.end()) return static_cast<int>(it - stack_alphabet.begin());
  stack_alphabet.push_back(name);
  return static_cast<int>(stack_alphabet.size()) - 1;
}

int Pda::symbol_or_add(const std::string& letter) {
  auto it = std::find(alphabet.begin(), alphabet.end(), letter);
  if (it != alphabet.end()) return static_cast<int>(it - alphabet.begin());
  alphabet.push_back(letter);
  return static_cast<int>(alphabet.size()) - 1;
}

void Pda::add_edge(std::size_t src, int sym, int pop, std::vector<int> push, std::size_t dst) {
  if (src >= size() || dst >= size()) throw std::out_of_range("PDA edge endpoint is not a state");
  edges.push_back({src, sym, pop, std::move(push), dst});
}

void Pda::add_neutral(std::size_t src, int sym, std::size_t dst) {
  for (int x = 0; x < static_cast<int>(stack_alphabet.size()); ++x) add_edge(src, sym, x, {x}, dst);
}

namespace {

const std::string kInc = "inc";
const std::string kDec = "dec";

void reject_multi_energy(const Nfa& nfa) {
  for (const auto& l : nfa.alphabet)
    if (l.rfind("inc_", 0) == 0 || l.rfind("dec_", 0) == 0)
      throw UnsupportedClass("energy stack construction needs a single energy, found letter " + l);
}

std::string nfa_state_name(const Nfa& n, std::size_t s) { return n.state_name(s); }

// Pushes of length <= 2 plus a drain state reached from accepting states by
// popping the whole stack.
struct Prepared {
  Pda pda;
  std::size_t drain;
};

Prepared prepare(const Pda& in) {
  Prepared r{in, 0};
  Pda& p = r.pda;
  p.edges.clear();
  for (const auto& e : in.edges) {
    if (e.push.size() <= 2) {
      p.edges.push_back(e);
      continue;
    }
    // Push bottom-most symbols first through fresh states.
    std::size_t k = e.push.size();
    std::size_t cur = p.add_state(false, "");
    p.edges.push_back({e.src, e.sym, e.pop, {e.push[k - 2], e.push[k - 1]}, cur});
    for (std::size_t i = k - 2; i >= 1; --i) {
      std::size_t next = i == 1 ? e.dst : p.add_state(false, "");
      p.edges.push_back({cur, kEpsilon, e.push[i], {e.push[i - 1], e.push[i]}, next});
      cur = next;
    }
  }
  std::size_t original = p.size();
  r.drain = p.add_state(false, "drain");
  int g = static_cast<int>(p.stack_alphabet.size());
  for (std::size_t s = 0; s < original; ++s)
    if (p.accepting[s])
      for (int x = 0; x < g; ++x) p.edges.push_back({s, kEpsilon, x, {}, r.drain});
  for (int x = 0; x < g; ++x) p.edges.push_back({r.drain, kEpsilon, x, {}, r.drain});
  return r;
}

// Shortest-derivation lengths of the triples [p X q] (Knuth's generalization
// of Dijkstra to grammars), with back-pointers.
struct Summaries {
  std::size_t states = 0, symbols = 0;
  std::vector<std::size_t> dist;
  std::vector<std::size_t> edge;  // producing edge
  std::vector<std::size_t> mid;   // middle state for two-symbol pushes

  std::size_t id(std::size_t p, std::size_t x, std::size_t q) const { return (p * symbols + x) * states + q; }
  bool done(std::size_t p, std::size_t x, std::size_t q) const { return dist[id(p, x, q)] != SIZE_MAX; }
};

Summaries summarize(const Pda& p) {
  Summaries s;
  s.states = p.size();
  s.symbols = p.stack_alphabet.size();
  std::size_t total = s.states * s.states * s.symbols;
  s.dist.assign(total, SIZE_MAX);
  s.edge.assign(total, SIZE_MAX);
  s.mid.assign(total, SIZE_MAX);
  std::vector<std::size_t> best(total, SIZE_MAX);

  using Item = std::pair<std::size_t, std::size_t>;  // (length, triple)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  auto offer = [&](std::size_t t, std::size_t len, std::size_t e, std::size_t m) {
    if (s.dist[t] != SIZE_MAX || len >= best[t]) return;
    best[t] = len;
    s.edge[t] = e;
    s.mid[t] = m;
    pq.push({len, t});
  };

  // Edges by (dst, first pushed symbol) and two-symbol edges by second symbol.
  std::map<std::pair<std::size_t, int>, std::vector<std::size_t>> by_first;
  std::map<int, std::vector<std::size_t>> by_second;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& e = p.edges[i];
    std::size_t c = e.sym == kEpsilon ? 0 : 1;
    if (e.push.empty())
      offer(s.id(e.src, static_cast<std::size_t>(e.pop), e.dst), c, i, SIZE_MAX);
    else
      by_first[{e.dst, e.push[0]}].push_back(i);
    if (e.push.size() == 2) by_second[e.push[1]].push_back(i);
  }

  while (!pq.empty()) {
    auto [len, t] = pq.top();
    pq.pop();
    if (s.dist[t] != SIZE_MAX) continue;
    s.dist[t] = len;
    std::size_t u = t / (s.symbols * s.states);
    std::size_t y = (t / s.states) % s.symbols;
    std::size_t v = t % s.states;
    if (auto it = by_first.find({u, static_cast<int>(y)}); it != by_first.end()) {
      for (auto i : it->second) {
        const auto& e = p.edges[i];
        std::size_t c = (e.sym == kEpsilon ? 0 : 1) + len;
        std::size_t x = static_cast<std::size_t>(e.pop);
        if (e.push.size() == 1) {
          offer(s.id(e.src, x, v), c, i, SIZE_MAX);
        } else {
          std::size_t y2 = static_cast<std::size_t>(e.push[1]);
          for (std::size_t q = 0; q < s.states; ++q)
            if (s.done(v, y2, q)) offer(s.id(e.src, x, q), c + s.dist[s.id(v, y2, q)], i, v);
        }
      }
    }
    if (auto it = by_second.find(static_cast<int>(y)); it != by_second.end()) {
      for (auto i : it->second) {
        const auto& e = p.edges[i];
        std::size_t y1 = static_cast<std::size_t>(e.push[0]);
        if (!s.done(e.dst, y1, u)) continue;
        std::size_t c = (e.sym == kEpsilon ? 0 : 1) + len + s.dist[s.id(e.dst, y1, u)];
        offer(s.id(e.src, static_cast<std::size_t>(e.pop), v), c, i, u);
      }
    }
  }
  return s;
}

Word reconstruct(const Pda& p, const Summaries& s, std::size_t root) {
  Word w;
  std::vector<std::size_t> stack{root};
  while (!stack.empty()) {
    std::size_t t = stack.back();
    stack.pop_back();
    const auto& e = p.edges[s.edge[t]];
    std::size_t q = t % s.states;
    if (e.sym != kEpsilon) w.push_back(p.alphabet[static_cast<std::size_t>(e.sym)]);
    if (e.push.size() == 1) {
      stack.push_back(s.id(e.dst, static_cast<std::size_t>(e.push[0]), q));
    } else if (e.push.size() == 2) {
      std::size_t m = s.mid[t];
      // Left child is expanded first.
      stack.push_back(s.id(m, static_cast<std::size_t>(e.push[1]), q));
      stack.push_back(s.id(e.dst, static_cast<std::size_t>(e.push[0]), m));
    }
  }
  return w;
}

SemilinearSet sum_all(const std::vector<const SemilinearSet*>& parts, const Vec& tv, std::size_t cap) {
  SemilinearSet r = SemilinearSet::singleton(tv);
  for (auto* s : parts) {
    if (s->is_empty()) return SemilinearSet::empty(tv.size());
    r = set_sum(r, *s, cap);
  }
  return r;
}

// Least solution of X = F ∪ E·X by Gaussian elimination over the
// (union, sum) semiring.
std::vector<SemilinearSet> solve_linear(std::vector<SemilinearSet> f, std::vector<std::map<std::size_t, SemilinearSet>> e,
                                        std::size_t cap) {
  std::size_t m = f.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (auto it = e[k].find(k); it != e[k].end()) {
      SemilinearSet l = set_star(it->second, cap);
      e[k].erase(it);
      f[k] = set_sum(l, f[k], cap);
      for (auto& [q, s] : e[k]) s = set_sum(l, s, cap);
    }
    for (std::size_t i = k + 1; i < m; ++i) {
      auto it = e[i].find(k);
      if (it == e[i].end()) continue;
      SemilinearSet a = std::move(it->second);
      e[i].erase(it);
      f[i] = set_union(f[i], set_sum(a, f[k], cap));
      for (const auto& [q, s] : e[k]) {
        SemilinearSet add = set_sum(a, s, cap);
        auto jt = e[i].find(q);
        if (jt == e[i].end())
          e[i].emplace(q, std::move(add));
        else
          jt->second = set_union(jt->second, add);
      }
    }
  }
  std::vector<SemilinearSet> x(m);
  for (std::size_t k = m; k-- > 0;) {
    x[k] = f[k];
    for (const auto& [q, s] : e[k]) x[k] = set_union(x[k], set_sum(s, x[q], cap));
  }
  return x;
}

}  // namespace

Pda energy_pda_of_nfa(const Nfa& nfa) {
  reject_multi_energy(nfa);
  Pda p;
  int e = p.stack_symbol("e");
  for (const auto& l : nfa.alphabet) {
    if (is_guard_marker(l)) throw std::invalid_argument("guard marker " + l + " needs guarded_energy_pda");
    if (l != kInc && l != kDec) p.symbol_or_add(l);
  }
  int a = p.symbol_or_add(kDrainLetter);
  for (std::size_t s = 0; s < nfa.size(); ++s) p.add_state(false, nfa_state_name(nfa, s));
  p.initial = nfa.initial;
  for (const auto& t : nfa.transitions) {
    if (t.sym == kEpsilon) {
      p.add_neutral(t.src, kEpsilon, t.dst);
      continue;
    }
    const auto& l = nfa.alphabet[static_cast<std::size_t>(t.sym)];
    if (l == kInc) {
      p.add_edge(t.src, kEpsilon, kBottom, {e, kBottom}, t.dst);
      p.add_edge(t.src, kEpsilon, e, {e, e}, t.dst);
    } else if (l == kDec) {
      p.add_edge(t.src, kEpsilon, e, {}, t.dst);
    } else {
      p.add_neutral(t.src, p.symbol_or_add(l), t.dst);
    }
  }
  for (std::size_t s = 0; s < nfa.size(); ++s) {
    if (!nfa.accepting[s]) continue;
    p.add_edge(s, a, e, {}, s);
    std::size_t f = p.add_state(true, nfa_state_name(nfa, s) + "'");
    p.add_edge(s, kEpsilon, kBottom, {kBottom}, f);
  }
  return p;
}

Pda guarded_energy_pda(const Nfa& nfa, std::int64_t max_energy_constant) {
  if (max_energy_constant < 0) throw std::invalid_argument("M_E must be non-negative");
  reject_multi_energy(nfa);
  const std::size_t top = static_cast<std::size_t>(max_energy_constant) + 1;
  const std::size_t copies = top + 1;
  Pda p;
  int e = p.stack_symbol("e");
  std::vector<std::optional<std::pair<Rel, std::int64_t>>> marker(nfa.alphabet.size());
  for (std::size_t i = 0; i < nfa.alphabet.size(); ++i) {
    const auto& l = nfa.alphabet[i];
    if (is_guard_marker(l))
      marker[i] = parse_guard_marker(l);
    else if (l != kInc && l != kDec)
      p.symbol_or_add(l);
  }
  int a = p.symbol_or_add(kDrainLetter);
  auto copy_name = [&](std::size_t c) { return c == top ? ">" + std::to_string(max_energy_constant) : std::to_string(c); };
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t s = 0; s < nfa.size(); ++s) p.add_state(false, nfa_state_name(nfa, s) + "|" + copy_name(c));
  auto st = [&](std::size_t s, std::size_t c) { return c * nfa.size() + s; };
  p.initial = st(nfa.initial, 0);

  for (const auto& t : nfa.transitions) {
    for (std::size_t c = 0; c < copies; ++c) {
      std::size_t u = st(t.src, c);
      if (t.sym == kEpsilon) {
        p.add_neutral(u, kEpsilon, st(t.dst, c));
        continue;
      }
      std::size_t sym = static_cast<std::size_t>(t.sym);
      const auto& l = nfa.alphabet[sym];
      if (l == kInc) {
        if (c + 1 < top)
          p.add_neutral(u, kEpsilon, st(t.dst, c + 1));
        else if (c + 1 == top)
          p.add_neutral(u, kEpsilon, st(t.dst, top));
        else {
          p.add_edge(u, kEpsilon, kBottom, {e, kBottom}, st(t.dst, top));
          p.add_edge(u, kEpsilon, e, {e, e}, st(t.dst, top));
        }
      } else if (l == kDec) {
        if (c == 0) continue;
        if (c < top) {
          p.add_neutral(u, kEpsilon, st(t.dst, c - 1));
        } else {
          p.add_edge(u, kEpsilon, e, {}, st(t.dst, top));
          p.add_edge(u, kEpsilon, kBottom, {kBottom}, st(t.dst, top - 1));
        }
      } else if (marker[sym]) {
        auto [rel, bound] = *marker[sym];
        bool holds = c == top ? (rel == Rel::Gt || rel == Rel::Ge)
                              : rel_holds(static_cast<std::int64_t>(c) < bound   ? -1
                                          : static_cast<std::int64_t>(c) > bound ? 1
                                                                                 : 0,
                                          rel);
        if (holds) p.add_neutral(u, kEpsilon, st(t.dst, c));
      } else {
        p.add_neutral(u, p.symbol_or_add(l), st(t.dst, c));
      }
    }
  }

  for (std::size_t s = 0; s < nfa.size(); ++s) {
    if (!nfa.accepting[s]) continue;
    std::vector<std::size_t> drain(top);
    for (std::size_t c = 0; c < top; ++c) drain[c] = p.add_state(false, nfa_state_name(nfa, s) + "|drain" + copy_name(c));
    std::size_t f = p.add_state(true, nfa_state_name(nfa, s) + "'");
    p.add_edge(st(s, top), a, e, {}, st(s, top));
    p.add_edge(st(s, top), a, kBottom, {kBottom}, drain[top - 1]);
    for (std::size_t c = 0; c < top; ++c) {
      p.add_edge(st(s, c), kEpsilon, kBottom, {kBottom}, drain[c]);
      if (c > 0) p.add_edge(drain[c], a, kBottom, {kBottom}, drain[c - 1]);
    }
    p.add_edge(drain[0], kEpsilon, kBottom, {kBottom}, f);
  }
  return p;
}

Pda l_geq0_pda() {
  Pda p;
  int e = p.stack_symbol("e");
  int inc = p.symbol_or_add(kInc), dec = p.symbol_or_add(kDec);
  int t = p.symbol_or_add(kTick), f = p.symbol_or_add(kFlush);
  std::size_t s = p.add_state(true, "s");
  p.initial = s;
  p.add_edge(s, inc, kBottom, {e, kBottom}, s);
  p.add_edge(s, inc, e, {e, e}, s);
  p.add_neutral(s, inc, s);  // the neutral inc loop only adds slack
  p.add_edge(s, dec, e, {}, s);
  p.add_neutral(s, t, s);
  p.add_neutral(s, f, s);
  return p;
}

Pda pda_nfa_product(const Pda& p, const Nfa& n) {
  std::set<std::string> pa(p.alphabet.begin(), p.alphabet.end()), na(n.alphabet.begin(), n.alphabet.end());
  if (pa != na) throw std::invalid_argument("PDA and NFA alphabets differ");
  // NFA symbol id -> PDA symbol id.
  std::vector<int> to_p(n.alphabet.size());
  for (std::size_t i = 0; i < n.alphabet.size(); ++i)
    to_p[i] = static_cast<int>(std::find(p.alphabet.begin(), p.alphabet.end(), n.alphabet[i]) - p.alphabet.begin());
  std::vector<std::vector<std::size_t>> p_out(p.size());
  for (std::size_t i = 0; i < p.edges.size(); ++i) p_out[p.edges[i].src].push_back(i);
  std::vector<std::map<int, std::vector<std::size_t>>> n_out(n.size());
  for (const auto& t : n.transitions) n_out[t.src][t.sym == kEpsilon ? kEpsilon : to_p[t.sym]].push_back(t.dst);

  Pda r;
  r.alphabet = p.alphabet;
  r.stack_alphabet = p.stack_alphabet;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
  std::deque<std::pair<std::size_t, std::size_t>> work;
  auto get = [&](std::size_t a, std::size_t b) {
    auto [it, fresh] = ids.emplace(std::make_pair(a, b), r.size());
    if (fresh) {
      r.add_state(p.accepting[a] && n.accepting[b], p.state_names[a] + "," + n.state_name(b));
      work.emplace_back(a, b);
    }
    return it->second;
  };
  r.initial = get(p.initial, n.initial);
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    std::size_t src = ids.at({a, b});
    for (auto i : p_out[a]) {
      const auto& e = p.edges[i];
      if (e.sym == kEpsilon) {
        std::size_t dst = get(e.dst, b);
        r.add_edge(src, kEpsilon, e.pop, e.push, dst);
        continue;
      }
      auto it = n_out[b].find(e.sym);
      if (it == n_out[b].end()) continue;
      for (auto b2 : it->second) {
        std::size_t dst = get(e.dst, b2);
        r.add_edge(src, e.sym, e.pop, e.push, dst);
      }
    }
    if (auto it = n_out[b].find(kEpsilon); it != n_out[b].end())
      for (auto b2 : it->second) {
        std::size_t dst = get(a, b2);
        r.add_neutral(src, kEpsilon, dst);
      }
  }
  return r;
}

PdaEmptiness pda_emptiness(const Pda& p) {
  auto prep = prepare(p);
  auto s = summarize(prep.pda);
  std::size_t root = s.id(prep.pda.initial, kBottom, prep.drain);
  if (s.dist[root] == SIZE_MAX) return {true, std::nullopt};
  return {false, reconstruct(prep.pda, s, root)};
}

namespace {

Cfg build_cfg(const Pda& p, std::size_t cap) {
  auto prep = prepare(p);
  const Pda& q = prep.pda;
  auto s = summarize(q);
  Cfg g;
  g.terminals = q.alphabet;
  std::size_t root = s.id(q.initial, kBottom, prep.drain);
  if (s.dist[root] == SIZE_MAX) {
    g.nonterminals.push_back("[empty]");
    return g;
  }
  std::vector<std::vector<std::size_t>> by_src_pop(q.size() * q.stack_alphabet.size());
  for (std::size_t i = 0; i < q.edges.size(); ++i)
    by_src_pop[q.edges[i].src * q.stack_alphabet.size() + static_cast<std::size_t>(q.edges[i].pop)].push_back(i);

  std::map<std::size_t, std::size_t> nt;
  std::deque<std::size_t> work;
  auto name_of = [&](std::size_t t) {
    std::size_t u = t / (s.symbols * s.states), y = (t / s.states) % s.symbols, v = t % s.states;
    return "[" + q.state_names[u] + " " + q.stack_alphabet[y] + " " + q.state_names[v] + "]";
  };
  auto get = [&](std::size_t t) {
    auto [it, fresh] = nt.emplace(t, g.nonterminals.size());
    if (fresh) {
      if (g.nonterminals.size() >= cap)
        throw ResourceError("grammar exceeds " + std::to_string(cap) + " nonterminals");
      g.nonterminals.push_back(name_of(t));
      work.push_back(t);
    }
    return Cfg::Symbol{false, it->second};
  };
  g.start = get(root).id;
  while (!work.empty()) {
    std::size_t t = work.front();
    work.pop_front();
    std::size_t lhs = nt.at(t);
    std::size_t u = t / (s.symbols * s.states), x = (t / s.states) % s.symbols, v = t % s.states;
    for (auto i : by_src_pop[u * s.symbols + x]) {
      const auto& e = q.edges[i];
      std::vector<Cfg::Symbol> head;
      if (e.sym != kEpsilon) head.push_back({true, static_cast<std::size_t>(e.sym)});
      if (e.push.empty()) {
        if (e.dst == v) g.productions.push_back({lhs, head});
      } else if (e.push.size() == 1) {
        std::size_t c = s.id(e.dst, static_cast<std::size_t>(e.push[0]), v);
        if (s.dist[c] == SIZE_MAX) continue;
        auto body = head;
        body.push_back(get(c));
        g.productions.push_back({lhs, body});
      } else {
        for (std::size_t m = 0; m < s.states; ++m) {
          std::size_t c1 = s.id(e.dst, static_cast<std::size_t>(e.push[0]), m);
          std::size_t c2 = s.id(m, static_cast<std::size_t>(e.push[1]), v);
          if (s.dist[c1] == SIZE_MAX || s.dist[c2] == SIZE_MAX) continue;
          auto body = head;
          body.push_back(get(c1));
          body.push_back(get(c2));
          g.productions.push_back({lhs, body});
        }
      }
    }
  }
  return g;
}

// Strongly connected components, callees before callers.
std::vector<std::vector<std::size_t>> components(const std::vector<std::set<std::size_t>>& succ) {
  std::size_t n = succ.size();
  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != SIZE_MAX) continue;
    std::vector<std::pair<std::size_t, std::set<std::size_t>::const_iterator>> call{{root, succ[root].begin()}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, it] = call.back();
      if (it != succ[v].end()) {
        std::size_t w = *it++;
        if (index[w] == SIZE_MAX) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, succ[w].begin());
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return out;
}

}  // namespace

Cfg pda_to_cfg(const Pda& p) { return build_cfg(p, SIZE_MAX); }

SemilinearSet parikh_of_cfg(const Cfg& g, const std::vector<std::string>& counted, const PdaParikhOptions& opts) {
  const std::size_t dim = counted.size();
  if (g.productions.empty()) return SemilinearSet::empty(dim);
  const std::size_t cap = opts.max_components;
  std::vector<int> slot(g.terminals.size(), -1);
  for (std::size_t i = 0; i < g.terminals.size(); ++i) {
    auto it = std::find(counted.begin(), counted.end(), g.terminals[i]);
    if (it != counted.end()) slot[i] = static_cast<int>(it - counted.begin());
  }
  struct Prod {
    Vec tv;
    std::vector<std::size_t> nts;
  };
  std::size_t n = g.nonterminals.size();
  std::vector<std::vector<Prod>> prods(n);
  std::vector<std::set<std::size_t>> succ(n);
  for (const auto& pr : g.productions) {
    Prod p{Vec(dim, 0), {}};
    for (const auto& sym : pr.body) {
      if (!sym.terminal) {
        p.nts.push_back(sym.id);
        succ[pr.lhs].insert(sym.id);
      } else if (slot[sym.id] >= 0) {
        ++p.tv[static_cast<std::size_t>(slot[sym.id])];
      }
    }
    prods[pr.lhs].push_back(std::move(p));
  }

  std::vector<SemilinearSet> value(n, SemilinearSet::empty(dim));
  for (const auto& comp : components(succ)) {
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = i;
    const std::size_t m = comp.size();
    std::vector<SemilinearSet> nu(m, SemilinearSet::empty(dim));
    auto val = [&](std::size_t x) -> const SemilinearSet& {
      auto it = local.find(x);
      return it == local.end() ? value[x] : nu[it->second];
    };
    auto apply = [&]() {
      std::vector<SemilinearSet> r(m, SemilinearSet::empty(dim));
      for (std::size_t i = 0; i < m; ++i)
        for (const auto& p : prods[comp[i]]) {
          std::vector<const SemilinearSet*> parts;
          for (auto x : p.nts) parts.push_back(&val(x));
          r[i] = set_union(r[i], sum_all(parts, p.tv, cap));
        }
      return r;
    };
    bool recursive = m > 1 || succ[comp[0]].count(comp[0]);
    nu = apply();
    if (recursive) {
      // Newton iteration: in commutative idempotent semirings it reaches the
      // least fixed point after at most m steps.
      for (std::size_t iter = 0; iter <= m; ++iter) {
        auto f = apply();
        std::vector<std::map<std::size_t, SemilinearSet>> jac(m);
        for (std::size_t i = 0; i < m; ++i)
          for (const auto& p : prods[comp[i]])
            for (std::size_t k = 0; k < p.nts.size(); ++k) {
              auto it = local.find(p.nts[k]);
              if (it == local.end()) continue;
              std::vector<const SemilinearSet*> parts;
              for (std::size_t l = 0; l < p.nts.size(); ++l)
                if (l != k) parts.push_back(&val(p.nts[l]));
              auto d = sum_all(parts, p.tv, cap);
              if (d.is_empty()) continue;
              auto jt = jac[i].find(it->second);
              if (jt == jac[i].end())
                jac[i].emplace(it->second, std::move(d));
              else
                jt->second = set_union(jt->second, d);
            }
        auto next = solve_linear(std::move(f), std::move(jac), cap);
        if (next == nu) break;
        nu = std::move(next);
      }
    }
    for (std::size_t i = 0; i < m; ++i) value[comp[i]] = nu[i];
  }
  return value[g.start];
}

SemilinearSet parikh_of_pda(const Pda& p, const std::vector<std::string>& counted, const PdaParikhOptions& opts) {
  return parikh_of_cfg(build_cfg(p, opts.max_nonterminals), counted, opts);
}

namespace {

struct Config {
  std::size_t state;
  std::vector<int> stack;  // bottom first
  auto operator<=>(const Config&) const = default;
};

// Closure under silent moves, stacks capped at max_stack.
std::set<Config> silent_closure(const Pda& p, std::set<Config> cs, std::size_t max_stack) {
  std::deque<Config> work(cs.begin(), cs.end());
  while (!work.empty()) {
    Config c = work.front();
    work.pop_front();
    if (c.stack.empty()) continue;
    for (const auto& e : p.edges) {
      if (e.src != c.state || e.sym != kEpsilon || e.pop != c.stack.back()) continue;
      Config d{e.dst, c.stack};
      d.stack.pop_back();
      for (auto it = e.push.rbegin(); it != e.push.rend(); ++it) d.stack.push_back(*it);
      if (d.stack.size() > max_stack) continue;
      if (cs.insert(d).second) work.push_back(d);
    }
  }
  return cs;
}

std::set<Config> read(const Pda& p, const std::set<Config>& cs, int sym, std::size_t max_stack) {
  std::set<Config> out;
  for (const auto& c : cs) {
    if (c.stack.empty()) continue;
    for (const auto& e : p.edges) {
      if (e.src != c.state || e.sym != sym || e.pop != c.stack.back()) continue;
      Config d{e.dst, c.stack};
      d.stack.pop_back();
      for (auto it = e.push.rbegin(); it != e.push.rend(); ++it) d.stack.push_back(*it);
      if (d.stack.size() <= max_stack) out.insert(std::move(d));
    }
  }
  return silent_closure(p, std::move(out), max_stack);
}

bool any_accepting(const Pda& p, const std::set<Config>& cs) {
  return std::any_of(cs.begin(), cs.end(), [&](const Config& c) { return p.accepting[c.state]; });
}

}  // namespace

bool pda_accepts(const Pda& p, const Word& w, std::size_t max_stack) {
  auto cs = silent_closure(p, {Config{p.initial, {kBottom}}}, max_stack);
  for (const auto& l : w) {
    auto it = std::find(p.alphabet.begin(), p.alphabet.end(), l);
    if (it == p.alphabet.end()) return false;
    cs = read(p, cs, static_cast<int>(it - p.alphabet.begin()), max_stack);
    if (cs.empty()) return false;
  }
  return any_accepting(p, cs);
}

std::vector<Word> pda_accepted_words(const Pda& p, std::size_t max_len, std::size_t max_stack) {
  std::set<Word> out;
  std::vector<std::pair<Word, std::set<Config>>> layer{{{}, silent_closure(p, {Config{p.initial, {kBottom}}}, max_stack)}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<std::pair<Word, std::set<Config>>> next;
    for (auto& [w, cs] : layer) {
      if (any_accepting(p, cs)) out.insert(w);
      if (len == max_len) continue;
      for (std::size_t a = 0; a < p.alphabet.size(); ++a) {
        auto ds = read(p, cs, static_cast<int>(a), max_stack);
        if (ds.empty()) continue;
        Word w2 = w;
        w2.push_back(p.alphabet[a]);
        next.emplace_back(std::move(w2), std::move(ds));
      }
    }
    layer = std::move(next);
  }
  return {out.begin(), out.end()};
}

std::string pda_to_dot(const Pda& p, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
  for (std::size_t s = 0; s < p.size(); ++s) {
    os << "  n" << s << " [label=\"" << p.state_names[s] << "\"";
    if (p.accepting[s]) os << ", shape=doublecircle";
    os << "];\n";
  }
  os << "  init [shape=point];\n  init -> n" << p.initial << ";\n";
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> lines;
  for (const auto& e : p.edges) {
    std::string label = e.sym == kEpsilon ? "ε" : p.alphabet[static_cast<std::size_t>(e.sym)];
    label += ", " + p.stack_alphabet[static_cast<std::size_t>(e.pop)] + "/";
    if (e.push.empty()) label += "ε";
    for (auto x : e.push) label += p.stack_alphabet[static_cast<std::size_t>(x)];
    lines.emplace_back(e.src, e.dst, label);
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [a, b, l] : lines) os << "  n" << a << " -> n" << b << " [label=\"" << l << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace metaopa

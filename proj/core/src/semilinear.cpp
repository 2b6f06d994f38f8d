#include "metaopa/semilinear.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "metaopa/errors.hpp"
#include "metaopa/presburger.hpp"

namespace metaopa {

namespace pb = presburger;

namespace {

void check_dim(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

std::int64_t norm1(const Vec& v) {
  std::int64_t s = 0;
  for (auto x : v) s += x;
  return s;
}

void check_natural(const Vec& v) {
  for (auto x : v)
    if (x < 0) throw std::invalid_argument("semilinear vectors must be non-negative");
}

bool in_span(const std::vector<Vec>& periods, const Vec& r);

LinearSet normalize_linear(LinearSet l) {
  check_natural(l.base);
  std::vector<Vec> ps;
  for (auto& p : l.periods) {
    check_natural(p);
    if (!is_zero(p)) ps.push_back(std::move(p));
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  // A period that is an N-combination of the others adds nothing.
  for (std::size_t i = ps.size(); i-- > 0;) {
    std::vector<Vec> others;
    for (std::size_t j = 0; j < ps.size(); ++j)
      if (j != i) others.push_back(ps[j]);
    if (in_span(others, ps[i])) ps.erase(ps.begin() + static_cast<long>(i));
  }
  l.periods = std::move(ps);
  return l;
}

// Is r an N-combination of periods[i..]? Failures are memoized.
bool combination(const std::vector<Vec>& periods, std::size_t i, const Vec& r,
                 const std::vector<std::vector<char>>& support, std::set<std::pair<std::size_t, Vec>>& failed) {
  if (is_zero(r)) return true;
  if (i == periods.size()) return false;
  for (std::size_t d = 0; d < r.size(); ++d)
    if (r[d] > 0 && !support[i][d]) return false;
  auto key = std::make_pair(i, r);
  if (failed.count(key)) return false;
  const Vec& p = periods[i];
  if (is_zero(p)) return combination(periods, i + 1, r, support, failed);
  std::int64_t kmax = INT64_MAX;
  for (std::size_t d = 0; d < r.size(); ++d)
    if (p[d] > 0) kmax = std::min(kmax, r[d] / p[d]);
  Vec rest = r;
  for (std::size_t d = 0; d < r.size(); ++d) rest[d] -= kmax * p[d];
  for (std::int64_t k = kmax; k >= 0; --k) {
    if (combination(periods, i + 1, rest, support, failed)) return true;
    for (std::size_t d = 0; d < r.size(); ++d) rest[d] += p[d];
  }
  failed.insert(std::move(key));
  return false;
}

bool in_span(const std::vector<Vec>& periods, const Vec& r) {
  for (auto x : r)
    if (x < 0) return false;
  std::size_t dim = r.size();
  std::vector<std::vector<char>> support(periods.size() + 1, std::vector<char>(dim, 0));
  for (std::size_t i = periods.size(); i-- > 0;)
    for (std::size_t d = 0; d < dim; ++d) support[i][d] = support[i + 1][d] || periods[i][d] > 0;
  std::set<std::pair<std::size_t, Vec>> failed;
  return combination(periods, 0, r, support, failed);
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// base + sum of periods[i] * vars[first + i], per coordinate.
std::vector<pb::Term> linear_terms(const LinearSet& l, int first) {
  std::vector<pb::Term> ts;
  for (std::size_t d = 0; d < l.base.size(); ++d) {
    pb::Term t = pb::Term::num(l.base[d]);
    for (std::size_t i = 0; i < l.periods.size(); ++i)
      if (l.periods[i][d] != 0) t = t + pb::Term::var(first + static_cast<int>(i), l.periods[i][d]);
    ts.push_back(t);
  }
  return ts;
}

pb::Formula nonneg(int first, std::size_t count) {
  std::vector<pb::Formula> fs;
  for (std::size_t i = 0; i < count; ++i)
    fs.push_back(pb::ge(pb::Term::var(first + static_cast<int>(i)), pb::Term::num(0)));
  return pb::land(std::move(fs));
}

pb::Formula equal_terms(const std::vector<pb::Term>& a, const std::vector<pb::Term>& b) {
  std::vector<pb::Formula> fs;
  for (std::size_t d = 0; d < a.size(); ++d) fs.push_back(pb::eq(a[d], b[d]));
  return pb::land(std::move(fs));
}

std::int64_t to_i64(const BigInt& v) {
  if (!v.fits_slong_p()) throw ResourceError("witness coordinate exceeds 64 bits");
  return v.get_si();
}

Vec evaluate_linear(const LinearSet& l, const std::map<int, BigInt>& model, int first) {
  Vec v = l.base;
  for (std::size_t i = 0; i < l.periods.size(); ++i) {
    std::int64_t k = to_i64(model.at(first + static_cast<int>(i)));
    for (std::size_t d = 0; d < v.size(); ++d) v[d] += k * l.periods[i][d];
  }
  return v;
}

std::optional<Vec> pair_witness(const LinearSet& a, const LinearSet& b) {
  if (a.periods.empty()) return member(b, a.base) ? std::optional<Vec>(a.base) : std::nullopt;
  if (b.periods.empty()) return member(a, b.base) ? std::optional<Vec>(b.base) : std::nullopt;
  int m = static_cast<int>(a.periods.size());
  int n = static_cast<int>(b.periods.size());
  auto f = pb::land({nonneg(0, a.periods.size()), nonneg(m, b.periods.size()),
                     equal_terms(linear_terms(a, 0), linear_terms(b, m))});
  std::vector<int> vars;
  for (int i = 0; i < m + n; ++i) vars.push_back(i);
  auto model = pb::solve(vars, f);
  if (!model) return std::nullopt;
  Vec v = evaluate_linear(a, *model, 0);
  if (!member(a, v) || !member(b, v)) throw std::logic_error("intersection witness failed validation");
  return v;
}

// Smallest-norm vector of `sub` outside `sup`, searching norms up to `limit`.
std::optional<Vec> bounded_counterexample(const SemilinearSet& sup, const SemilinearSet& sub, std::int64_t limit) {
  for (std::int64_t n = 0; n <= limit; n = n == 0 ? 1 : n * 2) {
    for (const auto& v : members_up_to(sub, n))
      if (!member(sup, v)) return v;
  }
  return std::nullopt;
}

void members_rec(const LinearSet& l, std::size_t i, const Vec& cur, std::int64_t budget, std::set<Vec>& out) {
  if (i == l.periods.size()) {
    out.insert(cur);
    return;
  }
  std::int64_t pn = norm1(l.periods[i]);
  if (pn == 0) return members_rec(l, i + 1, cur, budget, out);
  Vec v = cur;
  for (std::int64_t used = 0; used <= budget; used += pn) {
    members_rec(l, i + 1, v, budget - used, out);
    v = add(v, l.periods[i]);
  }
}

// Drops components contained in another one.
std::vector<LinearSet> prune_subsumed(std::vector<LinearSet> cs) {
  // Larger period sets first so that they absorb the smaller ones.
  std::stable_sort(cs.begin(), cs.end(),
                   [](const LinearSet& a, const LinearSet& b) { return a.periods.size() > b.periods.size(); });
  std::vector<LinearSet> kept;
  for (const auto& c : cs) {
    bool covered = false;
    for (const auto& k : kept)
      if (subsumes(k, c)) {
        covered = true;
        break;
      }
    if (!covered) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// L(b, P) ∪ L(b + q, Q) = L(b, Q) when Q = P ∪ {q} and q ∉ P.
std::optional<LinearSet> merge(const LinearSet& a, const LinearSet& b) {
  Vec q = sub(b.base, a.base);
  if (is_zero(q) || std::any_of(q.begin(), q.end(), [](std::int64_t x) { return x < 0; })) return std::nullopt;
  if (!std::binary_search(b.periods.begin(), b.periods.end(), q)) return std::nullopt;
  if (!std::includes(b.periods.begin(), b.periods.end(), a.periods.begin(), a.periods.end())) return std::nullopt;
  if (b.periods.size() != a.periods.size() + 1) return std::nullopt;
  if (std::binary_search(a.periods.begin(), a.periods.end(), q)) return std::nullopt;
  return LinearSet{a.base, b.periods};
}

bool merge_pass(std::vector<LinearSet>& cs) {
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (i == j) continue;
      if (auto m = merge(cs[i], cs[j])) {
        cs[i] = std::move(*m);
        cs.erase(cs.begin() + static_cast<long>(j));
        return true;
      }
    }
  return false;
}

}  // namespace

SemilinearSet SemilinearSet::empty(std::size_t dim) { return SemilinearSet{dim, {}}; }

SemilinearSet SemilinearSet::singleton(const Vec& v) { return linear(v, {}); }

SemilinearSet SemilinearSet::linear(const Vec& base, const std::vector<Vec>& periods) {
  for (const auto& p : periods) check_dim(base.size(), p.size());
  return normalize(SemilinearSet{base.size(), {LinearSet{base, periods}}});
}

bool subsumes(const LinearSet& big, const LinearSet& small) {
  if (!in_span(big.periods, sub(small.base, big.base))) return false;
  for (const auto& p : small.periods)
    if (!in_span(big.periods, p)) return false;
  return true;
}

SemilinearSet normalize(const SemilinearSet& s) {
  std::vector<LinearSet> cs;
  for (const auto& c : s.components) {
    check_dim(s.dim, c.base.size());
    for (const auto& p : c.periods) check_dim(s.dim, p.size());
    cs.push_back(normalize_linear(c));
  }
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  // Pairwise pruning is quadratic; skip it on very large unions.
  if (cs.size() <= 2000) {
    do {
      cs = prune_subsumed(std::move(cs));
    } while (merge_pass(cs));
  }
  return SemilinearSet{s.dim, std::move(cs)};
}

bool member(const LinearSet& l, const Vec& v) {
  check_dim(l.base.size(), v.size());
  return in_span(l.periods, sub(v, l.base));
}

bool member(const SemilinearSet& s, const Vec& v) {
  check_dim(s.dim, v.size());
  for (const auto& c : s.components)
    if (member(c, v)) return true;
  return false;
}

SemilinearSet set_union(const SemilinearSet& a, const SemilinearSet& b) {
  check_dim(a.dim, b.dim);
  SemilinearSet r = a;
  r.components.insert(r.components.end(), b.components.begin(), b.components.end());
  return normalize(r);
}

SemilinearSet set_sum(const SemilinearSet& a, const SemilinearSet& b, std::size_t max_components) {
  check_dim(a.dim, b.dim);
  if (a.components.size() * b.components.size() > max_components)
    throw ResourceError("semilinear sum exceeds " + std::to_string(max_components) + " components");
  SemilinearSet r{a.dim, {}};
  for (const auto& x : a.components)
    for (const auto& y : b.components) {
      LinearSet l{add(x.base, y.base), x.periods};
      l.periods.insert(l.periods.end(), y.periods.begin(), y.periods.end());
      r.components.push_back(std::move(l));
    }
  return normalize(r);
}

SemilinearSet set_star(const SemilinearSet& s, std::size_t max_components) {
  // (S1 u S2)* = S1* + S2*, and L(b, P)* = {0} u L(b, P u {b}).
  SemilinearSet r = SemilinearSet::singleton(Vec(s.dim, 0));
  for (const auto& c : s.components) {
    LinearSet grown = c;
    grown.periods.push_back(c.base);
    SemilinearSet star{s.dim, {LinearSet{Vec(s.dim, 0), {}}, grown}};
    r = set_sum(r, normalize(star), max_components);
  }
  return r;
}

std::optional<Vec> intersection_witness(const SemilinearSet& a, const SemilinearSet& b) {
  check_dim(a.dim, b.dim);
  const SemilinearSet na = normalize(a), nb = normalize(b);
  for (const auto& x : na.components)
    for (const auto& y : nb.components)
      if (auto v = pair_witness(x, y)) return v;
  return std::nullopt;
}

SlInclusion includes(const SemilinearSet& superset, const SemilinearSet& subset) {
  check_dim(superset.dim, subset.dim);
  SemilinearSet sup = normalize(superset);
  SemilinearSet sub_set = normalize(subset);
  for (const auto& c : sub_set.components) {
    if (std::any_of(sup.components.begin(), sup.components.end(), [&](const LinearSet& k) { return subsumes(k, c); }))
      continue;
    if (c.periods.empty()) {
      if (!member(sup, c.base)) return {false, c.base};
      continue;
    }
    // exists lambda >= 0 such that v = c(lambda) lies in no superset component.
    int m = static_cast<int>(c.periods.size());
    auto v = linear_terms(c, 0);
    std::vector<pb::Formula> conj{nonneg(0, c.periods.size())};
    int next = m;
    for (const auto& k : sup.components) {
      std::vector<int> mu;
      for (std::size_t i = 0; i < k.periods.size(); ++i) mu.push_back(next + static_cast<int>(i));
      auto inner = pb::land({nonneg(next, k.periods.size()), equal_terms(v, linear_terms(k, next))});
      conj.push_back(pb::lnot(mu.empty() ? inner : pb::exists(mu, inner)));
      next += static_cast<int>(k.periods.size());
    }
    std::vector<int> lambda;
    for (int i = 0; i < m; ++i) lambda.push_back(i);
    auto model = pb::solve(lambda, pb::land(std::move(conj)));
    if (!model) continue;
    Vec w = evaluate_linear(c, *model, 0);
    if (member(c, w) && !member(sup, w)) return {false, w};
    // The symbolic model failed validation: fall back to a staged search.
    if (auto b = bounded_counterexample(sup, sub_set, 1 << 12)) return {false, *b};
    throw std::logic_error("non-inclusion without a bounded counterexample");
  }
  return {true, std::nullopt};
}

std::vector<Vec> members_up_to(const SemilinearSet& s, std::int64_t norm) {
  std::set<Vec> out;
  for (const auto& c : s.components) {
    std::int64_t bn = norm1(c.base);
    if (bn > norm) continue;
    members_rec(c, 0, c.base, norm - bn, out);
  }
  return {out.begin(), out.end()};
}

SemilinearSet parikh_of_nfa(const Nfa& nfa, const std::vector<std::string>& counted, const ParikhOptions& opts) {
  const std::size_t dim = counted.size();
  Nfa work = trim(remove_epsilon(project(nfa, counted)));
  if (work.size() > opts.max_states)
    throw ResourceError("Parikh extraction input has " + std::to_string(work.size()) + " states, cap " +
                        std::to_string(opts.max_states));
  try {
    Nfa m = minimize(work, 4 * opts.max_states);
    if (m.size() < work.size()) work = std::move(m);
  } catch (const ResourceError&) {
    // Keep the non-deterministic automaton.
  }
  bool empty_lang = true;
  for (std::size_t s = 0; s < work.size(); ++s)
    if (work.accepting[s]) empty_lang = false;
  if (empty_lang) return SemilinearSet::empty(dim);

  // State elimination over edges labelled by semilinear sets.
  const std::size_t n = work.size(), start = n, final = n + 1;
  std::map<std::size_t, std::map<std::size_t, SemilinearSet>> out;
  std::map<std::size_t, std::set<std::size_t>> in;
  auto add_edge = [&](std::size_t p, std::size_t q, const SemilinearSet& s) {
    auto it = out[p].find(q);
    if (it == out[p].end())
      out[p].emplace(q, s);
    else
      it->second = set_union(it->second, s);
    in[q].insert(p);
  };
  for (const auto& t : work.transitions) {
    Vec v(dim, 0);
    if (t.sym != kEpsilon) v[static_cast<std::size_t>(t.sym)] = 1;
    add_edge(t.src, t.dst, SemilinearSet::singleton(v));
  }
  add_edge(start, work.initial, SemilinearSet::singleton(Vec(dim, 0)));
  for (std::size_t s = 0; s < n; ++s)
    if (work.accepting[s]) add_edge(s, final, SemilinearSet::singleton(Vec(dim, 0)));

  std::set<std::size_t> remaining;
  for (std::size_t s = 0; s < n; ++s) remaining.insert(s);
  while (!remaining.empty()) {
    std::size_t best = *remaining.begin();
    std::size_t best_cost = SIZE_MAX;
    for (auto s : remaining) {
      std::size_t ins = in[s].size() - in[s].count(s);
      std::size_t outs = out[s].size() - out[s].count(s);
      std::size_t cost = ins * outs;
      if (cost < best_cost) {
        best_cost = cost;
        best = s;
      }
    }
    std::size_t k = best;
    remaining.erase(k);
    SemilinearSet loop = SemilinearSet::singleton(Vec(dim, 0));
    if (auto it = out[k].find(k); it != out[k].end()) loop = set_star(it->second, opts.max_components);
    std::vector<std::size_t> preds;
    for (auto p : in[k])
      if (p != k) preds.push_back(p);
    std::vector<std::pair<std::size_t, SemilinearSet>> succs;
    for (const auto& [q, s] : out[k])
      if (q != k) succs.emplace_back(q, s);
    for (auto p : preds) {
      SemilinearSet head = set_sum(out[p].at(k), loop, opts.max_components);
      for (const auto& [q, s] : succs) add_edge(p, q, set_sum(head, s, opts.max_components));
      out[p].erase(k);
    }
    for (const auto& [q, s] : succs) in[q].erase(k);
    out.erase(k);
    in.erase(k);
  }
  auto it = out[start].find(final);
  return it == out[start].end() ? SemilinearSet::empty(dim) : normalize(it->second);
}

std::string to_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

std::string to_string(const LinearSet& l) {
  std::vector<std::string> parts;
  if (l.periods.empty() || !is_zero(l.base)) parts.push_back(to_string(l.base));
  for (std::size_t i = 0; i < l.periods.size(); ++i) {
    std::string name = "α";
    if (l.periods.size() > 1) name += std::to_string(i + 1);
    parts.push_back(name + to_string(l.periods[i]));
  }
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
  return s;
}

std::string to_string(const SemilinearSet& s) {
  if (s.components.empty()) return "∅";
  std::string r;
  for (std::size_t i = 0; i < s.components.size(); ++i) r += (i ? " ∪ " : "") + to_string(s.components[i]);
  return r;
}

SemilinearSet parse_semilinear(const std::string& text, std::size_t dim) {
  // Components are separated by "∪", terms by "+".
  std::string t;
  for (std::size_t i = 0; i < text.size();) {
    if (text.compare(i, 3, "∪") == 0) {
      t += '|';
      i += 3;
    } else if (text.compare(i, 2, "α") == 0) {
      t += 'a';
      i += 2;
    } else if (text.compare(i, 3, "∅") == 0) {
      t += 'E';
      i += 3;
    } else {
      if (!std::isspace(static_cast<unsigned char>(text[i]))) t += text[i];
      ++i;
    }
  }
  auto fail = [&](const std::string& why) { throw std::invalid_argument("bad semilinear set '" + text + "': " + why); };
  if (t == "E") {
    if (dim == 0) fail("dimension of the empty set is unknown");
    return SemilinearSet::empty(dim);
  }
  SemilinearSet r{dim, {}};
  std::stringstream comps(t);
  std::string comp;
  while (std::getline(comps, comp, '|')) {
    LinearSet l;
    bool has_base = false;
    std::size_t pos = 0;
    while (pos < comp.size()) {
      bool period = false;
      if (comp[pos] == 'a') {
        period = true;
        ++pos;
        while (pos < comp.size() && std::isdigit(static_cast<unsigned char>(comp[pos]))) ++pos;
      }
      if (pos >= comp.size() || comp[pos] != '(') fail("expected '('");
      auto close = comp.find(')', pos);
      if (close == std::string::npos) fail("missing ')'");
      Vec v;
      std::stringstream nums(comp.substr(pos + 1, close - pos - 1));
      std::string num;
      while (std::getline(nums, num, ',')) {
        try {
          v.push_back(std::stoll(num));
        } catch (const std::exception&) {
          fail("bad number '" + num + "'");
        }
      }
      if (r.dim == 0) r.dim = v.size();
      if (v.size() != r.dim) fail("dimension mismatch");
      if (period) {
        l.periods.push_back(v);
      } else {
        if (has_base) fail("two bases in one component");
        l.base = v;
        has_base = true;
      }
      pos = close + 1;
      if (pos < comp.size()) {
        if (comp[pos] != '+') fail("expected '+'");
        ++pos;
      }
    }
    if (!has_base) l.base = Vec(r.dim, 0);
    r.components.push_back(std::move(l));
  }
  return normalize(r);
}

nlohmann::json to_json(const SemilinearSet& s) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : s.components) comps.push_back({{"base", c.base}, {"periods", c.periods}});
  return {{"dim", s.dim}, {"components", comps}};
}

SemilinearSet semilinear_from_json(const nlohmann::json& j) {
  SemilinearSet s{j.at("dim").get<std::size_t>(), {}};
  for (const auto& c : j.at("components"))
    s.components.push_back(LinearSet{c.at("base").get<Vec>(), c.at("periods").get<std::vector<Vec>>()});
  return normalize(s);
}

}  // namespace metaopa

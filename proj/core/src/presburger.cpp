#include "metaopa/presburger.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace metaopa::presburger {

using Kind = Node::Kind;

Term Term::var(int v, const BigInt& c) {
  Term t;
  if (c != 0) t.coef[v] = c;
  return t;
}

Term Term::num(const BigInt& c) {
  Term t;
  t.constant = c;
  return t;
}

BigInt Term::coefficient(int v) const {
  auto it = coef.find(v);
  return it == coef.end() ? BigInt(0) : it->second;
}

Term Term::operator+(const Term& o) const {
  Term r = *this;
  for (const auto& [v, c] : o.coef) {
    BigInt s = r.coefficient(v) + c;
    if (s == 0)
      r.coef.erase(v);
    else
      r.coef[v] = s;
  }
  r.constant += o.constant;
  return r;
}

Term Term::operator-(const Term& o) const { return *this + (o * BigInt(-1)); }

Term Term::operator*(const BigInt& k) const {
  Term r;
  if (k == 0) return r;
  for (const auto& [v, c] : coef) r.coef[v] = c * k;
  r.constant = constant * k;
  return r;
}

namespace {

Formula make(Kind k) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  return n;
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt fdiv(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt cdiv(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

BigInt fmod(const BigInt& a, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

BigInt abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

BigInt coef_gcd(const Term& t) {
  BigInt g = 0;
  for (const auto& [v, c] : t.coef) g = gcd(g, c);
  return g;
}

// Normalized atom construction with constant folding.
Formula atom(Kind k, Term t, BigInt d = 1) {
  switch (k) {
    case Kind::Le: {
      if (t.is_constant()) return t.constant <= 0 ? top() : bottom();
      BigInt g = coef_gcd(t);
      if (g > 1) {
        for (auto& [v, c] : t.coef) c /= g;
        t.constant = cdiv(t.constant, g);
      }
      break;
    }
    case Kind::Eq: {
      if (t.is_constant()) return t.constant == 0 ? top() : bottom();
      BigInt g = coef_gcd(t);
      if (fmod(t.constant, g) != 0) return bottom();
      if (g > 1) {
        for (auto& [v, c] : t.coef) c /= g;
        t.constant /= g;
      }
      // Orient so the smallest variable has a positive coefficient.
      if (t.coef.begin()->second < 0) t = -t;
      break;
    }
    case Kind::Dvd:
    case Kind::NDvd: {
      d = abs(d);
      if (d == 0) throw std::invalid_argument("divisibility by zero");
      Term r;
      for (const auto& [v, c] : t.coef)
        if (BigInt m = fmod(c, d); m != 0) r.coef[v] = m;
      r.constant = fmod(t.constant, d);
      t = r;
      if (d == 1) return k == Kind::Dvd ? top() : bottom();
      if (t.is_constant()) {
        bool holds = t.constant == 0;
        return (k == Kind::Dvd) == holds ? top() : bottom();
      }
      break;
    }
    default:
      throw std::logic_error("not an atom kind");
  }
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->term = std::move(t);
  n->divisor = d;
  return n;
}

bool is_atom(const Formula& f) {
  return f->kind == Kind::Le || f->kind == Kind::Eq || f->kind == Kind::Dvd || f->kind == Kind::NDvd;
}

std::string term_string(const Term& t) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : t.coef) {
    if (c < 0)
      os << (first ? "-" : " - ");
    else if (!first)
      os << " + ";
    BigInt a = abs(c);
    if (a != 1) os << a.get_str();
    os << "x" << v;
    first = false;
  }
  if (first)
    os << t.constant.get_str();
  else if (t.constant > 0)
    os << " + " << t.constant.get_str();
  else if (t.constant < 0)
    os << " - " << BigInt(-t.constant).get_str();
  return os.str();
}

bool mentions(const Formula& f, int x) {
  if (is_atom(f)) return f->term.has(x);
  for (const auto& k : f->kids)
    if (mentions(k, x)) return true;
  return false;
}

// Rebuilds f with every atom passed through fn.
template <class Fn>
Formula map_atoms(const Formula& f, Fn&& fn) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
      return f;
    case Kind::Le:
    case Kind::Eq:
    case Kind::Dvd:
    case Kind::NDvd:
      return fn(f);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> ks;
      for (const auto& k : f->kids) ks.push_back(map_atoms(k, fn));
      return f->kind == Kind::And ? land(std::move(ks)) : lor(std::move(ks));
    }
    default:
      throw std::logic_error("map_atoms expects a quantifier-free negation normal form");
  }
}

Formula negate_atom(const Formula& a) {
  const Term& t = a->term;
  switch (a->kind) {
    case Kind::Le:
      return atom(Kind::Le, -t + Term::num(1));
    case Kind::Eq:
      return lor({atom(Kind::Le, t + Term::num(1)), atom(Kind::Le, -t + Term::num(1))});
    case Kind::Dvd:
      return atom(Kind::NDvd, t, a->divisor);
    case Kind::NDvd:
      return atom(Kind::Dvd, t, a->divisor);
    default:
      throw std::logic_error("not an atom");
  }
}

// Negation normal form of a quantifier-free formula.
Formula nnf(const Formula& f, bool neg = false) {
  switch (f->kind) {
    case Kind::True:
      return neg ? bottom() : top();
    case Kind::False:
      return neg ? top() : bottom();
    case Kind::Le:
    case Kind::Eq:
    case Kind::Dvd:
    case Kind::NDvd:
      return neg ? negate_atom(f) : f;
    case Kind::Not:
      return nnf(f->kids[0], !neg);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> ks;
      for (const auto& k : f->kids) ks.push_back(nnf(k, neg));
      bool conj = (f->kind == Kind::And) != neg;
      return conj ? land(std::move(ks)) : lor(std::move(ks));
    }
    default:
      throw std::logic_error("nnf expects a quantifier-free formula");
  }
}

// x := t in an atom whose x-coefficient is arbitrary.
Formula substitute_atom(const Formula& a, int x, const Term& t) {
  BigInt c = a->term.coefficient(x);
  if (c == 0) return a;
  Term r = a->term;
  r.coef.erase(x);
  r = r + t * c;
  return atom(a->kind, r, a->divisor);
}

Formula substitute(const Formula& f, int x, const Term& t) {
  return map_atoms(f, [&](const Formula& a) { return substitute_atom(a, x, t); });
}

// Uses c*x + s = 0 to remove x from every atom (scaling by |c|).
Formula eliminate_by_equality(const Formula& f, int x, const BigInt& c, const Term& s) {
  BigInt ac = abs(c);
  BigInt sg = c > 0 ? BigInt(1) : BigInt(-1);
  auto body = map_atoms(f, [&](const Formula& a) -> Formula {
    BigInt k = a->term.coefficient(x);
    if (k == 0) return a;
    Term rest = a->term;
    rest.coef.erase(x);
    // k*|c|*x = k*sg*(c*x) = -k*sg*s
    Term r = rest * ac - s * (k * sg);
    BigInt d = a->kind == Kind::Dvd || a->kind == Kind::NDvd ? BigInt(a->divisor * ac) : BigInt(1);
    return atom(a->kind, r, d);
  });
  return land({atom(Kind::Dvd, s, ac), body});
}

void collect_atoms(const Formula& f, std::vector<Formula>& out) {
  if (is_atom(f)) {
    out.push_back(f);
    return;
  }
  for (const auto& k : f->kids) collect_atoms(k, out);
}

// Cooper elimination of x from a quantifier-free NNF formula.
Formula cooper(const Formula& phi, int x) {
  std::vector<Formula> atoms;
  collect_atoms(phi, atoms);
  BigInt l = 1;
  for (const auto& a : atoms)
    if (BigInt c = a->term.coefficient(x); c != 0) l = lcm(l, abs(c));

  // Scale so that x has coefficient +-1 (standing for l*x), then require l | x.
  Formula unit = map_atoms(phi, [&](const Formula& a) -> Formula {
    BigInt c = a->term.coefficient(x);
    if (c == 0) return a;
    BigInt factor = l / abs(c);
    Term r = a->term * factor;
    r.coef[x] = c > 0 ? BigInt(1) : BigInt(-1);
    BigInt d = (a->kind == Kind::Dvd || a->kind == Kind::NDvd) ? BigInt(a->divisor * factor) : BigInt(1);
    return atom(a->kind, r, d);
  });
  if (l > 1) unit = land({unit, atom(Kind::Dvd, Term::var(x), l)});

  atoms.clear();
  collect_atoms(unit, atoms);
  BigInt delta = 1;
  std::vector<Term> lower, upper;  // x > b candidates, x < a candidates
  std::set<std::string> seen_lower, seen_upper;
  for (const auto& a : atoms) {
    BigInt c = a->term.coefficient(x);
    if (c == 0) continue;
    Term rest = a->term;
    rest.coef.erase(x);
    switch (a->kind) {
      case Kind::Dvd:
      case Kind::NDvd:
        delta = lcm(delta, a->divisor);
        break;
      case Kind::Le:
        if (c > 0) {  // x <= -rest
          Term u = -rest + Term::num(1);
          if (seen_upper.insert(term_string(u)).second) upper.push_back(u);
        } else {  // x >= rest
          Term b = rest - Term::num(1);
          if (seen_lower.insert(term_string(b)).second) lower.push_back(b);
        }
        break;
      case Kind::Eq: {
        Term e = c > 0 ? -rest : rest;  // x = e
        Term b = e - Term::num(1), u = e + Term::num(1);
        if (seen_lower.insert(term_string(b)).second) lower.push_back(b);
        if (seen_upper.insert(term_string(u)).second) upper.push_back(u);
        break;
      }
      default:
        break;
    }
  }

  bool use_lower = lower.size() <= upper.size();
  // Infinite projection: x -> -inf (use_lower) or +inf.
  Formula inf = map_atoms(unit, [&](const Formula& a) -> Formula {
    BigInt c = a->term.coefficient(x);
    if (c == 0) return a;
    if (a->kind == Kind::Le) return ((c > 0) == use_lower) ? top() : bottom();
    if (a->kind == Kind::Eq) return bottom();
    return a;
  });

  std::vector<Formula> disj;
  for (BigInt j = 1; j <= delta; ++j) {
    if (inf->kind != Kind::False) {
      auto d = substitute(inf, x, Term::num(use_lower ? BigInt(j) : BigInt(-j)));
      if (d->kind == Kind::True) return top();
      disj.push_back(d);
    }
    for (const auto& b : use_lower ? lower : upper) {
      auto d = substitute(unit, x, use_lower ? b + Term::num(j) : b - Term::num(j));
      if (d->kind == Kind::True) return top();
      disj.push_back(d);
    }
  }
  return lor(std::move(disj));
}

Formula qe_exists(int x, const Formula& phi) {
  if (!mentions(phi, x)) return phi;
  if (phi->kind == Kind::Or) {
    std::vector<Formula> ds;
    for (const auto& k : phi->kids) {
      auto d = qe_exists(x, k);
      if (d->kind == Kind::True) return top();
      ds.push_back(d);
    }
    return lor(std::move(ds));
  }
  if (phi->kind == Kind::And) {
    std::vector<Formula> keep, with;
    for (const auto& k : phi->kids) (mentions(k, x) ? with : keep).push_back(k);
    // Prefer an equality with the smallest coefficient on x.
    const Node* best = nullptr;
    for (const auto& k : with)
      if (k->kind == Kind::Eq && (!best || abs(k->term.coefficient(x)) < abs(best->term.coefficient(x))))
        best = k.get();
    Formula inner = land(with);
    Formula elim;
    if (best) {
      Term s = best->term;
      BigInt c = s.coefficient(x);
      s.coef.erase(x);
      elim = eliminate_by_equality(inner, x, c, s);
    } else {
      elim = cooper(inner, x);
    }
    keep.push_back(elim);
    return land(std::move(keep));
  }
  if (phi->kind == Kind::Eq) {
    Term s = phi->term;
    BigInt c = s.coefficient(x);
    s.coef.erase(x);
    return atom(Kind::Dvd, s, c);
  }
  return cooper(phi, x);
}

std::string key(const Formula& f) { return to_string(f); }

Formula make_junction(Kind k, std::vector<Formula> fs) {
  const Kind absorbing = k == Kind::And ? Kind::False : Kind::True;
  const Kind neutral = k == Kind::And ? Kind::True : Kind::False;
  std::vector<Formula> flat;
  std::set<std::string> seen;
  std::vector<Formula> stack(fs.rbegin(), fs.rend());
  while (!stack.empty()) {
    auto f = stack.back();
    stack.pop_back();
    if (f->kind == absorbing) return k == Kind::And ? bottom() : top();
    if (f->kind == neutral) continue;
    if (f->kind == k) {
      for (auto it = f->kids.rbegin(); it != f->kids.rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (seen.insert(key(f)).second) flat.push_back(f);
  }
  if (flat.empty()) return k == Kind::And ? top() : bottom();
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->kids = std::move(flat);
  return n;
}

}  // namespace

Formula top() {
  static const Formula t = make(Kind::True);
  return t;
}

Formula bottom() {
  static const Formula f = make(Kind::False);
  return f;
}

Formula le(const Term& a, const Term& b) { return atom(Kind::Le, a - b); }
Formula lt(const Term& a, const Term& b) { return atom(Kind::Le, a - b + Term::num(1)); }
Formula ge(const Term& a, const Term& b) { return le(b, a); }
Formula gt(const Term& a, const Term& b) { return lt(b, a); }
Formula eq(const Term& a, const Term& b) { return atom(Kind::Eq, a - b); }
Formula dvd(const BigInt& d, const Term& t) { return atom(Kind::Dvd, t, d); }

Formula land(std::vector<Formula> fs) { return make_junction(Kind::And, std::move(fs)); }
Formula lor(std::vector<Formula> fs) { return make_junction(Kind::Or, std::move(fs)); }

Formula lnot(const Formula& f) {
  if (f->kind == Kind::True) return bottom();
  if (f->kind == Kind::False) return top();
  if (f->kind == Kind::Not) return f->kids[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->kids = {f};
  return n;
}

Formula exists(int v, const Formula& body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exists;
  n->var = v;
  n->kids = {body};
  return n;
}

Formula exists(const std::vector<int>& vs, const Formula& body) {
  Formula f = body;
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) f = exists(*it, f);
  return f;
}

Formula forall(int v, const Formula& body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Forall;
  n->var = v;
  n->kids = {body};
  return n;
}

Formula forall(const std::vector<int>& vs, const Formula& body) {
  Formula f = body;
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) f = forall(*it, f);
  return f;
}

Formula eliminate(const Formula& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Le:
    case Kind::Eq:
    case Kind::Dvd:
    case Kind::NDvd:
      return f;
    case Kind::Not:
      return nnf(lnot(eliminate(f->kids[0])));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> ks;
      for (const auto& k : f->kids) ks.push_back(eliminate(k));
      return nnf(f->kind == Kind::And ? land(std::move(ks)) : lor(std::move(ks)));
    }
    case Kind::Exists:
      return qe_exists(f->var, nnf(eliminate(f->kids[0])));
    case Kind::Forall:
      return nnf(lnot(qe_exists(f->var, nnf(lnot(eliminate(f->kids[0]))))));
  }
  throw std::logic_error("unknown formula kind");
}

bool evaluate(const Formula& f, const std::map<int, BigInt>& env) {
  auto value = [&](const Term& t) {
    BigInt s = t.constant;
    for (const auto& [v, c] : t.coef) {
      auto it = env.find(v);
      if (it == env.end()) throw std::invalid_argument("unassigned variable x" + std::to_string(v));
      s += c * it->second;
    }
    return s;
  };
  switch (f->kind) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Le:
      return value(f->term) <= 0;
    case Kind::Eq:
      return value(f->term) == 0;
    case Kind::Dvd:
      return fmod(value(f->term), f->divisor) == 0;
    case Kind::NDvd:
      return fmod(value(f->term), f->divisor) != 0;
    case Kind::Not:
      return !evaluate(f->kids[0], env);
    case Kind::And:
      for (const auto& k : f->kids)
        if (!evaluate(k, env)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : f->kids)
        if (evaluate(k, env)) return true;
      return false;
    default:
      return evaluate(eliminate(f), env);
  }
}

bool decide(const Formula& f) {
  Formula q = eliminate(f);
  if (q->kind == Kind::True) return true;
  if (q->kind == Kind::False) return false;
  return evaluate(q, {});
}

namespace {

// A value of x satisfying a quantifier-free formula whose only free variable
// is x. Truth is periodic in x between critical points, so a finite candidate
// set suffices.
std::optional<BigInt> find_value(const Formula& psi, int x) {
  std::vector<Formula> atoms;
  collect_atoms(psi, atoms);
  BigInt delta = 1;
  std::vector<BigInt> crit{0};
  for (const auto& a : atoms) {
    BigInt c = a->term.coefficient(x);
    if (c == 0) continue;
    if (a->kind == Kind::Dvd || a->kind == Kind::NDvd) {
      delta = lcm(delta, a->divisor);
    } else {
      BigInt r = -a->term.constant;
      crit.push_back(fdiv(r, c));
      crit.push_back(cdiv(r, c));
    }
  }
  std::set<BigInt> cand;
  for (const auto& p : crit)
    for (BigInt k = -delta - 1; k <= delta + 1; ++k) cand.insert(p + k);
  std::vector<BigInt> order(cand.begin(), cand.end());
  std::stable_sort(order.begin(), order.end(), [](const BigInt& a, const BigInt& b) {
    BigInt aa = abs(a), ab = abs(b);
    if (aa != ab) return aa < ab;
    return a > b;
  });
  for (const auto& v : order)
    if (evaluate(psi, {{x, v}})) return v;
  return std::nullopt;
}

}  // namespace

std::optional<std::map<int, BigInt>> solve(const std::vector<int>& vars, const Formula& f) {
  Formula g = eliminate(f);
  std::map<int, BigInt> model;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    std::vector<int> rest(vars.begin() + static_cast<long>(i) + 1, vars.end());
    Formula psi = eliminate(exists(rest, g));
    if (psi->kind == Kind::False) return std::nullopt;
    BigInt v = 0;
    if (psi->kind != Kind::True) {
      auto found = find_value(psi, vars[i]);
      if (!found) return std::nullopt;
      v = *found;
    }
    model[vars[i]] = v;
    g = substitute(g, vars[i], Term::num(v));
  }
  if (g->kind == Kind::False) return std::nullopt;
  if (g->kind != Kind::True && !evaluate(g, {})) return std::nullopt;
  return model;
}

std::string to_string(const Formula& f) {
  switch (f->kind) {
    case Kind::True:
      return "true";
    case Kind::False:
      return "false";
    case Kind::Le:
      return term_string(f->term) + " <= 0";
    case Kind::Eq:
      return term_string(f->term) + " = 0";
    case Kind::Dvd:
      return f->divisor.get_str() + " | " + term_string(f->term);
    case Kind::NDvd:
      return f->divisor.get_str() + " !| " + term_string(f->term);
    case Kind::Not:
      return "!(" + to_string(f->kids[0]) + ")";
    case Kind::And:
    case Kind::Or: {
      std::string s = "(";
      for (std::size_t i = 0; i < f->kids.size(); ++i) {
        if (i) s += f->kind == Kind::And ? " & " : " | ";
        s += to_string(f->kids[i]);
      }
      return s + ")";
    }
    case Kind::Exists:
      return "E x" + std::to_string(f->var) + ". " + to_string(f->kids[0]);
    case Kind::Forall:
      return "A x" + std::to_string(f->var) + ". " + to_string(f->kids[0]);
  }
  return "?";
}

}  // namespace metaopa::presburger

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "metaopa/rational.hpp"

namespace metaopa::presburger {

// Integer linear term: sum of coef[v] * x_v + constant.
struct Term {
  std::map<int, BigInt> coef;
  BigInt constant = 0;

  static Term var(int v, const BigInt& c = 1);
  static Term num(const BigInt& c);

  BigInt coefficient(int v) const;
  bool has(int v) const { return coef.count(v) != 0; }
  bool is_constant() const { return coef.empty(); }

  Term operator+(const Term& o) const;
  Term operator-(const Term& o) const;
  Term operator*(const BigInt& k) const;
  Term operator-() const { return *this * BigInt(-1); }
  bool operator==(const Term& o) const { return coef == o.coef && constant == o.constant; }
};

struct Node;
using Formula = std::shared_ptr<const Node>;

// Atoms: Le means term <= 0, Eq means term = 0, Dvd means divisor | term.
struct Node {
  enum class Kind { True, False, Le, Eq, Dvd, NDvd, And, Or, Not, Exists, Forall } kind;
  Term term;
  BigInt divisor = 1;
  std::vector<Formula> kids;
  int var = -1;
};

Formula top();
Formula bottom();
Formula le(const Term& a, const Term& b);  // a <= b
Formula lt(const Term& a, const Term& b);
Formula ge(const Term& a, const Term& b);
Formula gt(const Term& a, const Term& b);
Formula eq(const Term& a, const Term& b);
Formula dvd(const BigInt& d, const Term& t);
Formula land(std::vector<Formula> fs);
Formula lor(std::vector<Formula> fs);
Formula lnot(const Formula& f);
Formula exists(int v, const Formula& body);
Formula exists(const std::vector<int>& vs, const Formula& body);
Formula forall(int v, const Formula& body);
Formula forall(const std::vector<int>& vs, const Formula& body);

// Quantifier-free equivalent (free variables allowed).
Formula eliminate(const Formula& f);

// Truth value of a closed formula.
bool decide(const Formula& f);

// Satisfying assignment for `vars` of a formula whose free variables are
// among `vars` (inner quantifiers allowed), or nullopt when unsatisfiable.
std::optional<std::map<int, BigInt>> solve(const std::vector<int>& vars, const Formula& f);

// Evaluates a quantifier-free formula under a full assignment.
bool evaluate(const Formula& f, const std::map<int, BigInt>& env);

std::string to_string(const Formula& f);

}  // namespace metaopa::presburger

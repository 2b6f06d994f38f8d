#pragma once

#include <string>
#include <vector>

#include "metaopa/presburger.hpp"

namespace metaopa::testing {

struct PresburgerCase {
  std::string text;
  presburger::Formula sentence;
  bool expected;
};

// Closed sentences over the integers with hand-checked truth values.
inline std::vector<PresburgerCase> presburger_cases() {
  namespace pb = presburger;
  using pb::Term;
  const Term x = Term::var(0), y = Term::var(1), z = Term::var(2), a = Term::var(3), b = Term::var(4);
  auto n = [](long v) { return Term::num(BigInt(v)); };
  auto k = [](long v) { return BigInt(v); };
  auto implies = [](const pb::Formula& p, const pb::Formula& q) { return pb::lor({pb::lnot(p), q}); };
  auto nonneg = [&](const Term& t) { return pb::ge(t, n(0)); };

  return {
      {"ex x. 2x = 4", pb::exists(0, pb::eq(x * k(2), n(4))), true},
      {"ex x. 2x = 3", pb::exists(0, pb::eq(x * k(2), n(3))), false},
      {"all x. ex y. y = x + 1", pb::forall(0, pb::exists(1, pb::eq(y, x + n(1)))), true},
      {"all x. ex y. x = 2y or x = 2y + 1",
       pb::forall(0, pb::exists(1, pb::lor({pb::eq(x, y * k(2)), pb::eq(x, y * k(2) + n(1))}))), true},
      {"all x. ex y. x = 2y", pb::forall(0, pb::exists(1, pb::eq(x, y * k(2)))), false},
      {"ex x. 0 < x < 1", pb::exists(0, pb::land({pb::gt(x, n(0)), pb::lt(x, n(1))})), false},
      {"ex x. 7 <= 3x <= 8", pb::exists(0, pb::land({pb::ge(x * k(3), n(7)), pb::le(x * k(3), n(8))})), false},
      {"ex x. 7 <= 3x <= 9", pb::exists(0, pb::land({pb::ge(x * k(3), n(7)), pb::le(x * k(3), n(9))})), true},
      {"all x. x >= 0 or x < 0", pb::forall(0, pb::lor({pb::ge(x, n(0)), pb::lt(x, n(0))})), true},
      {"all x y. x < y -> x + 1 <= y", pb::forall({0, 1}, implies(pb::lt(x, y), pb::le(x + n(1), y))), true},
      {"ex x y. 6x + 10y = 1", pb::exists({0, 1}, pb::eq(x * k(6) + y * k(10), n(1))), false},
      {"ex x y. 6x + 10y = 2", pb::exists({0, 1}, pb::eq(x * k(6) + y * k(10), n(2))), true},
      {"ex x y >= 0. 6x + 9y = 15",
       pb::exists({0, 1}, pb::land({pb::eq(x * k(6) + y * k(9), n(15)), nonneg(x), nonneg(y)})), true},
      {"ex x y >= 0. 6x + 9y = 3",
       pb::exists({0, 1}, pb::land({pb::eq(x * k(6) + y * k(9), n(3)), nonneg(x), nonneg(y)})), false},
      {"all x >= 8. ex a b >= 0. x = 3a + 5b",
       pb::forall(0, implies(pb::ge(x, n(8)),
                             pb::exists({3, 4}, pb::land({nonneg(a), nonneg(b), pb::eq(x, a * k(3) + b * k(5))})))),
       true},
      {"all x >= 7. ex a b >= 0. x = 3a + 5b",
       pb::forall(0, implies(pb::ge(x, n(7)),
                             pb::exists({3, 4}, pb::land({nonneg(a), nonneg(b), pb::eq(x, a * k(3) + b * k(5))})))),
       false},
      {"ex x. 2|x and 3|x and 0 < x < 6",
       pb::exists(0, pb::land({pb::dvd(k(2), x), pb::dvd(k(3), x), pb::gt(x, n(0)), pb::lt(x, n(6))})), false},
      {"ex x. 2|x and 3|x and 0 < x <= 6",
       pb::exists(0, pb::land({pb::dvd(k(2), x), pb::dvd(k(3), x), pb::gt(x, n(0)), pb::le(x, n(6))})), true},
      {"all x. 2|x or 2|x+1", pb::forall(0, pb::lor({pb::dvd(k(2), x), pb::dvd(k(2), x + n(1))})), true},
      {"all x. 3|x or 3|x+1", pb::forall(0, pb::lor({pb::dvd(k(3), x), pb::dvd(k(3), x + n(1))})), false},
      {"all x. ex y. 3y <= x < 3y + 3",
       pb::forall(0, pb::exists(1, pb::land({pb::le(y * k(3), x), pb::lt(x, y * k(3) + n(3))}))), true},
      {"ex x. all y. x <= y", pb::exists(0, pb::forall(1, pb::le(x, y))), false},
      {"ex x. all y >= 0. x <= y", pb::exists(0, pb::forall(1, implies(nonneg(y), pb::le(x, y)))), true},
      {"all x y. x <= y and y <= x -> x = y",
       pb::forall({0, 1}, implies(pb::land({pb::le(x, y), pb::le(y, x)}), pb::eq(x, y))), true},
      {"ex x y z. x + y + z = 10 and x > y > z > 2",
       pb::exists({0, 1, 2}, pb::land({pb::eq(x + y + z, n(10)), pb::gt(x, y), pb::gt(y, z), pb::gt(z, n(2))})),
       false},
      {"ex x y z. x + y + z = 12 and x > y > z > 2",
       pb::exists({0, 1, 2}, pb::land({pb::eq(x + y + z, n(12)), pb::gt(x, y), pb::gt(y, z), pb::gt(z, n(2))})),
       true},
      {"all x. ex y. x < y < x + 2", pb::forall(0, pb::exists(1, pb::land({pb::lt(x, y), pb::lt(y, x + n(2))}))),
       true},
      {"all x. ex y. x < y < x + 1", pb::forall(0, pb::exists(1, pb::land({pb::lt(x, y), pb::lt(y, x + n(1))}))),
       false},
      {"ex x. x = 5 and not 5|x", pb::exists(0, pb::land({pb::eq(x, n(5)), pb::lnot(pb::dvd(k(5), x))})), false},
      {"all x. ex y z. x = 4y + 7z", pb::forall(0, pb::exists({1, 2}, pb::eq(x, y * k(4) + z * k(7)))), true},
  };
}

}  // namespace metaopa::testing

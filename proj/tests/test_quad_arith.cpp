#include "bianchi/quad_arith.hpp"

#include <random>
#include <set>

#include "doctest.h"
#include "test_util.hpp"

using namespace bianchi;
using bianchi::testutil::random_integral;
using bianchi::testutil::random_quadint;
using bianchi::testutil::random_sl2;

TEST_CASE("field construction") {
  FieldData F1 = FieldData::make(1);
  CHECK(!F1.half);
  CHECK(F1.units.size() == 4);
  CHECK(F1.mul({0, 1}, {0, 1}) == QuadInt{-1, 0});  // i^2 = -1

  FieldData F2 = FieldData::make(2);
  CHECK(!F2.half);
  CHECK(F2.units.size() == 2);
  CHECK(F2.mul({0, 1}, {0, 1}) == QuadInt{-2, 0});

  FieldData F3 = FieldData::make(3);
  CHECK(F3.half);
  CHECK(F3.units.size() == 6);
  // Eisenstein: w^2 = w - 1, w^6 = 1
  QuadInt w{0, 1}, acc{1, 0};
  for (int i = 0; i < 6; ++i) acc = F3.mul(acc, w);
  CHECK(acc == QuadInt{1, 0});

  CHECK_THROWS(FieldData::make(5));
  for (int d : {1, 2, 3, 7, 11}) {
    FieldData F = FieldData::make(d);
    for (const QuadInt& u : F.units) CHECK(F.norm(u) == 1);
  }
}

TEST_CASE("norm and conjugation are multiplicative") {
  std::mt19937_64 rng(1);
  for (int d : {1, 2, 3, 7, 11}) {
    FieldData F = FieldData::make(d);
    for (int i = 0; i < 50; ++i) {
      QuadInt a = random_quadint(rng, -9, 9), b = random_quadint(rng, -9, 9);
      CHECK(F.norm(F.mul(a, b)) == F.norm(a) * F.norm(b));
      CHECK(F.conj(F.mul(a, b)) == F.mul(F.conj(a), F.conj(b)));
      CHECK(F.norm(a) == F.norm(F.conj(a)));
      CHECK(F.mul(a, F.conj(a)) == QuadInt{static_cast<long long>(F.norm(a)), 0});
    }
  }
}

TEST_CASE("euclidean division") {
  FieldData F2 = FieldData::make(2);
  QuadInt q, r;
  F2.divmod({5, 0}, {2, 0}, q, r);
  CHECK(F2.norm(r) < 4);
  CHECK(F2.add(F2.mul(q, {2, 0}), r) == QuadInt{5, 0});

  F2.divmod({0, 1}, {1, 0}, q, r);
  CHECK(q == QuadInt{0, 1});
  CHECK(r.is_zero());

  // minimizing quotient found by exhaustive box scan
  std::mt19937_64 rng(7);
  for (int d : {1, 2, 3, 7, 11}) {
    FieldData F = FieldData::make(d);
    for (int i = 0; i < 200; ++i) {
      QuadInt a = random_quadint(rng, -12, 12);
      QuadInt b = random_quadint(rng, -5, 5);
      if (b.is_zero()) continue;
      F.divmod(a, b, q, r);
      CHECK(F.add(F.mul(q, b), r) == a);
      CHECK(F.norm(r) < F.norm(b));
      __int128 best = -1;
      for (long long qx = -30; qx <= 30; ++qx)
        for (long long qy = -30; qy <= 30; ++qy) {
          __int128 n = F.norm(F.sub(a, F.mul({qx, qy}, b)));
          if (best < 0 || n < best) best = n;
        }
      CHECK(F.norm(r) == best);
    }
  }
  CHECK_THROWS(F2.divmod({1, 0}, {0, 0}, q, r));
}

TEST_CASE("case from the norm inequality edge: 3+w by w in Z[sqrt(-2)]") {
  FieldData F = FieldData::make(2);
  QuadInt q, r;
  F.divmod({3, 1}, {0, 1}, q, r);
  CHECK(F.norm(r) < 2);
}

TEST_CASE("split primes and reduction maps") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 11);
  std::set<std::string> lams{quadint_to_string(sp.lambda), quadint_to_string(sp.lambda_bar)};
  CHECK(lams == std::set<std::string>{"3+w", "3-w"});
  // tau1 goes with the least root of x^2 = -2 mod 11, which is 3
  CHECK(sp.root1 == 3);
  CHECK(sp.root2 == 8);
  CHECK(sp.tau1({0, 1}) == 3);
  CHECK(sp.tau2({0, 1}) == 8);
  CHECK(sp.tau1(sp.lambda) == 0);
  CHECK(sp.tau2(sp.lambda_bar) == 0);
  CHECK(sp.tau1({7, 0}) == 7);

  CHECK_THROWS(split_prime(F, 5));   // -2 is not a square mod 5
  CHECK_THROWS(split_prime(F, 2));   // ramified
  CHECK_THROWS(split_prime(FieldData::make(1), 7));  // inert

  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    QuadInt a = random_quadint(rng, -20, 20), b = random_quadint(rng, -20, 20);
    CHECK(sp.tau1(F.add(a, b)) == (sp.tau1(a) + sp.tau1(b)) % 11);
    CHECK(sp.tau1(F.mul(a, b)) == (sp.tau1(a) * sp.tau1(b)) % 11);
    CHECK(sp.tau2(F.mul(a, b)) == (sp.tau2(a) * sp.tau2(b)) % 11);
    CHECK(sp.tau1(F.conj(a)) == sp.tau2(a));
  }
  CHECK(sp.tau1({0, 1}) != sp.tau2({0, 1}));
}

TEST_CASE("iota involution") {
  std::mt19937_64 rng(2);
  FieldData F = FieldData::make(7);
  for (int i = 0; i < 40; ++i) {
    Mat2 m = random_integral(F, rng, 3);
    Mat2 prod = F.mmul(F.iota(m), m);
    QuadInt det = F.det(m);
    CHECK(prod.a == det);
    CHECK(prod.d == det);
    CHECK(prod.b.is_zero());
    CHECK(prod.c.is_zero());
  }
}

TEST_CASE("double coset membership") {
  FieldData F = FieldData::make(2);
  QuadInt pi{1, 1};  // norm 3
  Mat2 diag{pi, {0, 0}, {0, 0}, {1, 0}};
  CHECK(double_coset_member(F, diag, pi));
  Mat2 scalar{pi, {0, 0}, {0, 0}, pi};
  CHECK(!double_coset_member(F, scalar, pi));
  Mat2 upper{{1, 0}, {3, 0}, {0, 0}, pi};
  CHECK(double_coset_member(F, upper, pi));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 25; ++i) {
    Mat2 g1 = random_sl2(F, rng), g2 = random_sl2(F, rng);
    Mat2 m = random_integral(F, rng, 2);
    bool before = double_coset_member(F, m, pi);
    bool after = double_coset_member(F, F.mmul(F.mmul(g1, m), g2), pi);
    CHECK(before == after);
  }
}

TEST_CASE("prime enumeration") {
  FieldData F2 = FieldData::make(2);
  auto ps = enumerate_primes(F2, 3, {});
  REQUIRE(ps.size() == 3);
  CHECK(quadint_to_string(ps[0]) == "w");
  CHECK(quadint_to_string(ps[1]) == "1+w");
  CHECK(quadint_to_string(ps[2]) == "1-w");

  auto ps50 = enumerate_primes(F2, 50, {{11, 0}});
  for (const QuadInt& p : ps50) {
    CHECK(F2.is_unit(F2.gcd(p, {11, 0})));
    CHECK(!(p == QuadInt{3, 1}));
    CHECK(!(p == QuadInt{3, -1}));
  }

  FieldData F1 = FieldData::make(1);
  auto p2 = enumerate_primes(F1, 2, {});
  REQUIRE(p2.size() == 1);
  CHECK(quadint_to_string(p2[0]) == "1+w");

  // each returned element is a canonical associate and they generate
  // distinct ideals
  for (size_t i = 0; i < ps50.size(); ++i) {
    CHECK(F2.canonical_associate(ps50[i]) == ps50[i]);
    for (size_t j = i + 1; j < ps50.size(); ++j)
      CHECK(F2.is_unit(F2.gcd(ps50[i], ps50[j])));
  }
}

TEST_CASE("residue contexts") {
  std::mt19937_64 rng(8);
  for (int d : {1, 2, 3, 11}) {
    FieldData F = FieldData::make(d);
    for (QuadInt m : {QuadInt{3, 1}, QuadInt{2, 0}, QuadInt{5, 0}, QuadInt{1, 2}}) {
      if (m.is_zero()) continue;
      ResidueCtx R(F, m);
      CHECK(R.count() == static_cast<long long>(F.norm(m)));
      CHECK(static_cast<long long>(R.all_residues().size()) == R.count());
      for (int i = 0; i < 50; ++i) {
        QuadInt v = random_quadint(rng, -30, 30);
        QuadInt r = R.reduce(v);
        CHECK(R.reduce(r) == r);
        CHECK(F.divides(m, F.sub(v, r)));
        QuadInt shift = F.add(v, F.mul(random_quadint(rng, -4, 4), m));
        CHECK(R.reduce(shift) == r);
      }
    }
  }
}

TEST_CASE("string round trips") {
  CHECK(quadint_to_string({3, 2}) == "3+2w");
  CHECK(quadint_to_string({1, -3}) == "1-3w");
  CHECK(quadint_to_string({0, 1}) == "w");
  CHECK(quadint_to_string({0, -1}) == "-w");
  CHECK(quadint_to_string({-1, 1}) == "-1+w");
  CHECK(quadint_to_string({4, 0}) == "4");
  CHECK(quadint_to_string({0, 0}) == "0");
  CHECK(parse_quadint("3 + 2w") == QuadInt{3, 2});
  CHECK(parse_quadint("-w") == QuadInt{0, -1});
  CHECK(parse_quadint("11") == QuadInt{11, 0});
  CHECK(parse_quadint("w-1") == QuadInt{-1, 1});
  CHECK_THROWS(parse_quadint(""));
  CHECK_THROWS(parse_quadint("x+1"));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    QuadInt q = random_quadint(rng, -99, 99);
    CHECK(parse_quadint(quadint_to_string(q)) == q);
  }
}

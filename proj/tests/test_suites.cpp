#include "bianchi/suites.hpp"

#include <cstdio>
#include <filesystem>

#include "bianchi/cache.hpp"
#include "doctest.h"

using namespace bianchi;

TEST_CASE("fast verification suites are green") {
  CHECK(suite_exactness().all_pass());
  CHECK(suite_pairings().all_pass());
  CHECK(suite_invariants().all_pass());
  CHECK(suite_twist(12345).all_pass());
  CHECK(suite_shapiro().all_pass());
}

TEST_CASE("weight reduction sweep at the small field") {
  CongruenceSubgroup level_one{CongruenceSubgroup::Kind::Gamma0, {1, 0}, {1, 0}};
  WeightReductionReport R = weight_reduction_check(2, 3, level_one, {}, 41, 4, 4);
  CHECK(R.all_matched);
  CHECK(!R.matches.empty());
  CHECK(R.unresolved == 0);
  CHECK(static_cast<int>(R.primes.size()) >= 9);
  // the (0,0) weight at twist (0,0) must be among the matched ones
  bool saw_triv = false;
  for (const auto& m : R.matches)
    if (m.weight.r == 0 && m.weight.s == 0 && m.weight.a == 0 && m.weight.b == 0 && m.matched)
      saw_triv = true;
  CHECK(saw_triv);
}

TEST_CASE("single-weight check and lambda experiment mode run") {
  CongruenceSubgroup level_one{CongruenceSubgroup::Kind::Gamma0, {1, 0}, {1, 0}};
  WeightSpec w = WeightSpec::parse("E:2,2,1,1");
  WeightReductionReport R = weight_reduction_check(2, 3, level_one, {w}, 41, 4, 2);
  CHECK(R.all_matched);
  // one-sided targets assert nothing but must produce a report
  WeightReductionReport L = weight_reduction_check(2, 3, level_one, {w}, 41, 4, 2, "lambda");
  CHECK(L.target_mode == "lambda");
  CHECK(!L.matches.empty());
}

TEST_CASE("h1 spaces through Gamma1 levels") {
  Session S = Session::make(2, 3);
  CongruenceSubgroup g1{CongruenceSubgroup::Kind::Gamma1, {3, 1}, {1, 0}};
  CohomologySpace H = build_h1_space(S, g1, WeightSpec::parse("triv"));
  CHECK(H.M->dim == 120);
  CHECK(H.dim() >= 1);
  std::vector<QuadInt> primes = hecke_prime_list(S, g1, 17);
  for (const QuadInt& p : primes) {
    CHECK(S.F.is_unit(S.F.gcd(p, {3, 0})));
    CHECK(S.F.is_unit(S.F.gcd(p, {3, 1})));
  }
  auto ops = build_operators(S, H, primes);
  CHECK(!ops.empty());
  Fp Fl(3);
  for (size_t i = 0; i + 1 < ops.size(); ++i)
    CHECK(mat_mul(Fl, ops[i].matrix, ops[i + 1].matrix) ==
          mat_mul(Fl, ops[i + 1].matrix, ops[i].matrix));
}

TEST_CASE("disk cache stores, verifies and survives corruption") {
  std::string dir = "cache_test_tmp";
  std::filesystem::remove_all(dir);
  DiskCache cache{dir, false};
  CHECK(!cache.load("key").has_value());
  cache.store("key", "payload-1");
  auto hit = cache.load("key");
  REQUIRE(hit.has_value());
  CHECK(*hit == "payload-1");
  // corrupt the file: the loader must reject it and report a miss
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    std::FILE* f = std::fopen(e.path().c_str(), "w");
    std::fputs("{\"key\":\"key\",\"payload\":\"tampered\",\"hash\":\"0\"}", f);
    std::fclose(f);
  }
  CHECK(!cache.load("key").has_value());
  std::filesystem::remove_all(dir);
}

TEST_CASE("coset tables round trip through JSON with verification") {
  Session S = Session::make(2, 11);
  CongruenceSubgroup H{CongruenceSubgroup::Kind::Gamma0, {3, 1}, {1, 0}};
  CosetTable T = coset_table(*S.P, H);
  std::string blob = coset_table_to_json(T);
  CosetTable T2 = coset_table_from_json(*S.P, blob);
  CHECK(T2.reps.size() == T.reps.size());
  CHECK(T2.reps == T.reps);
  for (size_t g = 0; g < T.gen_action.size(); ++g)
    for (size_t i = 0; i < T.reps.size(); ++i)
      CHECK(T2.gen_action[g][i].target == T.gen_action[g][i].target);
  // corrupted data is rejected
  std::string bad = blob;
  auto pos = bad.find("\"target\":");
  bad.replace(pos, 10, "\"target\":9");
  CHECK_THROWS(coset_table_from_json(*S.P, bad));

  // end to end through the cache
  std::string dir = "coset_cache_tmp";
  std::filesystem::remove_all(dir);
  DiskCache cache{dir, false};
  CongruenceSubgroup lev{CongruenceSubgroup::Kind::Gamma0, {3, 1}, {1, 0}};
  CohomologySpace H1a = build_h1_space(S, lev, WeightSpec::parse("triv"), &cache);
  CohomologySpace H1b = build_h1_space(S, lev, WeightSpec::parse("triv"), &cache);
  CHECK(H1a.dim() == H1b.dim());
  CHECK(H1a.basis == H1b.basis);
  std::filesystem::remove_all(dir);
}

TEST_CASE("weight reduction spot checks bind the other Euclidean fields") {
  CongruenceSubgroup level_one{CongruenceSubgroup::Kind::Gamma0, {1, 0}, {1, 0}};
  // d=3 with ell=7, d=7 with ell=11, d=11 with ell=5
  struct Case {
    int d, ell, r, s, a, b;
    long long bound;
  };
  for (const Case& c : {Case{3, 7, 2, 2, 1, 0, 20}, Case{7, 11, 2, 0, 0, 1, 12},
                        Case{11, 5, 1, 1, 1, 1, 12}}) {
    WeightSpec w;
    w.kind = WeightSpec::Kind::E;
    w.r = c.r;
    w.s = c.s;
    w.a = c.a;
    w.b = c.b;
    WeightReductionReport R = weight_reduction_check(c.d, c.ell, level_one, {w}, c.bound, 4, 2);
    CHECK(R.all_matched);
    CHECK(static_cast<int>(R.primes.size()) >= 3);
  }
}

TEST_CASE("user-supplied presentations for non-Euclidean fields") {
  // a partial relator set for d=19: enough to load, act and take invariants;
  // relators must still evaluate to the identity exactly
  std::string pres = R"({
    "d": 19,
    "names": ["a", "t", "u"],
    "generators": [["0","-1","1","0"], ["1","1","0","1"], ["1","w","0","1"]],
    "relators": [[1,1,1,1], [2,1,2,1,2,1,1,1], [2,3,-2,-3],
                 [1,1,2,-1,-1,-2], [1,1,3,-1,-1,-3]],
    "minus_identity": [1,1],
    "roles": {"s": 1, "t": 2, "u": 3}
  })";
  GroupPresentation P = presentation_from_json(pres);
  CHECK(P.F.d == 19);
  FieldData F = FieldData::make(19);
  SplitPrime sp = split_prime(F, 5);  // -19 is a square mod 5
  CHECK(sp.tau1(sp.lambda) == 0);
  // invariants only need the generator actions, not a complete relator set
  CHECK(h0(trivial_module(F, sp), P.gens).dim() == 1);
  CHECK(h0(build_E_ab(F, sp, 2, 2, 0, 0), P.gens).dim() == 0);
  CHECK(h0(build_I_rs(F, sp, 0, 0), P.gens).dim() == 1);
  // the word problem is refused outside the Euclidean fields
  CHECK_THROWS(word_decompose(P, FieldData::minus_identity()));
}

TEST_CASE("Gamma0 eigensystems reappear at the Gamma1 level") {
  Session S = Session::make(2, 11);
  std::vector<QuadInt> primes{{0, 1}, {1, 1}, {1, -1}, {3, 2}};
  CongruenceSubgroup g0{CongruenceSubgroup::Kind::Gamma0, {3, 1}, {1, 0}};
  CongruenceSubgroup g1{CongruenceSubgroup::Kind::Gamma1, {3, 1}, {1, 0}};
  CohomologySpace H0s = build_h1_space(S, g0, WeightSpec::parse("triv"));
  CohomologySpace H1s = build_h1_space(S, g1, WeightSpec::parse("triv"));
  CHECK(H0s.dim() == 2);
  CHECK(H1s.dim() >= H0s.dim());
  EigenReport e0 = eigensystems(build_operators(S, H0s, primes), 4);
  EigenReport e1 = eigensystems(build_operators(S, H1s, primes), 4);
  for (const auto& s0 : e0.systems) {
    bool found = false;
    for (const auto& s1 : e1.systems)
      if (systems_equal_on_support(s0, s1, 4)) found = true;
    CHECK(found);
  }
}

TEST_CASE("Hecke action on the invariant corners is the coset count") {
  for (auto [d, ell] : std::vector<std::pair<int, int>>{{2, 3}, {1, 5}}) {
    Session S = Session::make(d, ell);
    CongruenceSubgroup trivial{CongruenceSubgroup::Kind::Gamma0, {1, 0}, {1, 0}};
    Fp Fl(static_cast<uint32_t>(ell));
    for (auto [r, s] : std::vector<std::pair<int, int>>{{0, 0}, {ell - 1, ell - 1}}) {
      CohomologySpace H = h0(build_I_rs(S.F, S.sp, r, s), S.P->gens);
      REQUIRE(H.dim() == 1);
      for (const QuadInt& pi : hecke_prime_list(S, trivial, 12)) {
        HeckeOperator T = hecke_matrix(H, pi, hecke_reps(*S.P, pi, trivial));
        CHECK(T.matrix.at(0, 0) == Fl.reduce(static_cast<long long>(S.F.norm(pi)) + 1));
      }
    }
  }
}

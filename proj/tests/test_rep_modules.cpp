#include "bianchi/rep_modules.hpp"

#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace bianchi;
using bianchi::testutil::random_integral;
using bianchi::testutil::random_sl2;

namespace {

// monoid elements with determinant invertible mod ell; the module maps are
// equivariant exactly on this part of the monoid (at r = 0 the boundary maps
// do not commute with matrices whose reduction is singular)
std::vector<Mat2> delta_samples(const FieldData& F, const SplitPrime& sp, std::mt19937_64& rng,
                                int count) {
  std::vector<Mat2> out;
  while (static_cast<int>(out.size()) < count) {
    Mat2 m = random_integral(F, rng, 2);
    QuadInt det = F.det(m);
    if (sp.tau1(det) == 0 || sp.tau2(det) == 0) continue;
    out.push_back(m);
  }
  return out;
}

// element of SL2(O) congruent to the identity mod ell
Mat2 principal_element(const FieldData& F, int ell, std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> small(-1, 1);
  Mat2 m = FieldData::identity();
  for (int i = 0; i < 4; ++i) {
    QuadInt z{ell * small(rng), ell * small(rng)};
    Mat2 e = (i % 2) ? Mat2{{1, 0}, z, {0, 0}, {1, 0}} : Mat2{{1, 0}, {0, 0}, z, {1, 0}};
    m = F.mmul(m, e);
  }
  return m;
}

}  // namespace

TEST_CASE("symmetric power action by substitution") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 11);
  ModulePtr E2 = build_E(F, sp, 2, false);
  Mat2 g{{1, 0}, {1, 0}, {0, 0}, {1, 0}};  // [[1,1],[0,1]]
  const FpMat& a = E2->act(g);
  // X^2 -> X^2 + 2XY + Y^2, XY -> XY + Y^2, Y^2 -> Y^2
  CHECK(a.at(0, 0) == 1);
  CHECK(a.at(0, 1) == 2);
  CHECK(a.at(0, 2) == 1);
  CHECK(a.at(1, 0) == 0);
  CHECK(a.at(1, 1) == 1);
  CHECK(a.at(1, 2) == 1);
  CHECK(a.at(2, 2) == 1);
  CHECK(a.at(2, 0) == 0);

  ModulePtr E0 = build_E(F, sp, 0, false);
  CHECK(E0->act(g) == FpMat::identity(1));
  CHECK(E2->act(FieldData::identity()) == FpMat::identity(3));
}

TEST_CASE("module actions are multiplicative") {
  std::mt19937_64 rng(31);
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  std::vector<ModulePtr> mods = {build_E(F, sp, 2, false), build_E(F, sp, 1, true),
                                 build_I(F, sp, 1, false), build_I(F, sp, 0, true),
                                 build_E_ab(F, sp, 1, 1, 1, 0), build_I_rs(F, sp, 2, 1)};
  for (const ModulePtr& M : mods) {
    const Fp& Fl = M->Fl;
    for (int i = 0; i < 12; ++i) {
      Mat2 g = random_integral(F, rng, 2);
      Mat2 h = random_integral(F, rng, 2);
      CHECK(M->act(F.mmul(g, h)) == mat_mul(Fl, M->act(g), M->act(h)));
    }
    CHECK(M->act(FieldData::identity()) == FpMat::identity(M->dim));
  }
}

TEST_CASE("congruence-trivial elements act trivially") {
  std::mt19937_64 rng(37);
  FieldData F = FieldData::make(1);
  SplitPrime sp = split_prime(F, 5);
  std::vector<ModulePtr> mods = {build_E_ab(F, sp, 2, 3, 1, 2), build_I_rs(F, sp, 1, 1)};
  for (const ModulePtr& M : mods)
    for (int i = 0; i < 8; ++i)
      CHECK(M->act(principal_element(F, 5, rng)) == FpMat::identity(M->dim));
}

TEST_CASE("determinant twist") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 11);
  ModulePtr E1 = build_E(F, sp, 1, false);
  CHECK(twist_det(E1, 0, false) == E1);
  std::mt19937_64 rng(41);
  ModulePtr T1 = twist_det(E1, 1, false);
  for (int i = 0; i < 10; ++i) {
    Mat2 g = random_sl2(F, rng);
    CHECK(T1->act(g) == E1->act(g));  // det = 1
  }
  QuadInt pi{1, 1};
  Mat2 dg{pi, {0, 0}, {0, 0}, {1, 0}};
  CHECK(T1->act(dg) == mat_scale(E1->Fl, sp.tau1(pi), E1->act(dg)));
}

TEST_CASE("tensor dimensions") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 11);
  CHECK(build_E_ab(F, sp, 10, 10, 0, 0)->dim == 121);
  CHECK(tensor(build_E(F, sp, 2, false), build_E(F, sp, 3, true))->dim == 12);
  ModulePtr triv = trivial_module(F, sp);
  ModulePtr E2 = build_E(F, sp, 2, false);
  ModulePtr T = tensor(E2, triv);
  std::mt19937_64 rng(43);
  for (int i = 0; i < 10; ++i) {
    Mat2 g = random_integral(F, rng, 2);
    CHECK(T->act(g) == E2->act(g));
  }
}

TEST_CASE("I modules: dimension, homogeneity, central scaling") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  for (int n = 0; n < 2; ++n) CHECK(build_I(F, sp, n, false)->dim == 4);
  // I_k = I_{k + (ell-1)}
  ModulePtr I0 = build_I(F, sp, 0, false);
  ModulePtr I2 = build_I(F, sp, 2, false);
  std::mt19937_64 rng(47);
  for (int i = 0; i < 8; ++i) {
    Mat2 g = random_integral(F, rng, 2);
    CHECK(I0->act(g) == build_I(F, sp, 2 - 2, false)->act(g));
    CHECK(I2->act(g) == build_I(F, sp, 2 + 2, false)->act(g));
  }
  // scaling by 2 on degree-2 functions: f(2v) = 4 f(v) = f(v) mod 3
  Mat2 two{{2, 0}, {0, 0}, {0, 0}, {2, 0}};
  CHECK(I2->act(two) == FpMat::identity(4));
  ModulePtr I1 = build_I(F, sp, 1, false);
  CHECK(I1->act(two) == mat_scale(I1->Fl, 2, FpMat::identity(4)));
  CHECK(I1->act(FieldData::identity()) == FpMat::identity(4));
}

TEST_CASE("alpha maps: evaluation of polynomials") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  ModuleMap al = map_alpha(F, sp, 2, false);
  // row of XY over section (1,0),(1,1),(1,2),(0,1)
  CHECK(al.matrix.at(1, 0) == 0);
  CHECK(al.matrix.at(1, 1) == 1);
  CHECK(al.matrix.at(1, 2) == 2);
  CHECK(al.matrix.at(1, 3) == 0);
  ModuleMap a0 = map_alpha(F, sp, 0, false);
  for (int j = 0; j < 4; ++j) CHECK(a0.matrix.at(0, j) == 1);
  for (int r = 0; r <= 2; ++r) {
    ModuleMap ar = map_alpha(F, sp, r, false);
    CHECK(rank(ar.source->Fl, ar.matrix) == r + 1);
  }
}

TEST_CASE("beta maps: hand value, composition, rank") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  ModuleMap be = map_beta(F, sp, 1, false);
  // beta_1(e_{(1,0)}) = Y
  CHECK(be.matrix.at(0, 0) == 0);
  CHECK(be.matrix.at(0, 1) == 1);
  Fp Fl(3);
  for (int r = 0; r <= 2; ++r) {
    ModuleMap al = map_alpha(F, sp, r, false);
    ModuleMap br = map_beta(F, sp, r, false);
    FpMat comp = mat_mul(Fl, al.matrix, br.matrix);
    CHECK(comp == FpMat(r + 1, 3 - r));
    CHECK(rank(Fl, br.matrix) == 3 - r);
  }
}

TEST_CASE("maps intertwine the monoid action") {
  std::mt19937_64 rng(53);
  for (auto [d, ell] : std::vector<std::pair<int, int>>{{2, 3}, {1, 5}}) {
    FieldData F = FieldData::make(d);
    SplitPrime sp = split_prime(F, ell);
    std::vector<Mat2> tests = builtin_presentation(F).gens;
    auto extra = delta_samples(F, sp, rng, 10);
    tests.insert(tests.end(), extra.begin(), extra.end());
    for (int r = 0; r < ell; ++r) {
      CHECK(intertwines(map_alpha(F, sp, r, false), tests));
      CHECK(intertwines(map_beta(F, sp, r, false), tests));
      CHECK(intertwines(map_alpha(F, sp, r, true), tests));
      CHECK(intertwines(map_beta(F, sp, r, true), tests));
    }
    for (int r = 0; r < ell; r += 2)
      for (int s = 0; s < ell; s += 2) {
        FourTermData D = build_four_term(F, sp, r, s);
        CHECK(intertwines(D.iota, tests));
        CHECK(intertwines(D.pi, tests));
        CHECK(intertwines(D.pi_prime, tests));
        WData W = build_W(F, sp, r, s);
        CHECK(intertwines(W.inclusion, tests));
      }
  }
}

TEST_CASE("four-term exactness with dimension count") {
  for (auto [d, ell] : std::vector<std::pair<int, int>>{{2, 3}, {1, 5}}) {
    FieldData F = FieldData::make(d);
    SplitPrime sp = split_prime(F, ell);
    Fp Fl(static_cast<uint32_t>(ell));
    for (int r = 0; r < ell; ++r)
      for (int s = 0; s < ell; ++s) {
        FourTermData D = build_four_term(F, sp, r, s);
        CHECK(D.U->dim == (ell - r) * (ell + 1) + (ell + 1) * (ell - s));
        CHECK(D.V->dim == (ell - r) * (ell - s));
        int rk_iota = rank(Fl, D.iota.matrix);
        int rk_pi = rank(Fl, D.pi.matrix);
        int rk_pp = rank(Fl, D.pi_prime.matrix);
        CHECK(rk_iota == D.E->dim);                                // injective
        CHECK(rk_pi == (ell + 1) * (ell + 1) - (r + 1) * (s + 1));  // stated image size
        CHECK(rk_iota + rk_pi == D.I->dim);                        // Im iota = Ker pi
        CHECK(rk_pi + rk_pp == D.U->dim);                          // Im pi = Ker pi'
        CHECK(rk_pp == D.V->dim);                                  // surjective
        CHECK(mat_mul(Fl, D.iota.matrix, D.pi.matrix) == FpMat(D.E->dim, D.U->dim));
        CHECK(mat_mul(Fl, D.pi.matrix, D.pi_prime.matrix) == FpMat(D.I->dim, D.V->dim));
        WData W = build_W(F, sp, r, s);
        CHECK(W.W->dim == D.U->dim - D.V->dim);
        CHECK(D.I->dim == D.E->dim + W.W->dim);  // short exact sequence (1)
      }
  }
}

TEST_CASE("W at l=3, r=s=1 has dimension 12") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  CHECK(build_W(F, sp, 1, 1).W->dim == (2 * 4 + 4 * 2) - 2 * 2);
}

TEST_CASE("pairings are perfect and invariant") {
  std::mt19937_64 rng(59);
  for (auto [d, ell] : std::vector<std::pair<int, int>>{{2, 3}, {1, 5}}) {
    FieldData F = FieldData::make(d);
    SplitPrime sp = split_prime(F, ell);
    Fp Fl(static_cast<uint32_t>(ell));
    for (int r = 0; r < ell; ++r) {
      FpMat GE = pairing_E(Fl, r);
      CHECK(rank(Fl, GE) == r + 1);
      ModulePtr Er = build_E(F, sp, r, false);
      for (int i = 0; i < 10; ++i) {
        Mat2 g = random_sl2(F, rng);
        const FpMat& a = Er->act(g);
        CHECK(mat_mul(Fl, mat_mul(Fl, a, GE), transpose(a)) == GE);
      }
      FpMat GI = pairing_I(Fl, r);
      CHECK(rank(Fl, GI) == ell + 1);
      for (int i = 0; i <= ell; ++i) CHECK(GI.at(i, i) == Fl.p - 1);  // each entry -1
      ModulePtr Ir = build_I(F, sp, r, false);
      ModulePtr Ic = build_I(F, sp, ell - 1 - r, false);
      for (int i = 0; i < 10; ++i) {
        Mat2 g = random_sl2(F, rng);
        CHECK(mat_mul(Fl, mat_mul(Fl, Ir->act(g), GI), transpose(Ic->act(g))) == GI);
      }
    }
    CHECK(pairing_E(Fl, 0).at(0, 0) == 1);
  }
}

TEST_CASE("minus identity acts by parity of r+s") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  Fp Fl(3);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) {
      ModulePtr M = build_E_ab(F, sp, r, s, 1, 1);
      FpMat expected = mat_scale(Fl, (r + s) % 2 ? Fl.neg(1) : 1, FpMat::identity(M->dim));
      CHECK(M->act(FieldData::minus_identity()) == expected);
      ModulePtr I = build_I_rs(F, sp, r, s);
      FpMat expI = mat_scale(Fl, (r + s) % 2 ? Fl.neg(1) : 1, FpMat::identity(I->dim));
      CHECK(I->act(FieldData::minus_identity()) == expI);
    }
}

TEST_CASE("character modules") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  ModulePtr chi = build_char_module(F, sp, {3, 0}, 0, 0);
  Mat2 g{{1, 0}, {2, 1}, {3, 0}, {1, 0}};
  CHECK(chi->act(g).at(0, 0) == 1);
  ModulePtr chi11 = build_char_module(F, sp, {3, 0}, 1, 1);
  Mat2 h{{1, 0}, {0, 0}, {0, 0}, {4, 0}};  // d = 4 = 1 mod 3
  CHECK(chi11->act(h).at(0, 0) == 1);
  Mat2 bad{{1, 0}, {0, 0}, {1, 0}, {1, 0}};  // c not divisible
  CHECK_THROWS(chi11->act(bad));
}

TEST_CASE("induced modules: dimension and multiplicativity") {
  std::mt19937_64 rng(61);
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 11);
  const GroupPresentation& P = builtin_presentation(F);
  CongruenceSubgroup H{CongruenceSubgroup::Kind::Gamma0, {3, 1}, {1, 0}};
  auto T = std::make_shared<CosetTable>(coset_table(P, H));
  ModulePtr Ind = build_induced(T, trivial_module(F, sp));
  CHECK(Ind->dim == 12);
  Fp Fl(11);
  QuadInt pi{1, 1};
  Mat2 dpi{pi, {0, 0}, {0, 0}, {1, 0}};
  for (int i = 0; i < 10; ++i) {
    Mat2 g = random_sl2(F, rng, 10);
    Mat2 h = random_sl2(F, rng, 10);
    CHECK(Ind->act(F.mmul(g, h)) == mat_mul(Fl, Ind->act(g), Ind->act(h)));
    CHECK(Ind->act(F.mmul(g, dpi)) == mat_mul(Fl, Ind->act(g), Ind->act(dpi)));
  }
  CHECK_THROWS(Ind->act(Mat2{{3, 1}, {0, 0}, {0, 0}, {1, 0}}));  // det shares the level

  // Gamma1 induction with a nontrivial module; omega is coprime to 1+w
  CongruenceSubgroup H1{CongruenceSubgroup::Kind::Gamma1, {1, 1}, {1, 0}};
  auto T1 = std::make_shared<CosetTable>(coset_table(P, H1));
  ModulePtr Ind1 = build_induced(T1, build_E(F, sp, 1, false));
  CHECK(Ind1->dim == static_cast<int>(T1->reps.size()) * 2);
  Mat2 domega{{0, 1}, {0, 0}, {0, 0}, {1, 0}};
  for (int i = 0; i < 6; ++i) {
    Mat2 g = random_sl2(F, rng, 8);
    Mat2 h = random_sl2(F, rng, 8);
    CHECK(Ind1->act(F.mmul(g, h)) == mat_mul(Fl, Ind1->act(g), Ind1->act(h)));
    CHECK(Ind1->act(F.mmul(g, domega)) == mat_mul(Fl, Ind1->act(g), Ind1->act(domega)));
  }
  CHECK_THROWS(Ind1->act(Mat2{{1, 1}, {0, 0}, {0, 0}, {1, 0}}));  // det = modulus

  // index-one table gives back the module
  CongruenceSubgroup Htriv{CongruenceSubgroup::Kind::Gamma1, {1, 0}, {1, 0}};
  auto Tt = std::make_shared<CosetTable>(coset_table(P, Htriv));
  ModulePtr E2 = build_E(F, sp, 2, false);
  ModulePtr IndT = build_induced(Tt, E2);
  CHECK(IndT->dim == 3);
  for (int i = 0; i < 6; ++i) {
    Mat2 g = random_integral(F, rng, 2);
    if (F.det(g).is_zero()) continue;
    CHECK(IndT->act(g) == E2->act(g));
  }
}

TEST_CASE("induced character modules match the graded function modules") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  const GroupPresentation& P = builtin_presentation(F);
  std::mt19937_64 rng(67);
  CongruenceSubgroup H{CongruenceSubgroup::Kind::Gamma0, sp.lambda, {1, 0}};
  auto T = std::make_shared<CosetTable>(coset_table(P, H));
  REQUIRE(T->reps.size() == 4);
  // in the left-coset realization with the character on the d-entry the
  // induced module is det^k (x) I_{l-1-k}; on upper triangular matrices of
  // determinant one this is the same character written on the a-entry, which
  // is the usual form of the identification with I_k
  for (int k = 0; k <= 1; ++k) {
    ModulePtr Ind = build_induced(T, build_char_module(F, sp, sp.lambda, k, 0));
    ModulePtr Ik = twist_det(build_I(F, sp, 3 - 1 - k, false), k, false);
    std::vector<Mat2> tests = P.gens;
    while (tests.size() < 12) {
      Mat2 m = random_integral(F, rng, 2);
      if (sp.tau1(F.det(m)) == 0 || sp.tau2(F.det(m)) == 0) continue;
      tests.push_back(m);
    }
    auto space = intertwiner_space(Ind, Ik, tests);
    bool found_iso = false;
    for (const FpMat& A : space)
      if (rank(Ind->Fl, A) == 4) found_iso = true;
    CHECK(found_iso);
  }
}

TEST_CASE("induced chi(r,s) at level (ell) matches I_r (x) I_s") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  const GroupPresentation& P = builtin_presentation(F);
  std::mt19937_64 rng(71);
  CongruenceSubgroup H{CongruenceSubgroup::Kind::Gamma0, {3, 0}, {1, 0}};
  auto T = std::make_shared<CosetTable>(coset_table(P, H));
  REQUIRE(T->reps.size() == 16);
  for (auto [r, s] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}) {
    ModulePtr Ind = build_induced(T, build_char_module(F, sp, {3, 0}, r, s));
    ModulePtr Irs = tensor(twist_det(build_I(F, sp, 3 - 1 - r, false), r, false),
                           twist_det(build_I(F, sp, 3 - 1 - s, true), s, true));
    std::vector<Mat2> tests = P.gens;
    while (tests.size() < 14) {
      Mat2 m = random_integral(F, rng, 2);
      if (sp.tau1(F.det(m)) == 0 || sp.tau2(F.det(m)) == 0) continue;
      tests.push_back(m);
    }
    auto space = intertwiner_space(Ind, Irs, tests);
    bool found_iso = false;
    for (const FpMat& A : space)
      if (rank(Ind->Fl, A) == 16) found_iso = true;
    CHECK(found_iso);
  }
}

TEST_CASE("grading of the full function module") {
  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  Fp Fl(3);
  // full module: functions on F_3^2 vanishing at the origin, delta basis
  int npts = 8;
  std::vector<std::pair<uint32_t, uint32_t>> pts;
  for (uint32_t x = 0; x < 3; ++x)
    for (uint32_t y = 0; y < 3; ++y)
      if (x || y) pts.push_back({x, y});
  auto act_full = [&](const Mat2& g) {
    FpMat m(npts, npts);
    for (int j = 0; j < npts; ++j) {
      uint32_t a = sp.tau1(g.a), b = sp.tau1(g.b), c = sp.tau1(g.c), d = sp.tau1(g.d);
      uint32_t w0 = Fl.add(Fl.mul(pts[j].first, a), Fl.mul(pts[j].second, b));
      uint32_t w1 = Fl.add(Fl.mul(pts[j].first, c), Fl.mul(pts[j].second, d));
      if (!w0 && !w1) continue;
      for (int i = 0; i < npts; ++i)
        if (pts[i] == std::make_pair(w0, w1)) m.at(i, j) = 1;
    }
    return m;
  };
  // projections onto homogeneous degrees: pr_n = -sum_x x^{-n} act(x I)
  std::vector<FpMat> pr;
  for (int n = 0; n < 2; ++n) {
    FpMat acc(npts, npts);
    for (uint32_t x = 1; x < 3; ++x) {
      Mat2 xI{{x, 0}, {0, 0}, {0, 0}, {x, 0}};
      FpMat term = mat_scale(Fl, Fl.inv(Fl.pow(x, n)), act_full(xI));
      acc = mat_add(Fl, acc, term);
    }
    pr.push_back(mat_scale(Fl, Fl.neg(1), acc));
  }
  CHECK(mat_add(Fl, pr[0], pr[1]) == FpMat::identity(npts));
  CHECK(mat_mul(Fl, pr[0], pr[0]) == pr[0]);
  CHECK(mat_mul(Fl, pr[1], pr[1]) == pr[1]);
  CHECK(mat_mul(Fl, pr[0], pr[1]) == FpMat(npts, npts));
  CHECK(rank(Fl, pr[0]) == 4);
  CHECK(rank(Fl, pr[1]) == 4);
  std::mt19937_64 rng(73);
  for (int i = 0; i < 10; ++i) {
    Mat2 g = random_integral(F, rng, 2);
    FpMat ag = act_full(g);
    for (const FpMat& p : pr) CHECK(mat_mul(Fl, p, ag) == mat_mul(Fl, ag, p));
  }
}

TEST_CASE("weight spec parsing") {
  WeightSpec w = WeightSpec::parse("E:10,10,0,0");
  CHECK(w.kind == WeightSpec::Kind::E);
  CHECK(w.r == 10);
  CHECK(w.to_string() == "E:10,10,0,0");
  CHECK(WeightSpec::parse("I:1,2").kind == WeightSpec::Kind::I);
  CHECK(WeightSpec::parse("W:1,1").s == 1);
  CHECK(WeightSpec::parse("char:2,0").kind == WeightSpec::Kind::Char);
  CHECK(WeightSpec::parse("triv").to_string() == "E:0,0,0,0");
  CHECK_THROWS(WeightSpec::parse("Q:1"));
  CHECK_THROWS(WeightSpec::parse("E:1"));

  FieldData F = FieldData::make(2);
  SplitPrime sp = split_prime(F, 3);
  CHECK(weight_module(F, sp, WeightSpec::parse("E:1,1,0,0"))->dim == 4);
  CHECK(weight_module(F, sp, WeightSpec::parse("I:1,1"))->dim == 16);
}

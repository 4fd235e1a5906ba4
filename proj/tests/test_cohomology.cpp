#include "bianchi/cohomology.hpp"

#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace bianchi;
using bianchi::testutil::random_sl2;

namespace {

struct Ctx {
  FieldData F;
  SplitPrime sp;
  std::shared_ptr<const GroupPresentation> P;
};

Ctx ctx(int d, int ell) {
  FieldData F = FieldData::make(d);
  return {F, split_prime(F, ell),
          std::make_shared<GroupPresentation>(builtin_presentation(F))};
}

}  // namespace

TEST_CASE("invariants of the trivial module") {
  Ctx c = ctx(2, 3);
  CohomologySpace H = h0(trivial_module(c.F, c.sp), c.P->gens);
  CHECK(H.dim() == 1);
}

TEST_CASE("H0 of E, I, U, W weights follows the classified pattern") {
  for (auto [d, ell] : std::vector<std::pair<int, int>>{{2, 3}, {1, 5}}) {
    Ctx c = ctx(d, ell);
    for (int r = 0; r < ell; ++r)
      for (int s = 0; s < ell; ++s) {
        int e_dim = h0(build_E_ab(c.F, c.sp, r, s, 0, 0), c.P->gens).dim();
        CHECK(e_dim == ((r == 0 && s == 0) ? 1 : 0));
        int i_dim = h0(build_I_rs(c.F, c.sp, r, s), c.P->gens).dim();
        bool r_cong = r % (ell - 1) == 0, s_cong = s % (ell - 1) == 0;
        CHECK(i_dim == ((r_cong && s_cong) ? 1 : 0));
      }
    // corner cases for U and W
    auto u_dim = [&](int r, int s) {
      return h0(build_four_term(c.F, c.sp, r, s).U, c.P->gens).dim();
    };
    auto w_dim = [&](int r, int s) { return h0(build_W(c.F, c.sp, r, s).W, c.P->gens).dim(); };
    int L = ell - 1;
    CHECK(u_dim(L, L) == 2);
    CHECK(u_dim(0, L) == 1);
    CHECK(u_dim(L, 0) == 1);
    CHECK(u_dim(0, 0) == 0);
    CHECK(w_dim(L, L) == 1);
    CHECK(w_dim(0, L) == 1);
    CHECK(w_dim(L, 0) == 1);
    CHECK(w_dim(0, 0) == 0);
  }
}

TEST_CASE("coboundaries satisfy the relator conditions") {
  std::mt19937_64 rng(83);
  Ctx c = ctx(2, 3);
  ModulePtr M = build_E_ab(c.F, c.sp, 2, 2, 0, 0);
  for (int i = 0; i < 10; ++i) {
    FpVec v(M->dim);
    for (auto& x : v) x = static_cast<uint32_t>(rng() % 3);
    CHECK(is_cocycle(*c.P, M, coboundary(c.P->gens, M, v)));
  }
}

TEST_CASE("H1 with trivial coefficients matches the abelianization") {
  for (auto [d, ell] : std::vector<std::pair<int, int>>{{2, 3}, {2, 11}, {1, 5}, {3, 7},
                                                        {7, 11}, {11, 5}}) {
    Ctx c = ctx(d, ell);
    CohomologySpace H = h1(c.P, trivial_module(c.F, c.sp));
    Abelianization ab = abelianization(*c.P);
    CHECK(H.dim() == hom_rank_mod_ell(ab, ell));
    CHECK(H.dim() == H.z1_dim - H.b1_dim);
  }
}

TEST_CASE("central -I kills odd weights") {
  Ctx c = ctx(2, 3);
  CohomologySpace H = h1(c.P, build_E_ab(c.F, c.sp, 1, 0, 0, 0));
  CHECK(H.killed_by_center);
  CHECK(H.dim() == 0);
  CohomologySpace H2 = h1(c.P, build_I_rs(c.F, c.sp, 2, 1));
  CHECK(H2.dim() == 0);
}

TEST_CASE("cocycle evaluation is well defined") {
  std::mt19937_64 rng(89);
  Ctx c = ctx(2, 3);
  ModulePtr M = build_I_rs(c.F, c.sp, 1, 1);
  CohomologySpace H = h1(c.P, M);
  REQUIRE(H.dim() >= 0);
  // use an actual cocycle if present, else a coboundary
  FpVec co;
  if (H.dim() > 0) {
    co = H.basis[0];
  } else {
    FpVec v(M->dim);
    for (auto& x : v) x = static_cast<uint32_t>(rng() % 3);
    co = coboundary(c.P->gens, M, v);
  }
  CHECK(vec_is_zero(cocycle_eval(*c.P, M, co, FieldData::identity())));
  for (int i = 0; i < 10; ++i) {
    Mat2 x = random_sl2(c.F, rng, 10);
    Mat2 y = random_sl2(c.F, rng, 10);
    // c(xy) = c(x) act(y) + c(y)
    FpVec lhs = cocycle_eval(*c.P, M, co, c.F.mmul(x, y));
    FpVec rhs = vec_add(M->Fl, vec_mat(M->Fl, cocycle_eval(*c.P, M, co, x), M->act(y)),
                        cocycle_eval(*c.P, M, co, y));
    CHECK(lhs == rhs);
    // c(x^-1 x) = 0 expands to zero
    FpVec inv_val = cocycle_eval(*c.P, M, co, c.F.sl2_inverse(x));
    FpVec zero = vec_add(M->Fl, vec_mat(M->Fl, inv_val, M->act(x)),
                         cocycle_eval(*c.P, M, co, x));
    CHECK(vec_is_zero(zero));
  }
}

TEST_CASE("projection is a retraction onto the basis") {
  std::mt19937_64 rng(97);
  Ctx c = ctx(2, 3);
  ModulePtr M = build_I_rs(c.F, c.sp, 0, 0);
  CohomologySpace H = h1(c.P, M);
  REQUIRE(H.dim() >= 1);
  for (int b = 0; b < H.dim(); ++b) {
    FpVec coords = H.proj.project(H.basis[b]);
    for (int k = 0; k < H.dim(); ++k) CHECK(coords[k] == (k == b ? 1u : 0u));
    // shifting by a coboundary does not change the class
    FpVec v(M->dim);
    for (auto& x : v) x = static_cast<uint32_t>(rng() % 3);
    FpVec shifted = vec_add(M->Fl, H.basis[b], coboundary(c.P->gens, M, v));
    CHECK(H.proj.project(shifted) == coords);
  }
}

TEST_CASE("the map H1(E) -> H1(I) is injective with the predicted kernel bound") {
  Ctx c = ctx(2, 3);
  Fp Fl(3);
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) {
      if ((r + s) % 2) continue;
      FourTermData D = build_four_term(c.F, c.sp, r, s);
      CohomologySpace HE = h1(c.P, D.E);
      CohomologySpace HI = h1(c.P, D.I);
      // push cocycles through iota blockwise
      int ng = static_cast<int>(c.P->gens.size());
      FpMat images(HE.dim(), ng * D.I->dim);
      for (int b = 0; b < HE.dim(); ++b) {
        FpVec out;
        for (int g = 0; g < ng; ++g) {
          FpVec block(HE.basis[b].begin() + g * D.E->dim,
                      HE.basis[b].begin() + (g + 1) * D.E->dim);
          FpVec img = vec_mat(Fl, block, D.iota.matrix);
          out.insert(out.end(), img.begin(), img.end());
        }
        REQUIRE(is_cocycle(*c.P, D.I, out));
        FpVec coords = HI.proj.project(out);
        for (int k = 0; k < HI.dim(); ++k) images.at(b, k) = coords[k];
      }
      int rk = rank(Fl, images);
      CHECK(rk == HE.dim());  // injectivity
      // long exact sequence bound: ker dim = h0(W) - h0(I) + h0(E)
      int h0E = h0(D.E, c.P->gens).dim();
      int h0I = h0(D.I, c.P->gens).dim();
      int h0W = h0(build_W(c.F, c.sp, r, s).W, c.P->gens).dim();
      CHECK(HE.dim() - rk == h0W - h0I + h0E - (h0W - h0I + h0E));  // zero both ways
      CHECK(h0W - h0I + h0E >= 0);
    }
}

TEST_CASE("shapiro transport on the one-coset table is evaluation") {
  Ctx c = ctx(1, 5);
  CongruenceSubgroup triv{CongruenceSubgroup::Kind::Gamma1, {1, 0}, {1, 0}};
  auto T = std::make_shared<CosetTable>(coset_table(*c.P, triv));
  ModulePtr V = build_E(c.F, c.sp, 2, false);
  ModulePtr Ind = build_induced(T, V);
  CohomologySpace H = h1(c.P, Ind);
  std::mt19937_64 rng(101);
  for (int b = 0; b < H.dim(); ++b) {
    Mat2 x = random_sl2(c.F, rng, 8);
    FpVec via_shapiro = shapiro_value(H, H.basis[b], x, V->dim);
    FpVec direct = cocycle_eval(*c.P, Ind, H.basis[b], x);
    CHECK(via_shapiro == FpVec(direct.begin(), direct.begin() + V->dim));
  }
}

TEST_CASE("transported cocycles span a space of the full dimension") {
  Ctx c = ctx(1, 5);
  CongruenceSubgroup H0sub{CongruenceSubgroup::Kind::Gamma0, {1, 1}, {1, 0}};  // level (1+i)
  auto T = std::make_shared<CosetTable>(coset_table(*c.P, H0sub));
  REQUIRE(T->reps.size() == 3);
  ModulePtr Ind = build_induced(T, trivial_module(c.F, c.sp));
  CohomologySpace H = h1(c.P, Ind);
  std::vector<Mat2> schreier = T->schreier_generators();
  REQUIRE(!schreier.empty());
  FpMat tuples(H.dim(), static_cast<int>(schreier.size()));
  for (int b = 0; b < H.dim(); ++b)
    for (size_t s = 0; s < schreier.size(); ++s)
      tuples.at(b, static_cast<int>(s)) = shapiro_value(H, H.basis[b], schreier[s], 1)[0];
  CHECK(rank(H.field(), tuples) == H.dim());
}

TEST_CASE("cocycle space of a relator-free presentation is the full product") {
  Ctx c = ctx(2, 3);
  GroupPresentation free;
  free.F = c.F;
  free.gens = {c.P->gens[0], c.P->gens[1]};
  free.gen_names = {"x", "y"};
  ModulePtr M = build_E_ab(c.F, c.sp, 2, 0, 0, 0);
  FpMat Z = cocycle_space(free, M);
  CHECK(Z.rows == 2 * M->dim);
}

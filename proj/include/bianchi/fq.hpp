#pragma once

#include <map>
#include <vector>

#include "bianchi/fp.hpp"

namespace bianchi {

// F_{p^deg} realized as F_p[x]/(modulus), modulus the first monic irreducible
// of its degree in base-p counting order.  Elements are coefficient vectors
// of length deg, constant term first.
struct FqCtx {
  Fp base;
  int deg = 1;
  std::vector<uint32_t> modulus;  // size deg+1, monic

  size_t order() const;

  using Elem = std::vector<uint32_t>;
  Elem zero() const { return Elem(deg, 0); }
  Elem one() const;
  Elem from_base(uint32_t c) const;
  bool is_zero(const Elem& a) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  Elem pow(Elem a, unsigned long long e) const;
};

// Compatible tower F_p = F_{p^1} < ... < F_{p^max}; embeddings are fixed by
// mapping the generator of F_{p^e} to its first root in F_{p^k}.
struct FqTower {
  Fp base;
  int max_deg = 1;
  std::vector<FqCtx> ctx;  // ctx[e-1] has degree e
  // gen_powers[{e,k}][i] = image of x_e^i in F_{p^k}, i < e
  std::map<std::pair<int, int>, std::vector<FqCtx::Elem>> gen_powers;

  FqTower() = default;
  FqTower(const Fp& F, int max_deg);

  const FqCtx& at(int deg) const { return ctx[deg - 1]; }
  FqCtx::Elem embed(int from_deg, int to_deg, const FqCtx::Elem& a) const;
  // Least j dividing deg with a fixed by Frobenius^j.
  int minimal_degree(int deg, const FqCtx::Elem& a) const;
  // Express a (known to have minimal degree m | deg) in F_{p^m} coordinates.
  FqCtx::Elem compress(int deg, int m, const FqCtx::Elem& a) const;
};

struct FqMat {
  int rows = 0, cols = 0, deg = 1;
  std::vector<uint32_t> a;  // rows*cols elements, each `deg` words

  FqMat() = default;
  FqMat(int r, int c, int d) : rows(r), cols(c), deg(d), a(static_cast<size_t>(r) * c * d, 0) {}

  uint32_t* at(int i, int j) { return &a[(static_cast<size_t>(i) * cols + j) * deg]; }
  const uint32_t* at(int i, int j) const { return &a[(static_cast<size_t>(i) * cols + j) * deg]; }
  FqCtx::Elem get(int i, int j) const {
    const uint32_t* p = at(i, j);
    return FqCtx::Elem(p, p + deg);
  }
  void set(int i, int j, const FqCtx::Elem& e) {
    std::copy(e.begin(), e.end(), at(i, j));
  }
  static FqMat identity(const FqCtx& K, int n);
};

FqMat fq_lift(const FqCtx& K, const FpMat& A);
FqMat fq_embed_mat(const FqTower& T, int from_deg, int to_deg, const FqMat& A);
FqMat fq_mul(const FqCtx& K, const FqMat& A, const FqMat& B);
int fq_rref(const FqCtx& K, FqMat& A, std::vector<int>* pivot_cols = nullptr);
FqMat fq_right_nullspace(const FqCtx& K, const FqMat& A);
FqMat fq_transpose(const FqMat& A);
// rows v with v * A = 0
FqMat fq_left_nullspace(const FqCtx& K, const FqMat& A);
// Solve X * B = C for X given B with independent rows; throws if inconsistent.
FqMat fq_solve_left(const FqCtx& K, const FqMat& B, const FqMat& C);

// Polynomials over F_{p^deg}: vector of elements, constant term first.
using FqPoly = std::vector<FqCtx::Elem>;
FqPoly fq_charpoly(const FqCtx& K, FqMat A);
FqCtx::Elem fq_poly_eval(const FqCtx& K, const FqPoly& f, const FqCtx::Elem& x);
// All roots in F_{p^deg(K)} by enumeration, with algebraic multiplicities.
std::vector<std::pair<FqCtx::Elem, int>> fq_poly_roots(const FqCtx& K, const FqPoly& f);

}  // namespace bianchi

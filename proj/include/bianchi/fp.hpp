#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bianchi {

// Arithmetic in the prime field F_p for a small odd prime p.
struct Fp {
  uint32_t p = 0;

  Fp() = default;
  explicit Fp(uint32_t p_) : p(p_) {
    if (p_ < 2) throw std::invalid_argument("Fp: modulus must be >= 2");
  }

  uint32_t reduce(long long v) const {
    long long r = v % static_cast<long long>(p);
    return static_cast<uint32_t>(r < 0 ? r + p : r);
  }
  uint32_t add(uint32_t a, uint32_t b) const {
    uint32_t s = a + b;
    return s >= p ? s - p : s;
  }
  uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p - b; }
  uint32_t neg(uint32_t a) const { return a ? p - a : 0; }
  uint32_t mul(uint32_t a, uint32_t b) const {
    return static_cast<uint32_t>(static_cast<uint64_t>(a) * b % p);
  }
  uint32_t pow(uint32_t a, long long e) const;
  uint32_t inv(uint32_t a) const;
};

// Dense row-major matrix over F_p.  Vectors are rows and act on the left:
// w = v * A throughout the library.
struct FpMat {
  int rows = 0, cols = 0;
  std::vector<uint32_t> a;

  FpMat() = default;
  FpMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

  uint32_t& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  uint32_t at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static FpMat identity(int n) {
    FpMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  bool operator==(const FpMat&) const = default;
};

using FpVec = std::vector<uint32_t>;

FpMat mat_mul(const Fp& F, const FpMat& A, const FpMat& B);
FpMat mat_add(const Fp& F, const FpMat& A, const FpMat& B);
FpMat mat_sub(const Fp& F, const FpMat& A, const FpMat& B);
FpMat mat_scale(const Fp& F, uint32_t c, const FpMat& A);
FpMat mat_pow(const Fp& F, FpMat A, long long e);
FpMat transpose(const FpMat& A);
FpMat kron(const Fp& F, const FpMat& A, const FpMat& B);

FpVec vec_mat(const Fp& F, const FpVec& v, const FpMat& A);
FpVec vec_add(const Fp& F, const FpVec& v, const FpVec& w);
FpVec vec_sub(const Fp& F, const FpVec& v, const FpVec& w);
FpVec vec_scale(const Fp& F, uint32_t c, const FpVec& v);
bool vec_is_zero(const FpVec& v);

// Reduced row echelon form; returns rank, optionally reports pivot columns.
int rref_in_place(const Fp& F, FpMat& A, std::vector<int>* pivot_cols = nullptr);
int rank(const Fp& F, FpMat A);

// Basis (as matrix rows) of { v : v * A = 0 }.
FpMat left_nullspace(const Fp& F, const FpMat& A);
// Basis (as matrix rows) of { v : A * v^T = 0 }, i.e. the usual kernel.
FpMat right_nullspace(const Fp& F, const FpMat& A);

// Solve x * A = b; returns false if inconsistent.
bool solve_left(const Fp& F, const FpMat& A, const FpVec& b, FpVec& x);
FpMat inverse(const Fp& F, const FpMat& A);

// Stacks B on top of A.
FpMat vstack(const FpMat& A, const FpMat& B);

// Expresses vectors in the quotient of a row space by a subspace.  Rows of
// `sub` span the subspace, rows of `basis` are coset representatives chosen
// independent modulo it; project() returns coordinates in that basis.
struct QuotientSolver {
  Fp F{3};
  int n = 0;
  FpMat reduced;               // rref of [sub; basis]
  std::vector<int> pivot_cols;
  FpMat coord_of_row;          // row i of `reduced` expressed in original rows
  int sub_rows = 0, basis_rows = 0;

  void init(const Fp& f, const FpMat& sub, const FpMat& basis);
  // Coordinates of v modulo the subspace; throws if v is outside the span.
  FpVec project(const FpVec& v) const;
};

std::string fpmat_to_string(const FpMat& A);
uint64_t fnv1a(const std::string& s);

}  // namespace bianchi

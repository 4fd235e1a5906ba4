#include "bianchi/fp.hpp"

#include <sstream>

namespace bianchi {

uint32_t Fp::pow(uint32_t a, long long e) const {
  if (e < 0) return pow(inv(a), -e);
  uint32_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint32_t Fp::inv(uint32_t a) const {
  a %= p;
  if (a == 0) throw std::domain_error("Fp::inv: zero");
  // extended euclid
  long long t = 0, nt = 1, r = p, nr = a;
  while (nr != 0) {
    long long q = r / nr;
    long long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw std::domain_error("Fp::inv: not invertible");
  if (t < 0) t += p;
  return static_cast<uint32_t>(t);
}

FpMat mat_mul(const Fp& F, const FpMat& A, const FpMat& B) {
  if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  FpMat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int k = 0; k < A.cols; ++k) {
      uint64_t aik = A.at(i, k);
      if (!aik) continue;
      const uint32_t* brow = &B.a[static_cast<size_t>(k) * B.cols];
      uint32_t* crow = &C.a[static_cast<size_t>(i) * C.cols];
      for (int j = 0; j < B.cols; ++j)
        crow[j] = static_cast<uint32_t>((crow[j] + aik * brow[j]) % F.p);
    }
  }
  return C;
}

FpMat mat_add(const Fp& F, const FpMat& A, const FpMat& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("mat_add: shape");
  FpMat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.add(A.a[i], B.a[i]);
  return C;
}

FpMat mat_sub(const Fp& F, const FpMat& A, const FpMat& B) {
  if (A.rows != B.rows || A.cols != B.cols) throw std::invalid_argument("mat_sub: shape");
  FpMat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.sub(A.a[i], B.a[i]);
  return C;
}

FpMat mat_scale(const Fp& F, uint32_t c, const FpMat& A) {
  FpMat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.mul(c, A.a[i]);
  return C;
}

FpMat mat_pow(const Fp& F, FpMat A, long long e) {
  if (A.rows != A.cols) throw std::invalid_argument("mat_pow: square required");
  FpMat R = FpMat::identity(A.rows);
  while (e) {
    if (e & 1) R = mat_mul(F, R, A);
    A = mat_mul(F, A, A);
    e >>= 1;
  }
  return R;
}

FpMat transpose(const FpMat& A) {
  FpMat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

FpMat kron(const Fp& F, const FpMat& A, const FpMat& B) {
  FpMat C(A.rows * B.rows, A.cols * B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) {
      uint32_t aij = A.at(i, j);
      if (!aij) continue;
      for (int k = 0; k < B.rows; ++k)
        for (int l = 0; l < B.cols; ++l)
          C.at(i * B.rows + k, j * B.cols + l) = F.mul(aij, B.at(k, l));
    }
  return C;
}

FpVec vec_mat(const Fp& F, const FpVec& v, const FpMat& A) {
  if (static_cast<int>(v.size()) != A.rows) throw std::invalid_argument("vec_mat: shape");
  FpVec w(A.cols, 0);
  for (int i = 0; i < A.rows; ++i) {
    uint64_t vi = v[i];
    if (!vi) continue;
    const uint32_t* arow = &A.a[static_cast<size_t>(i) * A.cols];
    for (int j = 0; j < A.cols; ++j)
      w[j] = static_cast<uint32_t>((w[j] + vi * arow[j]) % F.p);
  }
  return w;
}

FpVec vec_add(const Fp& F, const FpVec& v, const FpVec& w) {
  FpVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = F.add(v[i], w[i]);
  return r;
}

FpVec vec_sub(const Fp& F, const FpVec& v, const FpVec& w) {
  FpVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = F.sub(v[i], w[i]);
  return r;
}

FpVec vec_scale(const Fp& F, uint32_t c, const FpVec& v) {
  FpVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = F.mul(c, v[i]);
  return r;
}

bool vec_is_zero(const FpVec& v) {
  for (uint32_t x : v)
    if (x) return false;
  return true;
}

int rref_in_place(const Fp& F, FpMat& A, std::vector<int>* pivot_cols) {
  int r = 0;
  if (pivot_cols) pivot_cols->clear();
  for (int c = 0; c < A.cols && r < A.rows; ++c) {
    int piv = -1;
    for (int i = r; i < A.rows; ++i)
      if (A.at(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < A.cols; ++j) std::swap(A.at(piv, j), A.at(r, j));
    uint32_t s = F.inv(A.at(r, c));
    for (int j = c; j < A.cols; ++j) A.at(r, j) = F.mul(s, A.at(r, j));
    for (int i = 0; i < A.rows; ++i) {
      if (i == r) continue;
      uint32_t f = A.at(i, c);
      if (!f) continue;
      for (int j = c; j < A.cols; ++j) A.at(i, j) = F.sub(A.at(i, j), F.mul(f, A.at(r, j)));
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

int rank(const Fp& F, FpMat A) { return rref_in_place(F, A); }

FpMat right_nullspace(const Fp& F, const FpMat& A) {
  FpMat R = A;
  std::vector<int> piv;
  int r = rref_in_place(F, R, &piv);
  std::vector<bool> is_piv(A.cols, false);
  for (int c : piv) is_piv[c] = true;
  FpMat N(A.cols - r, A.cols);
  int row = 0;
  for (int c = 0; c < A.cols; ++c) {
    if (is_piv[c]) continue;
    N.at(row, c) = 1;
    for (int i = 0; i < r; ++i) N.at(row, piv[i]) = F.neg(R.at(i, c));
    ++row;
  }
  return N;
}

FpMat left_nullspace(const Fp& F, const FpMat& A) { return right_nullspace(F, transpose(A)); }

bool solve_left(const Fp& F, const FpMat& A, const FpVec& b, FpVec& x) {
  // x * A = b  <=>  A^T x^T = b^T
  FpMat M(A.cols, A.rows + 1);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) M.at(j, i) = A.at(i, j);
  for (int j = 0; j < A.cols; ++j) M.at(j, A.rows) = j < static_cast<int>(b.size()) ? b[j] : 0;
  std::vector<int> piv;
  rref_in_place(F, M, &piv);
  x.assign(A.rows, 0);
  for (size_t k = 0; k < piv.size(); ++k) {
    if (piv[k] == A.rows) return false;  // pivot in the rhs column
    x[piv[k]] = M.at(static_cast<int>(k), A.rows);
  }
  return true;
}

FpMat inverse(const Fp& F, const FpMat& A) {
  if (A.rows != A.cols) throw std::invalid_argument("inverse: square required");
  int n = A.rows;
  FpMat M(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M.at(i, j) = A.at(i, j);
    M.at(i, n + i) = 1;
  }
  int r = rref_in_place(F, M);
  if (r != n) throw std::domain_error("inverse: singular matrix");
  FpMat B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B.at(i, j) = M.at(i, n + j);
  return B;
}

FpMat vstack(const FpMat& A, const FpMat& B) {
  if (A.rows == 0) return B;
  if (B.rows == 0) return A;
  if (A.cols != B.cols) throw std::invalid_argument("vstack: shape");
  FpMat C(A.rows + B.rows, A.cols);
  std::copy(A.a.begin(), A.a.end(), C.a.begin());
  std::copy(B.a.begin(), B.a.end(), C.a.begin() + A.a.size());
  return C;
}

void QuotientSolver::init(const Fp& f, const FpMat& sub, const FpMat& basis) {
  F = f;
  sub_rows = sub.rows;
  basis_rows = basis.rows;
  n = basis.cols ? basis.cols : sub.cols;
  FpMat M = vstack(sub, basis);
  int total = M.rows;
  // augment with identity to keep track of row operations
  FpMat Aug(total, n + total);
  for (int i = 0; i < total; ++i) {
    for (int j = 0; j < n; ++j) Aug.at(i, j) = M.at(i, j);
    Aug.at(i, n + i) = 1;
  }
  // eliminate using only the first n columns
  int r = 0;
  pivot_cols.clear();
  for (int c = 0; c < n && r < total; ++c) {
    int piv = -1;
    for (int i = r; i < total; ++i)
      if (Aug.at(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < Aug.cols; ++j) std::swap(Aug.at(piv, j), Aug.at(r, j));
    uint32_t s = F.inv(Aug.at(r, c));
    for (int j = 0; j < Aug.cols; ++j) Aug.at(r, j) = F.mul(s, Aug.at(r, j));
    for (int i = 0; i < total; ++i) {
      if (i == r) continue;
      uint32_t fac = Aug.at(i, c);
      if (!fac) continue;
      for (int j = 0; j < Aug.cols; ++j) Aug.at(i, j) = F.sub(Aug.at(i, j), F.mul(fac, Aug.at(r, j)));
    }
    pivot_cols.push_back(c);
    ++r;
  }
  reduced = FpMat(r, n);
  coord_of_row = FpMat(r, total);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < n; ++j) reduced.at(i, j) = Aug.at(i, j);
    for (int j = 0; j < total; ++j) coord_of_row.at(i, j) = Aug.at(i, n + j);
  }
}

FpVec QuotientSolver::project(const FpVec& v) const {
  FpVec w = v;
  FpVec comb(reduced.rows, 0);
  for (int i = 0; i < reduced.rows; ++i) {
    uint32_t c = w[pivot_cols[i]];
    if (!c) continue;
    comb[i] = c;
    for (int j = 0; j < n; ++j) w[j] = F.sub(w[j], F.mul(c, reduced.at(i, j)));
  }
  if (!vec_is_zero(w)) throw std::domain_error("QuotientSolver: vector outside span");
  FpVec coords(basis_rows, 0);
  for (int i = 0; i < reduced.rows; ++i) {
    if (!comb[i]) continue;
    for (int j = 0; j < basis_rows; ++j)
      coords[j] = F.add(coords[j], F.mul(comb[i], coord_of_row.at(i, sub_rows + j)));
  }
  return coords;
}

std::string fpmat_to_string(const FpMat& A) {
  std::ostringstream os;
  os << A.rows << 'x' << A.cols << ':';
  for (uint32_t v : A.a) os << v << ',';
  return os.str();
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace bianchi

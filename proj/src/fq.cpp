#include "bianchi/fq.hpp"

#include <algorithm>

namespace bianchi {

namespace {

// Dense polynomials over F_p, constant term first, for modulus selection.
using Poly = std::vector<uint32_t>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mul_mod(const Fp& F, const Poly& a, const Poly& b, const Poly& mod) {
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = F.add(c[i + j], F.mul(a[i], b[j]));
  }
  // reduce mod monic `mod`
  int d = static_cast<int>(mod.size()) - 1;
  for (int i = static_cast<int>(c.size()) - 1; i >= d; --i) {
    uint32_t lead = c[i];
    if (!lead) continue;
    c[i] = 0;
    for (int j = 0; j < d; ++j)
      c[i - d + j] = F.sub(c[i - d + j], F.mul(lead, mod[j]));
  }
  c.resize(d, 0);
  return c;
}

Poly poly_powmod(const Fp& F, Poly base, unsigned long long e, const Poly& mod) {
  Poly r(mod.size() - 1, 0);
  if (r.empty()) r.push_back(0);
  r[0] = 1;
  while (e) {
    if (e & 1) r = poly_mul_mod(F, r, base, mod);
    base = poly_mul_mod(F, base, base, mod);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(const Fp& F, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    while (a.size() >= b.size() && !a.empty()) {
      uint32_t f = F.mul(a.back(), F.inv(b.back()));
      size_t off = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i)
        a[off + i] = F.sub(a[off + i], F.mul(f, b[i]));
      trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

bool is_irreducible(const Fp& F, const Poly& f) {
  int d = static_cast<int>(f.size()) - 1;
  // gcd(x^{p^j} - x, f) must be trivial for j <= d/2
  Poly x{0, 1};
  Poly xp = x;
  for (int j = 1; 2 * j <= d; ++j) {
    xp = poly_powmod(F, xp, F.p, f);
    Poly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = F.sub(diff[1], 1);
    Poly g = poly_gcd(F, diff, f);
    if (g.size() != 1) return false;
  }
  return true;
}

Poly first_irreducible(const Fp& F, int deg) {
  if (deg == 1) return Poly{0, 1};  // x itself
  unsigned long long count = 1;
  for (int i = 0; i < deg; ++i) count *= F.p;
  for (unsigned long long n = 0; n < count; ++n) {
    Poly f(deg + 1, 0);
    unsigned long long m = n;
    for (int i = 0; i < deg; ++i) {
      f[i] = static_cast<uint32_t>(m % F.p);
      m /= F.p;
    }
    f[deg] = 1;
    if (is_irreducible(F, f)) return f;
  }
  throw std::logic_error("first_irreducible: none found");
}

}  // namespace

size_t FqCtx::order() const {
  size_t n = 1;
  for (int i = 0; i < deg; ++i) n *= base.p;
  return n;
}

FqCtx::Elem FqCtx::one() const {
  Elem e(deg, 0);
  e[0] = 1;
  return e;
}

FqCtx::Elem FqCtx::from_base(uint32_t c) const {
  Elem e(deg, 0);
  e[0] = c % base.p;
  return e;
}

bool FqCtx::is_zero(const Elem& a) const {
  for (uint32_t v : a)
    if (v) return false;
  return true;
}

FqCtx::Elem FqCtx::add(const Elem& a, const Elem& b) const {
  Elem c(deg);
  for (int i = 0; i < deg; ++i) c[i] = base.add(a[i], b[i]);
  return c;
}

FqCtx::Elem FqCtx::sub(const Elem& a, const Elem& b) const {
  Elem c(deg);
  for (int i = 0; i < deg; ++i) c[i] = base.sub(a[i], b[i]);
  return c;
}

FqCtx::Elem FqCtx::neg(const Elem& a) const {
  Elem c(deg);
  for (int i = 0; i < deg; ++i) c[i] = base.neg(a[i]);
  return c;
}

FqCtx::Elem FqCtx::mul(const Elem& a, const Elem& b) const {
  std::vector<uint32_t> c(2 * deg - 1, 0);
  for (int i = 0; i < deg; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < deg; ++j)
      c[i + j] = base.add(c[i + j], base.mul(a[i], b[j]));
  }
  for (int i = 2 * deg - 2; i >= deg; --i) {
    uint32_t lead = c[i];
    if (!lead) continue;
    c[i] = 0;
    for (int j = 0; j < deg; ++j)
      c[i - deg + j] = base.sub(c[i - deg + j], base.mul(lead, modulus[j]));
  }
  c.resize(deg);
  return c;
}

FqCtx::Elem FqCtx::pow(Elem a, unsigned long long e) const {
  Elem r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

FqCtx::Elem FqCtx::inv(const Elem& a) const {
  if (is_zero(a)) throw std::domain_error("Fq::inv: zero");
  return pow(a, order() - 2);
}

FqTower::FqTower(const Fp& F, int max_deg_) : base(F), max_deg(max_deg_) {
  for (int e = 1; e <= max_deg; ++e) {
    FqCtx K;
    K.base = F;
    K.deg = e;
    K.modulus = first_irreducible(F, e);
    ctx.push_back(K);
  }
  // embeddings e -> k whenever e | k
  for (int e = 1; e <= max_deg; ++e)
    for (int k = e; k <= max_deg; ++k) {
      if (k % e) continue;
      const FqCtx& Ke = at(e);
      const FqCtx& Kk = at(k);
      FqCtx::Elem root;
      if (e == 1) {
        root = Kk.from_base(0);  // unused
      } else {
        // first root of modulus_e inside F_{p^k}, by enumeration order
        bool found = false;
        size_t n = Kk.order();
        for (size_t idx = 0; idx < n && !found; ++idx) {
          FqCtx::Elem cand(Kk.deg, 0);
          size_t m = idx;
          for (int i = 0; i < Kk.deg; ++i) {
            cand[i] = static_cast<uint32_t>(m % F.p);
            m /= F.p;
          }
          // evaluate modulus_e at cand
          FqCtx::Elem acc = Kk.zero();
          for (int i = static_cast<int>(Ke.modulus.size()) - 1; i >= 0; --i) {
            acc = Kk.mul(acc, cand);
            acc = Kk.add(acc, Kk.from_base(Ke.modulus[i]));
          }
          if (Kk.is_zero(acc)) {
            root = cand;
            found = true;
          }
        }
        if (!found) throw std::logic_error("FqTower: no embedding root");
      }
      std::vector<FqCtx::Elem> pows(e);
      FqCtx::Elem acc = Kk.one();
      for (int i = 0; i < e; ++i) {
        pows[i] = acc;
        if (e > 1) acc = Kk.mul(acc, root);
      }
      gen_powers[{e, k}] = pows;
    }
}

FqCtx::Elem FqTower::embed(int from_deg, int to_deg, const FqCtx::Elem& a) const {
  if (from_deg == to_deg) return a;
  auto it = gen_powers.find({from_deg, to_deg});
  if (it == gen_powers.end()) throw std::invalid_argument("FqTower::embed: no embedding");
  const FqCtx& Kk = at(to_deg);
  FqCtx::Elem r = Kk.zero();
  for (int i = 0; i < from_deg; ++i) {
    if (!a[i]) continue;
    FqCtx::Elem term = it->second[i];
    for (auto& w : term) w = base.mul(w, a[i]);
    r = Kk.add(r, term);
  }
  return r;
}

int FqTower::minimal_degree(int deg, const FqCtx::Elem& a) const {
  const FqCtx& K = at(deg);
  for (int j = 1; j <= deg; ++j) {
    if (deg % j) continue;
    unsigned long long pj = 1;
    for (int i = 0; i < j; ++i) pj *= base.p;
    if (K.pow(a, pj) == a) return j;
  }
  return deg;
}

FqCtx::Elem FqTower::compress(int deg, int m, const FqCtx::Elem& a) const {
  if (m == deg) return a;
  const FqCtx& Km = at(m);
  size_t n = Km.order();
  for (size_t idx = 0; idx < n; ++idx) {
    FqCtx::Elem cand(Km.deg, 0);
    size_t w = idx;
    for (int i = 0; i < Km.deg; ++i) {
      cand[i] = static_cast<uint32_t>(w % base.p);
      w /= base.p;
    }
    if (embed(m, deg, cand) == a) return cand;
  }
  throw std::logic_error("FqTower::compress: element not in subfield");
}

FqMat FqMat::identity(const FqCtx& K, int n) {
  FqMat M(n, n, K.deg);
  for (int i = 0; i < n; ++i) M.set(i, i, K.one());
  return M;
}

FqMat fq_lift(const FqCtx& K, const FpMat& A) {
  FqMat M(A.rows, A.cols, K.deg);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) M.at(i, j)[0] = A.at(i, j);
  return M;
}

FqMat fq_embed_mat(const FqTower& T, int from_deg, int to_deg, const FqMat& A) {
  FqMat M(A.rows, A.cols, to_deg);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) M.set(i, j, T.embed(from_deg, to_deg, A.get(i, j)));
  return M;
}

FqMat fq_mul(const FqCtx& K, const FqMat& A, const FqMat& B) {
  if (A.cols != B.rows) throw std::invalid_argument("fq_mul: shape");
  FqMat C(A.rows, B.cols, K.deg);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      FqCtx::Elem aik = A.get(i, k);
      if (K.is_zero(aik)) continue;
      for (int j = 0; j < B.cols; ++j) {
        FqCtx::Elem prod = K.mul(aik, B.get(k, j));
        C.set(i, j, K.add(C.get(i, j), prod));
      }
    }
  return C;
}

int fq_rref(const FqCtx& K, FqMat& A, std::vector<int>* pivot_cols) {
  int r = 0;
  if (pivot_cols) pivot_cols->clear();
  for (int c = 0; c < A.cols && r < A.rows; ++c) {
    int piv = -1;
    for (int i = r; i < A.rows; ++i)
      if (!K.is_zero(A.get(i, c))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < A.cols; ++j) {
        FqCtx::Elem t = A.get(piv, j);
        A.set(piv, j, A.get(r, j));
        A.set(r, j, t);
      }
    FqCtx::Elem s = K.inv(A.get(r, c));
    for (int j = c; j < A.cols; ++j) A.set(r, j, K.mul(s, A.get(r, j)));
    for (int i = 0; i < A.rows; ++i) {
      if (i == r) continue;
      FqCtx::Elem f = A.get(i, c);
      if (K.is_zero(f)) continue;
      for (int j = c; j < A.cols; ++j)
        A.set(i, j, K.sub(A.get(i, j), K.mul(f, A.get(r, j))));
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

FqMat fq_transpose(const FqMat& A) {
  FqMat T(A.cols, A.rows, A.deg);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.set(j, i, A.get(i, j));
  return T;
}

FqMat fq_right_nullspace(const FqCtx& K, const FqMat& A) {
  FqMat R = A;
  std::vector<int> piv;
  int r = fq_rref(K, R, &piv);
  std::vector<bool> is_piv(A.cols, false);
  for (int c : piv) is_piv[c] = true;
  FqMat N(A.cols - r, A.cols, K.deg);
  int row = 0;
  for (int c = 0; c < A.cols; ++c) {
    if (is_piv[c]) continue;
    N.set(row, c, K.one());
    for (int i = 0; i < r; ++i) N.set(row, piv[i], K.neg(R.get(i, c)));
    ++row;
  }
  return N;
}

FqMat fq_left_nullspace(const FqCtx& K, const FqMat& A) {
  return fq_right_nullspace(K, fq_transpose(A));
}

FqMat fq_solve_left(const FqCtx& K, const FqMat& B, const FqMat& C) {
  // X * B = C, unknown X is C.rows x B.rows
  FqMat M(B.cols, B.rows + C.rows, K.deg);
  for (int i = 0; i < B.rows; ++i)
    for (int j = 0; j < B.cols; ++j) M.set(j, i, B.get(i, j));
  for (int i = 0; i < C.rows; ++i)
    for (int j = 0; j < C.cols; ++j) M.set(j, B.rows + i, C.get(i, j));
  std::vector<int> piv;
  fq_rref(K, M, &piv);
  FqMat X(C.rows, B.rows, K.deg);
  for (size_t k = 0; k < piv.size(); ++k) {
    if (piv[k] >= B.rows) throw std::domain_error("fq_solve_left: inconsistent system");
    for (int i = 0; i < C.rows; ++i) X.set(i, piv[k], M.get(static_cast<int>(k), B.rows + i));
  }
  return X;
}

FqPoly fq_charpoly(const FqCtx& K, FqMat A) {
  int n = A.rows;
  if (n == 0) return FqPoly{K.one()};
  // reduce to upper Hessenberg by similarity
  for (int c = 0; c + 2 < n; ++c) {
    int piv = -1;
    for (int i = c + 1; i < n; ++i)
      if (!K.is_zero(A.get(i, c))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != c + 1) {
      for (int j = 0; j < n; ++j) {
        FqCtx::Elem t = A.get(piv, j);
        A.set(piv, j, A.get(c + 1, j));
        A.set(c + 1, j, t);
      }
      for (int i = 0; i < n; ++i) {
        FqCtx::Elem t = A.get(i, piv);
        A.set(i, piv, A.get(i, c + 1));
        A.set(i, c + 1, t);
      }
    }
    FqCtx::Elem invp = K.inv(A.get(c + 1, c));
    for (int i = c + 2; i < n; ++i) {
      FqCtx::Elem f = K.mul(A.get(i, c), invp);
      if (K.is_zero(f)) continue;
      for (int j = 0; j < n; ++j) A.set(i, j, K.sub(A.get(i, j), K.mul(f, A.get(c + 1, j))));
      for (int j = 0; j < n; ++j) A.set(j, c + 1, K.add(A.get(j, c + 1), K.mul(f, A.get(j, i))));
    }
  }
  // p_k(x) for leading k x k blocks of the Hessenberg matrix
  std::vector<FqPoly> p(n + 1);
  p[0] = FqPoly{K.one()};
  for (int k = 1; k <= n; ++k) {
    // (x - A[k-1][k-1]) * p[k-1]
    FqPoly cur(p[k - 1].size() + 1, K.zero());
    for (size_t i = 0; i < p[k - 1].size(); ++i) {
      cur[i + 1] = K.add(cur[i + 1], p[k - 1][i]);
      cur[i] = K.sub(cur[i], K.mul(A.get(k - 1, k - 1), p[k - 1][i]));
    }
    FqCtx::Elem prod = K.one();
    for (int i = k - 1; i >= 1; --i) {
      prod = K.mul(prod, A.get(i, i - 1));
      if (K.is_zero(prod)) break;
      FqCtx::Elem coef = K.mul(A.get(i - 1, k - 1), prod);
      if (K.is_zero(coef)) continue;
      for (size_t j = 0; j < p[i - 1].size(); ++j)
        cur[j] = K.sub(cur[j], K.mul(coef, p[i - 1][j]));
    }
    p[k] = cur;
  }
  return p[n];
}

FqCtx::Elem fq_poly_eval(const FqCtx& K, const FqPoly& f, const FqCtx::Elem& x) {
  FqCtx::Elem acc = K.zero();
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    acc = K.mul(acc, x);
    acc = K.add(acc, f[i]);
  }
  return acc;
}

std::vector<std::pair<FqCtx::Elem, int>> fq_poly_roots(const FqCtx& K, const FqPoly& f) {
  std::vector<std::pair<FqCtx::Elem, int>> roots;
  size_t n = K.order();
  if (n > 3000000) throw std::runtime_error("fq_poly_roots: field too large to enumerate");
  for (size_t idx = 0; idx < n; ++idx) {
    FqCtx::Elem cand(K.deg, 0);
    size_t w = idx;
    for (int i = 0; i < K.deg; ++i) {
      cand[i] = static_cast<uint32_t>(w % K.base.p);
      w /= K.base.p;
    }
    if (!K.is_zero(fq_poly_eval(K, f, cand))) continue;
    // algebraic multiplicity by repeated synthetic division
    FqPoly g = f;
    int mult = 0;
    while (true) {
      // divide g by (x - cand)
      FqPoly q(g.size() - 1, K.zero());
      FqCtx::Elem carry = K.zero();
      for (int i = static_cast<int>(g.size()) - 1; i >= 1; --i) {
        carry = K.add(g[i], K.mul(carry, cand));
        q[i - 1] = carry;
      }
      FqCtx::Elem rem = K.add(g[0], K.mul(carry, cand));
      if (!K.is_zero(rem)) break;
      ++mult;
      g = q;
      if (g.size() <= 1) break;
    }
    roots.push_back({cand, mult});
  }
  return roots;
}

}  // namespace bianchi

#include "bianchi/cohomology.hpp"

namespace bianchi {

namespace {

// letter value and letter action under the cocycle rule
// c(g^-1) = -c(g) * act(g^-1)
FpVec letter_value(const GroupPresentation& P, const ModulePtr& M,
                   const std::vector<FpVec>& values, int letter) {
  const Fp& Fl = M->Fl;
  int g = std::abs(letter) - 1;
  if (letter > 0) return values[g];
  const FpMat& ainv = M->act(P.F.sl2_inverse(P.gens[g]));
  FpVec v = vec_mat(Fl, values[g], ainv);
  for (auto& x : v) x = Fl.neg(x);
  return v;
}

const FpMat& letter_act(const GroupPresentation& P, const ModulePtr& M, int letter) {
  int g = std::abs(letter) - 1;
  if (letter > 0) return M->act(P.gens[g]);
  return M->act(P.F.sl2_inverse(P.gens[g]));
}

std::vector<FpVec> split_cocycle(const FpVec& c, int ngens, int dim) {
  std::vector<FpVec> parts(ngens);
  for (int g = 0; g < ngens; ++g)
    parts[g] = FpVec(c.begin() + static_cast<size_t>(g) * dim,
                     c.begin() + static_cast<size_t>(g + 1) * dim);
  return parts;
}

}  // namespace

CohomologySpace h0(ModulePtr M, const std::vector<Mat2>& gens) {
  const Fp& Fl = M->Fl;
  int m = M->dim;
  CohomologySpace H;
  H.degree = 0;
  H.M = M;
  H.gens = gens;
  FpMat A(m, static_cast<int>(gens.size()) * m);
  for (size_t gi = 0; gi < gens.size(); ++gi) {
    const FpMat& ag = M->act(gens[gi]);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        A.at(i, static_cast<int>(gi) * m + j) = Fl.sub(ag.at(i, j), i == j ? 1u : 0u);
  }
  FpMat N = left_nullspace(Fl, A);
  for (int r = 0; r < N.rows; ++r)
    H.basis.push_back(FpVec(N.a.begin() + static_cast<size_t>(r) * m,
                            N.a.begin() + static_cast<size_t>(r + 1) * m));
  H.proj.init(Fl, FpMat(0, m), N);
  return H;
}

FpMat cocycle_space(const GroupPresentation& P, const ModulePtr& M) {
  const Fp& Fl = M->Fl;
  const FieldData& F = P.F;
  int m = M->dim;
  int ngens = static_cast<int>(P.gens.size());
  // relator conditions: for relator w_1...w_k the extension rule gives
  // sum_j value(w_j) * act(w_{j+1} ... w_k) = 0.
  int nrel = static_cast<int>(P.relators.size());
  FpMat A(ngens * m, nrel * m);
  for (int r = 0; r < nrel; ++r) {
    const Word& w = P.relators[r];
    int k = static_cast<int>(w.size());
    std::vector<FpMat> suffix(k + 1);
    suffix[k] = FpMat::identity(m);
    for (int j = k - 1; j >= 0; --j)
      suffix[j] = mat_mul(Fl, letter_act(P, M, w[j]), suffix[j + 1]);
    // coefficient of c_g in this relator
    for (int j = 0; j < k; ++j) {
      int g = std::abs(w[j]) - 1;
      FpMat coef = suffix[j + 1];
      if (w[j] < 0) {
        coef = mat_mul(Fl, M->act(F.sl2_inverse(P.gens[g])), coef);
        coef = mat_scale(Fl, Fl.neg(1), coef);
      }
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q)
          A.at(g * m + p, r * m + q) = Fl.add(A.at(g * m + p, r * m + q), coef.at(p, q));
    }
  }
  return left_nullspace(Fl, A);
}

CohomologySpace h1(std::shared_ptr<const GroupPresentation> P, ModulePtr M) {
  const Fp& Fl = M->Fl;
  int m = M->dim;
  int ngens = static_cast<int>(P->gens.size());
  CohomologySpace H;
  H.degree = 1;
  H.M = M;
  H.P = P;
  H.gens = P->gens;

  // central -I acting by -1 kills H^1 in odd characteristic
  const FpMat& c_act = M->act(FieldData::minus_identity());
  FpMat neg_id(m, m);
  for (int i = 0; i < m; ++i) neg_id.at(i, i) = Fl.neg(1);
  if (c_act == neg_id) {
    H.killed_by_center = true;
    return H;
  }

  FpMat Z1 = cocycle_space(*P, M);
  H.z1_dim = Z1.rows;

  FpMat B1(m, ngens * m);
  for (int t = 0; t < m; ++t) {
    FpVec e(m, 0);
    e[t] = 1;
    FpVec b = coboundary(P->gens, M, e);
    for (int j = 0; j < ngens * m; ++j) B1.at(t, j) = b[j];
  }
  H.b1_dim = rank(Fl, B1);

  // choose cocycle representatives independent modulo coboundaries
  FpMat acc = B1;
  std::vector<int> acc_piv;
  rref_in_place(Fl, acc, &acc_piv);
  FpMat chosen(0, ngens * m);
  for (int r = 0; r < Z1.rows; ++r) {
    FpVec v(Z1.a.begin() + static_cast<size_t>(r) * Z1.cols,
            Z1.a.begin() + static_cast<size_t>(r + 1) * Z1.cols);
    // reduce against acc
    FpVec w = v;
    for (int i = 0; i < acc.rows && i < static_cast<int>(acc_piv.size()); ++i) {
      uint32_t f = w[acc_piv[i]];
      if (!f) continue;
      for (int j = 0; j < acc.cols; ++j) w[j] = Fl.sub(w[j], Fl.mul(f, acc.at(i, j)));
    }
    if (vec_is_zero(w)) continue;
    H.basis.push_back(v);
    FpMat grown(acc.rows + 1, acc.cols);
    std::copy(acc.a.begin(), acc.a.end(), grown.a.begin());
    for (int j = 0; j < acc.cols; ++j) grown.at(acc.rows, j) = w[j];
    acc = grown;
    rref_in_place(Fl, acc, &acc_piv);
  }
  FpMat basis_mat(static_cast<int>(H.basis.size()), ngens * m);
  for (size_t i = 0; i < H.basis.size(); ++i)
    for (int j = 0; j < ngens * m; ++j) basis_mat.at(static_cast<int>(i), j) = H.basis[i][j];
  H.proj.init(Fl, B1, basis_mat);
  return H;
}

FpVec cocycle_eval_word(const GroupPresentation& P, const ModulePtr& M, const FpVec& cocycle,
                        const Word& w) {
  const Fp& Fl = M->Fl;
  int m = M->dim;
  auto values = split_cocycle(cocycle, static_cast<int>(P.gens.size()), m);
  FpVec v(m, 0);
  for (int letter : w) {
    v = vec_mat(Fl, v, letter_act(P, M, letter));
    FpVec lv = letter_value(P, M, values, letter);
    v = vec_add(Fl, v, lv);
  }
  return v;
}

FpVec cocycle_eval(const GroupPresentation& P, const ModulePtr& M, const FpVec& cocycle,
                   const Mat2& m) {
  return cocycle_eval_word(P, M, cocycle, word_decompose(P, m));
}

bool is_cocycle(const GroupPresentation& P, const ModulePtr& M, const FpVec& c) {
  for (const Word& r : P.relators)
    if (!vec_is_zero(cocycle_eval_word(P, M, c, r))) return false;
  return true;
}

FpVec coboundary(const std::vector<Mat2>& gens, const ModulePtr& M, const FpVec& v) {
  const Fp& Fl = M->Fl;
  FpVec out;
  out.reserve(gens.size() * v.size());
  for (const Mat2& g : gens) {
    FpVec w = vec_mat(Fl, v, M->act(g));
    for (size_t i = 0; i < v.size(); ++i) out.push_back(Fl.sub(w[i], v[i]));
  }
  return out;
}

FpVec shapiro_value(const CohomologySpace& H, const FpVec& cocycle, const Mat2& x,
                    int block_dim) {
  FpVec full = cocycle_eval(*H.P, H.M, cocycle, x);
  return FpVec(full.begin(), full.begin() + block_dim);
}

}  // namespace bianchi

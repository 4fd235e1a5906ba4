#include "bianchi/hecke.hpp"

#include <deque>
#include <numeric>
#include <sstream>

namespace bianchi {

namespace {

// (adj(gj) * m * gi) / alpha if integral with determinant 1, i.e. whether
// gj^-1 * m * gi lies in SL2(O).
bool conjugate_in_sl2(const FieldData& F, const Mat2& gj, const Mat2& m, const Mat2& gi,
                      const QuadInt& alpha, Mat2* out = nullptr) {
  Mat2 prod = F.mmul(F.mmul(F.iota(gj), m), gi);
  QuadInt entries[4] = {prod.a, prod.b, prod.c, prod.d};
  QuadInt reduced[4];
  for (int k = 0; k < 4; ++k) {
    if (!F.divides(alpha, entries[k])) return false;
    reduced[k] = F.divexact(entries[k], alpha);
  }
  Mat2 res{reduced[0], reduced[1], reduced[2], reduced[3]};
  if (!F.is_sl2(res)) return false;
  if (out) *out = res;
  return true;
}

std::vector<QuadInt> residue_transversal(const FieldData& F, const QuadInt& alpha) {
  ResidueCtx R(F, alpha);
  return R.all_residues();
}

}  // namespace

std::vector<Mat2> hecke_reps(const GroupPresentation& P, const QuadInt& alpha,
                             const CongruenceSubgroup& level, const CosetTable* table) {
  const FieldData& F = P.F;
  bool trivial = level.trivial(F);
  if (!trivial && !F.is_unit(F.gcd(alpha, level.modulus)))
    throw std::invalid_argument("hecke_reps: alpha shares a factor with the level modulus");
  if (!trivial && table == nullptr)
    throw std::invalid_argument("hecke_reps: nontrivial level requires a coset table");

  QuadInt one{1, 0};
  std::vector<Mat2> reps;
  reps.push_back({alpha, {0, 0}, {0, 0}, one});  // diag(alpha, 1)

  // lower triangular family [[1,0],[c,alpha]] over residues c mod alpha,
  // shifted into the level monoid by CRT, and for Gamma1 corrected on the
  // right so every representative is congruent to [[alpha,*],[0,1]].
  Mat2 sigma = FieldData::identity();
  QuadInt crt{0, 0};
  if (!trivial) {
    QuadInt s, t;
    QuadInt g = F.ext_gcd(level.modulus, alpha, s, t);
    if (!F.is_unit(g)) throw std::logic_error("hecke_reps: CRT failed");
    // crt = modulus * s / g is 1 mod alpha and 0 mod modulus
    QuadInt ginv_s = F.divexact(s, g);  // may not divide; adjust below
    crt = F.mul(level.modulus, ginv_s);
    if (level.kind == CongruenceSubgroup::Kind::Gamma1) {
      QuadInt ss, tt;
      QuadInt gg = F.ext_gcd(alpha, level.modulus, ss, tt);
      QuadInt su = F.divexact(ss, gg), tu = F.divexact(tt, gg);
      // det = alpha*su + tu*modulus = 1
      sigma = {alpha, F.neg(tu), level.modulus, su};
      if (!F.is_sl2(sigma)) throw std::logic_error("hecke_reps: sigma construction failed");
    }
  }
  for (const QuadInt& c0 : residue_transversal(F, alpha)) {
    QuadInt c = trivial ? c0 : F.mul(c0, crt);
    Mat2 g{one, {0, 0}, c, alpha};
    if (level.kind == CongruenceSubgroup::Kind::Gamma1 && !trivial) g = F.mmul(g, sigma);
    reps.push_back(g);
  }

  // --- verification ---
  __int128 nalpha = F.norm(alpha);
  if (static_cast<__int128>(reps.size()) != nalpha + 1)
    throw std::logic_error("hecke_reps: wrong representative count");
  auto in_level_group = [&](const Mat2& m) {
    return trivial ? F.is_sl2(m) : subgroup_membership(F, m, level);
  };
  for (const Mat2& g : reps)
    if (!double_coset_member(F, g, alpha))
      throw std::logic_error("hecke_reps: candidate outside the double coset");
  for (size_t i = 0; i < reps.size(); ++i)
    for (size_t j = i + 1; j < reps.size(); ++j) {
      Mat2 w;
      if (conjugate_in_sl2(F, reps[i], FieldData::identity(), reps[j], alpha, &w) &&
          in_level_group(w))
        throw std::logic_error("hecke_reps: representatives are not disjoint");
    }
  std::vector<Mat2> gens = trivial ? P.gens : table->schreier_generators();
  std::vector<std::vector<int>> adj(reps.size());
  for (const Mat2& g : gens) {
    for (size_t i = 0; i < reps.size(); ++i) {
      int found = -1;
      for (size_t j = 0; j < reps.size(); ++j) {
        Mat2 w;
        if (!conjugate_in_sl2(F, reps[j], g, reps[i], alpha, &w)) continue;
        if (!in_level_group(w)) continue;
        if (found >= 0) throw std::logic_error("hecke_reps: group action target not unique");
        found = static_cast<int>(j);
      }
      if (found < 0) throw std::logic_error("hecke_reps: family not closed under the action");
      adj[i].push_back(found);
      adj[found].push_back(static_cast<int>(i));
    }
  }
  std::vector<bool> seen(reps.size(), false);
  std::deque<int> queue{0};
  seen[0] = true;
  size_t reached = 1;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j : adj[i])
      if (!seen[j]) {
        seen[j] = true;
        ++reached;
        queue.push_back(j);
      }
  }
  if (reached != reps.size())
    throw std::logic_error("hecke_reps: family is not a single orbit of the group");
  return reps;
}

HeckeOperator hecke_matrix(const CohomologySpace& H, const QuadInt& alpha,
                           const std::vector<Mat2>& reps) {
  const Fp& Fl = H.field();
  const FieldData& F = H.M->F;
  HeckeOperator T;
  T.alpha = alpha;
  T.label = quadint_to_string(alpha);
  T.ell = Fl.p;
  T.reps = reps;
  int h = H.dim();
  T.matrix = FpMat(h, h);
  if (h == 0) return T;

  std::vector<FpMat> iota_act;
  iota_act.reserve(reps.size());
  for (const Mat2& g : reps) iota_act.push_back(H.M->act(F.iota(g)));

  if (H.degree == 0) {
    for (int b = 0; b < h; ++b) {
      FpVec acc(H.M->dim, 0);
      for (size_t i = 0; i < reps.size(); ++i)
        acc = vec_add(Fl, acc, vec_mat(Fl, H.basis[b], iota_act[i]));
      FpVec coords = H.proj.project(acc);
      for (int k = 0; k < h; ++k) T.matrix.at(b, k) = coords[k];
    }
    return T;
  }

  int m = H.M->dim;
  int ngens = static_cast<int>(H.gens.size());
  // for each generator g and each i, the unique j with gj^-1 * g * gi in the
  // group; the cocycle argument is that conjugate, kept as a word
  std::vector<std::vector<Word>> words(ngens, std::vector<Word>(reps.size()));
  for (int gi = 0; gi < ngens; ++gi) {
    for (size_t i = 0; i < reps.size(); ++i) {
      Mat2 w;
      int found = -1;
      Mat2 wfound;
      for (size_t j = 0; j < reps.size(); ++j) {
        if (!conjugate_in_sl2(F, reps[j], H.gens[gi], reps[i], alpha, &w)) continue;
        if (found >= 0) throw std::runtime_error("hecke_matrix: coset target not unique");
        found = static_cast<int>(j);
        wfound = w;
      }
      if (found < 0) throw std::runtime_error("hecke_matrix: coset target not found");
      words[gi][i] = word_decompose(*H.P, wfound);
    }
  }
  for (int b = 0; b < h; ++b) {
    FpVec out;
    out.reserve(static_cast<size_t>(ngens) * m);
    for (int gi = 0; gi < ngens; ++gi) {
      FpVec acc(m, 0);
      for (size_t i = 0; i < reps.size(); ++i) {
        FpVec val = cocycle_eval_word(*H.P, H.M, H.basis[b], words[gi][i]);
        acc = vec_add(Fl, acc, vec_mat(Fl, val, iota_act[i]));
      }
      out.insert(out.end(), acc.begin(), acc.end());
    }
    if (!is_cocycle(*H.P, H.M, out))
      throw std::runtime_error("hecke_matrix: operator output violates relator conditions");
    FpVec coords = H.proj.project(out);
    for (int k = 0; k < h; ++k) T.matrix.at(b, k) = coords[k];
  }
  return T;
}

std::string EigenValue::to_string() const {
  if (deg == 1) return std::to_string(coeffs.empty() ? 0 : coeffs[0]);
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ",";
    os << coeffs[i];
  }
  os << "]@" << deg;
  return os.str();
}

const EigenValue* EigenSystem::value_of(const std::string& label) const {
  for (const auto& [l, v] : values)
    if (l == label) return &v;
  return nullptr;
}

namespace {

struct EigenWorker {
  const std::vector<HeckeOperator>* ops = nullptr;
  const FqTower* tower = nullptr;
  int max_ext = 4;
  EigenReport* report = nullptr;

  // space: rows are a basis of the current joint eigenspace, coordinates in
  // the ambient basis, over F_{ell^e}
  void recurse(const FqMat& space, int e, size_t op_idx,
               std::vector<std::pair<std::string, std::pair<int, FqCtx::Elem>>> assigned) {
    if (space.rows == 0) return;
    if (op_idx == ops->size()) {
      EigenSystem sys;
      sys.ext_degree = e;
      sys.multiplicity = space.rows;
      for (const auto& [label, dv] : assigned) {
        FqCtx::Elem lifted = tower->embed(dv.first, e, dv.second);
        int mu = tower->minimal_degree(e, lifted);
        EigenValue val;
        val.deg = mu;
        val.coeffs = tower->compress(e, mu, lifted);
        sys.values.push_back({label, val});
      }
      report->systems.push_back(std::move(sys));
      return;
    }
    const FqCtx& Ke = tower->at(e);
    const HeckeOperator& op = (*ops)[op_idx];
    FqMat Tlift = fq_lift(Ke, op.matrix);
    FqMat BT = fq_mul(Ke, space, Tlift);
    FqMat X = fq_solve_left(Ke, space, BT);  // restriction of T to the space
    FqPoly cp = fq_charpoly(Ke, X);
    int accounted = 0;
    for (int m = 1; e * m <= max_ext; ++m) {
      int k = e * m;
      const FqCtx& Kk = tower->at(k);
      FqPoly cpk(cp.size());
      for (size_t i = 0; i < cp.size(); ++i) cpk[i] = tower->embed(e, k, cp[i]);
      for (const auto& [root, mult] : fq_poly_roots(Kk, cpk)) {
        int mu = tower->minimal_degree(k, root);
        // process the root at the first level where it appears
        int first_m = std::lcm(mu, e) / e;
        if (first_m != m) continue;
        accounted += mult;
        FqMat Xk = fq_embed_mat(*tower, e, k, X);
        for (int i = 0; i < Xk.rows; ++i) Xk.set(i, i, Kk.sub(Xk.get(i, i), root));
        // row vectors: eigenvectors are left null vectors of X - root
        FqMat N = fq_left_nullspace(Kk, Xk);
        // rows of N * space are a basis of the eigenspace in ambient coords
        if (N.rows == 0) continue;  // defective eigenvalue: no eigenvector
        FqMat new_space = fq_mul(Kk, N, fq_embed_mat(*tower, e, k, space));
        auto next = assigned;
        next.push_back({op.label, {k, root}});
        recurse(new_space, k, op_idx + 1, std::move(next));
      }
    }
    int deg = static_cast<int>(cp.size()) - 1;
    if (accounted < deg) report->unresolved_dim += deg - accounted;
  }
};

}  // namespace

EigenReport eigensystems(const std::vector<HeckeOperator>& ops, int max_ext_degree) {
  EigenReport report;
  if (ops.empty()) return report;
  uint32_t ell = ops[0].ell;
  int n = ops[0].matrix.rows;
  Fp Fl(ell);
  for (const auto& op : ops) {
    if (op.ell != ell || op.matrix.rows != n || op.matrix.cols != n)
      throw std::invalid_argument("eigensystems: operators on different spaces");
  }
  for (size_t i = 0; i < ops.size(); ++i)
    for (size_t j = i + 1; j < ops.size(); ++j)
      if (!(mat_mul(Fl, ops[i].matrix, ops[j].matrix) ==
            mat_mul(Fl, ops[j].matrix, ops[i].matrix)))
        throw std::invalid_argument("eigensystems: operators " + ops[i].label + " and " +
                                    ops[j].label + " do not commute");
  if (n == 0) return report;
  FqTower tower(Fl, max_ext_degree);
  EigenWorker worker{&ops, &tower, max_ext_degree, &report};
  FqMat full = FqMat::identity(tower.at(1), n);
  worker.recurse(full, 1, 0, {});
  return report;
}

EigenSystem twist_eigensystem(const EigenSystem& s, int a, int b,
                              const SplitPrime& sp) {
  Fp Fl(static_cast<uint32_t>(sp.ell));
  EigenSystem out = s;
  for (auto& [label, val] : out.values) {
    QuadInt pi = parse_quadint(label);
    uint32_t scale = Fl.mul(Fl.pow(sp.tau1(pi), a), Fl.pow(sp.tau2(pi), b));
    for (auto& c : val.coeffs) c = Fl.mul(c, scale);
  }
  return out;
}

bool systems_equal_on_support(const EigenSystem& s1, const EigenSystem& s2, int min_support) {
  int shared = 0;
  for (const auto& [label, v1] : s1.values) {
    const EigenValue* v2 = s2.value_of(label);
    if (!v2) continue;
    ++shared;
    if (!(v1 == *v2)) return false;
  }
  return shared >= min_support;
}

std::vector<TwistMatch> match_up_to_twist(const EigenSystem& phi,
                                          const std::vector<EigenSystem>& candidates,
                                          const SplitPrime& sp, int min_support) {
  int shared = 0;
  if (!candidates.empty()) {
    for (const auto& [label, v] : phi.values)
      if (candidates[0].value_of(label)) ++shared;
    if (shared < min_support)
      throw std::invalid_argument("match_up_to_twist: shared prime support too small");
  }
  std::vector<TwistMatch> out;
  int m = sp.ell - 1;
  for (size_t c = 0; c < candidates.size(); ++c)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        EigenSystem tw = twist_eigensystem(candidates[c], a, b, sp);
        if (systems_equal_on_support(phi, tw, min_support))
          out.push_back({static_cast<int>(c), a, b});
      }
  return out;
}

}  // namespace bianchi

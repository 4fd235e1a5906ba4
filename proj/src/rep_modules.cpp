#include "bianchi/rep_modules.hpp"

#include <sstream>

namespace bianchi {

namespace {

std::vector<std::vector<uint32_t>> binomials(const Fp& Fl, int n) {
  std::vector<std::vector<uint32_t>> C(n + 1);
  for (int i = 0; i <= n; ++i) {
    C[i].assign(i + 1, 0);
    C[i][0] = C[i][i] = 1 % Fl.p;
    for (int j = 1; j < i; ++j) C[i][j] = Fl.add(C[i - 1][j - 1], C[i - 1][j]);
  }
  return C;
}

// coefficients of (aX+bY)^m (cX+dY)^k in the basis X^(m+k-t) Y^t
std::vector<uint32_t> substitute_monomial(const Fp& Fl, uint32_t a, uint32_t b, uint32_t c,
                                          uint32_t d, int m, int k,
                                          const std::vector<std::vector<uint32_t>>& C) {
  std::vector<uint32_t> first(m + 1), second(k + 1);
  for (int i = 0; i <= m; ++i)
    first[i] = Fl.mul(C[m][i], Fl.mul(Fl.pow(a, m - i), Fl.pow(b, i)));
  for (int i = 0; i <= k; ++i)
    second[i] = Fl.mul(C[k][i], Fl.mul(Fl.pow(c, k - i), Fl.pow(d, i)));
  std::vector<uint32_t> out(m + k + 1, 0);
  for (int i = 0; i <= m; ++i) {
    if (!first[i]) continue;
    for (int j = 0; j <= k; ++j) out[i + j] = Fl.add(out[i + j], Fl.mul(first[i], second[j]));
  }
  return out;
}

// section of P^1(F_ell): (1,0), (1,1), ..., (1,l-1), (0,1)
struct ProjLine {
  Fp Fl;
  explicit ProjLine(const Fp& f) : Fl(f) {}
  int size() const { return static_cast<int>(Fl.p) + 1; }
  std::pair<uint32_t, uint32_t> point(int i) const {
    if (i < static_cast<int>(Fl.p)) return {1, static_cast<uint32_t>(i)};
    return {0, 1};
  }
  // v = scale * point(index); requires v != 0
  void locate(uint32_t v0, uint32_t v1, int& index, uint32_t& scale) const {
    if (v0) {
      scale = v0;
      index = static_cast<int>(Fl.mul(v1, Fl.inv(v0)));
    } else {
      scale = v1;
      index = static_cast<int>(Fl.p);
    }
  }
};

int canonical_degree(const Fp& Fl, int n) {
  int m = static_cast<int>(Fl.p) - 1;
  return ((n % m) + m) % m;
}

ModulePtr make_module(const FieldData& F, const SplitPrime& sp, int dim, ReductionTag tag,
                      std::string name, std::vector<std::string> labels,
                      std::function<FpMat(const Mat2&)> act) {
  auto M = std::make_shared<FpRepModule>();
  M->Fl = Fp(static_cast<uint32_t>(sp.ell));
  M->F = F;
  M->sp = sp;
  M->dim = dim;
  M->tag = tag;
  M->name = std::move(name);
  M->basis_labels = std::move(labels);
  M->act_fn = std::move(act);
  return M;
}

}  // namespace

const FpMat& FpRepModule::act(const Mat2& g) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(g);
  if (it == cache_.end()) it = cache_.emplace(g, act_fn(g)).first;
  return it->second;
}

ModulePtr trivial_module(const FieldData& F, const SplitPrime& sp) {
  return make_module(F, sp, 1, ReductionTag::None, "triv", {"1"}, [](const Mat2&) {
    FpMat m(1, 1);
    m.at(0, 0) = 1;
    return m;
  });
}

ModulePtr build_E(const FieldData& F, const SplitPrime& sp, int r, bool bar) {
  if (r < 0) throw std::invalid_argument("build_E: r must be nonnegative");
  Fp Fl(static_cast<uint32_t>(sp.ell));
  std::vector<std::string> labels;
  for (int i = 0; i <= r; ++i)
    labels.push_back("X^" + std::to_string(r - i) + "Y^" + std::to_string(i));
  auto C = binomials(Fl, r);
  auto act = [Fl, sp, r, bar, C](const Mat2& g) {
    uint32_t a = sp.tau(bar, g.a), b = sp.tau(bar, g.b);
    uint32_t c = sp.tau(bar, g.c), d = sp.tau(bar, g.d);
    FpMat m(r + 1, r + 1);
    for (int i = 0; i <= r; ++i) {
      auto coeffs = substitute_monomial(Fl, a, b, c, d, r - i, i, C);
      for (int j = 0; j <= r; ++j) m.at(i, j) = coeffs[j];
    }
    return m;
  };
  return make_module(F, sp, r + 1, bar ? ReductionTag::LambdaBar : ReductionTag::Lambda,
                     "E_" + std::to_string(r) + (bar ? "~2" : "~1"), labels, act);
}

ModulePtr twist_det(ModulePtr M, int a, bool bar) {
  if (a == 0) return M;
  SplitPrime sp = M->sp;
  Fp Fl = M->Fl;
  ModulePtr base = M;
  auto act = [base, sp, Fl, a, bar](const Mat2& g) {
    uint32_t detv = sp.tau(bar, base->F.det(g));
    return mat_scale(Fl, Fl.pow(detv, a), base->act(g));
  };
  return make_module(M->F, sp, M->dim, M->tag, "det^" + std::to_string(a) + "*" + M->name,
                     M->basis_labels, act);
}

ModulePtr tensor(ModulePtr M1, ModulePtr M2) {
  Fp Fl = M1->Fl;
  std::vector<std::string> labels;
  for (const auto& l1 : M1->basis_labels)
    for (const auto& l2 : M2->basis_labels) labels.push_back(l1 + "(x)" + l2);
  auto act = [M1, M2, Fl](const Mat2& g) { return kron(Fl, M1->act(g), M2->act(g)); };
  return make_module(M1->F, M1->sp, M1->dim * M2->dim, ReductionTag::Both,
                     M1->name + "(x)" + M2->name, labels, act);
}

ModulePtr build_I(const FieldData& F, const SplitPrime& sp, int n, bool bar) {
  Fp Fl(static_cast<uint32_t>(sp.ell));
  int nc = canonical_degree(Fl, n);
  ProjLine P(Fl);
  std::vector<std::string> labels;
  for (int i = 0; i < P.size(); ++i) {
    auto [x, y] = P.point(i);
    labels.push_back("e(" + std::to_string(x) + "," + std::to_string(y) + ")");
  }
  auto act = [Fl, sp, nc, bar, P](const Mat2& g) {
    uint32_t a = sp.tau(bar, g.a), b = sp.tau(bar, g.b);
    uint32_t c = sp.tau(bar, g.c), d = sp.tau(bar, g.d);
    int np = P.size();
    FpMat m(np, np);
    for (int j = 0; j < np; ++j) {
      auto [p0, p1] = P.point(j);
      // (p0,p1) * M^T
      uint32_t w0 = Fl.add(Fl.mul(p0, a), Fl.mul(p1, b));
      uint32_t w1 = Fl.add(Fl.mul(p0, c), Fl.mul(p1, d));
      if (!w0 && !w1) continue;  // image hits the origin, functions vanish there
      int idx;
      uint32_t scale;
      P.locate(w0, w1, idx, scale);
      m.at(idx, j) = Fl.pow(scale, nc);
    }
    return m;
  };
  return make_module(F, sp, P.size(), bar ? ReductionTag::LambdaBar : ReductionTag::Lambda,
                     "I_" + std::to_string(nc) + (bar ? "~2" : "~1"), labels, act);
}

ModulePtr build_E_ab(const FieldData& F, const SplitPrime& sp, int r, int s, int a, int b) {
  return tensor(twist_det(build_E(F, sp, r, false), a, false),
                twist_det(build_E(F, sp, s, true), b, true));
}

ModulePtr build_I_rs(const FieldData& F, const SplitPrime& sp, int r, int s) {
  return tensor(build_I(F, sp, r, false), build_I(F, sp, s, true));
}

ModuleMap map_alpha(const FieldData& F, const SplitPrime& sp, int r, bool bar) {
  Fp Fl(static_cast<uint32_t>(sp.ell));
  ModuleMap mm;
  mm.source = build_E(F, sp, r, bar);
  mm.target = build_I(F, sp, r, bar);
  ProjLine P(Fl);
  mm.matrix = FpMat(r + 1, P.size());
  for (int i = 0; i <= r; ++i)
    for (int j = 0; j < P.size(); ++j) {
      auto [x, y] = P.point(j);
      mm.matrix.at(i, j) = Fl.mul(Fl.pow(x, r - i), Fl.pow(y, i));
    }
  return mm;
}

ModuleMap map_beta(const FieldData& F, const SplitPrime& sp, int r, bool bar) {
  Fp Fl(static_cast<uint32_t>(sp.ell));
  int ell = static_cast<int>(Fl.p);
  int k = ell - 1 - r;
  if (k < 0) throw std::invalid_argument("map_beta: need 0 <= r <= ell-1");
  ModuleMap mm;
  mm.source = build_I(F, sp, r, bar);
  mm.target = twist_det(build_E(F, sp, k, bar), r, bar);
  ProjLine P(Fl);
  int nc = canonical_degree(Fl, r);
  auto C = binomials(Fl, k);
  mm.matrix = FpMat(P.size(), k + 1);
  for (int i = 0; i < P.size(); ++i) {
    auto [pa, pb] = P.point(i);
    // sum over the line {x*(pa,pb)}: f(x*(pa,pb)) = x^nc, and
    // (b X - a Y)^k picks up x^k
    for (uint32_t x = 1; x < Fl.p; ++x) {
      uint32_t fval = Fl.pow(x, nc);
      uint32_t a = Fl.mul(x, pa), b = Fl.mul(x, pb);
      for (int t = 0; t <= k; ++t) {
        uint32_t coef = Fl.mul(C[k][t], Fl.mul(Fl.pow(b, k - t), Fl.pow(Fl.neg(a), t)));
        mm.matrix.at(i, t) = Fl.add(mm.matrix.at(i, t), Fl.mul(fval, coef));
      }
    }
  }
  return mm;
}

FourTermData build_four_term(const FieldData& F, const SplitPrime& sp, int r, int s) {
  Fp Fl(static_cast<uint32_t>(sp.ell));
  FourTermData D;
  ModuleMap ar = map_alpha(F, sp, r, false), as = map_alpha(F, sp, s, true);
  ModuleMap br = map_beta(F, sp, r, false), bs = map_beta(F, sp, s, true);
  D.E = tensor(ar.source, as.source);
  D.I = tensor(ar.target, as.target);
  ModulePtr U1 = tensor(br.target, bs.source);  // E^r_{l-1-r} (x) I_s
  ModulePtr U2 = tensor(br.source, bs.target);  // I_r (x) E^s_{l-1-s}
  D.V = tensor(br.target, bs.target);

  int du1 = U1->dim, du2 = U2->dim;
  std::vector<std::string> labels = U1->basis_labels;
  labels.insert(labels.end(), U2->basis_labels.begin(), U2->basis_labels.end());
  auto act = [U1, U2, du1, du2](const Mat2& g) {
    FpMat m(du1 + du2, du1 + du2);
    const FpMat& a1 = U1->act(g);
    const FpMat& a2 = U2->act(g);
    for (int i = 0; i < du1; ++i)
      for (int j = 0; j < du1; ++j) m.at(i, j) = a1.at(i, j);
    for (int i = 0; i < du2; ++i)
      for (int j = 0; j < du2; ++j) m.at(du1 + i, du1 + j) = a2.at(i, j);
    return m;
  };
  std::ostringstream un;
  un << "U_{" << r << "," << s << "}";
  D.U = make_module(F, sp, du1 + du2, ReductionTag::Both, un.str(), labels, act);

  D.iota = {D.E, D.I, kron(Fl, ar.matrix, as.matrix)};

  FpMat p1 = kron(Fl, br.matrix, FpMat::identity(as.target->dim));
  FpMat p2 = kron(Fl, FpMat::identity(ar.target->dim), bs.matrix);
  FpMat pi(D.I->dim, du1 + du2);
  for (int i = 0; i < D.I->dim; ++i) {
    for (int j = 0; j < du1; ++j) pi.at(i, j) = p1.at(i, j);
    for (int j = 0; j < du2; ++j) pi.at(i, du1 + j) = p2.at(i, j);
  }
  D.pi = {D.I, D.U, pi};

  FpMat q1 = kron(Fl, FpMat::identity(br.target->dim), bs.matrix);
  FpMat q2 = kron(Fl, br.matrix, FpMat::identity(bs.target->dim));
  FpMat pp(du1 + du2, D.V->dim);
  for (int j = 0; j < D.V->dim; ++j) {
    for (int i = 0; i < du1; ++i) pp.at(i, j) = q1.at(i, j);
    for (int i = 0; i < du2; ++i) pp.at(du1 + i, j) = Fl.neg(q2.at(i, j));
  }
  D.pi_prime = {D.U, D.V, pp};
  return D;
}

WData build_W(const FieldData& F, const SplitPrime& sp, int r, int s) {
  Fp Fl(static_cast<uint32_t>(sp.ell));
  FourTermData D = build_four_term(F, sp, r, s);
  FpMat K = left_nullspace(Fl, D.pi_prime.matrix);  // rows span ker(pi')
  auto solver = std::make_shared<QuotientSolver>();
  solver->init(Fl, FpMat(0, D.U->dim), K);
  ModulePtr U = D.U;
  FpMat Kc = K;
  auto act = [Fl, U, Kc, solver](const Mat2& g) {
    const FpMat& au = U->act(g);
    FpMat m(Kc.rows, Kc.rows);
    for (int i = 0; i < Kc.rows; ++i) {
      FpVec row(Kc.cols);
      for (int j = 0; j < Kc.cols; ++j) row[j] = Kc.at(i, j);
      FpVec img = vec_mat(Fl, row, au);
      FpVec coords = solver->project(img);  // throws if the kernel is not stable
      for (int j = 0; j < Kc.rows; ++j) m.at(i, j) = coords[j];
    }
    return m;
  };
  std::vector<std::string> labels;
  for (int i = 0; i < K.rows; ++i) labels.push_back("w" + std::to_string(i));
  WData W;
  std::ostringstream wn;
  wn << "W_{" << r << "," << s << "}";
  W.W = make_module(F, sp, K.rows, ReductionTag::Both, wn.str(), labels, act);
  W.inclusion = {W.W, D.U, K};
  return W;
}

FpMat pairing_E(const Fp& Fl, int r) {
  auto C = binomials(Fl, r);
  FpMat G(r + 1, r + 1);
  for (int i = 0; i <= r; ++i) {
    uint32_t v = Fl.inv(C[r][i]);
    if (i % 2) v = Fl.neg(v);
    G.at(i, r - i) = v;
  }
  return G;
}

FpMat pairing_I(const Fp& Fl, int r) {
  ProjLine P(Fl);
  int n1 = canonical_degree(Fl, r);
  int n2 = canonical_degree(Fl, static_cast<int>(Fl.p) - 1 - r);
  FpMat G(P.size(), P.size());
  // <e_P, e_Q> = sum over v != 0 of e_P(v) e_Q(v); only P = Q contributes
  for (int i = 0; i < P.size(); ++i)
    for (uint32_t x = 1; x < Fl.p; ++x)
      G.at(i, i) = Fl.add(G.at(i, i), Fl.mul(Fl.pow(x, n1), Fl.pow(x, n2)));
  return G;
}

ModulePtr build_char_module(const FieldData& F, const SplitPrime& sp, QuadInt modulus, int r,
                            int s) {
  Fp Fl(static_cast<uint32_t>(sp.ell));
  FieldData Fc = F;
  auto act = [Fl, sp, Fc, modulus, r, s](const Mat2& g) {
    if (!Fc.divides(modulus, g.c))
      throw std::domain_error("char module: matrix is not upper triangular mod the modulus");
    FpMat m(1, 1);
    m.at(0, 0) = Fl.mul(Fl.pow(sp.tau1(g.d), r), Fl.pow(sp.tau2(g.d), s));
    return m;
  };
  std::ostringstream name;
  name << "char(" << r << "," << s << ")@" << quadint_to_string(modulus);
  return make_module(F, sp, 1, ReductionTag::Both, name.str(), {"v"}, act);
}

ModulePtr build_induced(std::shared_ptr<const CosetTable> T, ModulePtr V) {
  const FieldData F = T->F;
  Fp Fl = V->Fl;
  int nc = static_cast<int>(T->reps.size());
  int dv = V->dim;
  std::vector<std::string> labels;
  for (int i = 0; i < nc; ++i)
    for (const auto& l : V->basis_labels) labels.push_back("c" + std::to_string(i) + ":" + l);
  auto act = [T, V, F, Fl, nc, dv](const Mat2& M) {
    QuadInt det = F.det(M);
    if (det.is_zero()) throw std::domain_error("induced action: determinant is zero");
    bool trivial_level = T->H.trivial(F);
    if (!trivial_level && !F.is_unit(F.gcd(det, T->H.modulus)))
      throw std::domain_error(
          "induced action: determinant shares a factor with the level modulus");
    FpMat A(nc * dv, nc * dv);
    for (int i = 0; i < nc; ++i) {
      Mat2 Mi = F.mmul(M, T->reps[i]);
      int j = -1;
      Mat2 beta;
      if (trivial_level) {
        j = 0;
        beta = Mi;
      } else if (T->H.kind == CongruenceSubgroup::Kind::Gamma0) {
        j = T->index_of_column(Mi.a, Mi.c);
        if (j < 0) throw std::logic_error("induced action: coset lookup failed");
        beta = F.mmul(F.sl2_inverse(T->reps[j]), Mi);
        if (!F.divides(T->H.modulus, beta.c))
          throw std::logic_error("induced action: rewriting left the monoid");
      } else if (T->H.kind == CongruenceSubgroup::Kind::Gamma1) {
        // search the unit scaling that lands d(beta) = 1 mod the modulus
        for (const QuadInt& u : T->unit_residues) {
          int cand = T->index_of_column(F.mul(u, Mi.a), F.mul(u, Mi.c));
          if (cand < 0) continue;
          Mat2 b = F.mmul(F.sl2_inverse(T->reps[cand]), Mi);
          if (!F.divides(T->H.modulus, b.c)) continue;
          if (!F.congruent(b.d, {1, 0}, T->H.modulus)) continue;
          j = cand;
          beta = b;
          break;
        }
        if (j < 0) throw std::logic_error("induced action: no Gamma1-compatible rewriting");
      } else {
        if (!(det == QuadInt{1, 0}))
          throw std::domain_error("induced action: only the group acts for principal levels");
        j = T->index_of(Mi);
        if (j < 0) throw std::logic_error("induced action: coset lookup failed");
        beta = F.mmul(F.sl2_inverse(T->reps[j]), Mi);
      }
      const FpMat& av = V->act(beta);
      for (int p = 0; p < dv; ++p)
        for (int q = 0; q < dv; ++q) A.at(j * dv + p, i * dv + q) = av.at(p, q);
    }
    return A;
  };
  return make_module(F, V->sp, nc * dv, V->tag, "Ind[" + T->H.to_string() + "]" + V->name, labels,
                     act);
}

bool intertwines(const ModuleMap& m, const std::vector<Mat2>& tests) {
  Fp Fl = m.source->Fl;
  for (const Mat2& g : tests) {
    FpMat lhs = mat_mul(Fl, m.source->act(g), m.matrix);
    FpMat rhs = mat_mul(Fl, m.matrix, m.target->act(g));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

std::vector<FpMat> intertwiner_space(const ModulePtr& M1, const ModulePtr& M2,
                                     const std::vector<Mat2>& tests) {
  Fp Fl = M1->Fl;
  int n1 = M1->dim, n2 = M2->dim;
  FpMat EQ(static_cast<int>(tests.size()) * n1 * n2, n1 * n2);
  int row = 0;
  for (const Mat2& g : tests) {
    const FpMat& a1 = M1->act(g);
    const FpMat& a2 = M2->act(g);
    // act1(g) * A - A * act2(g) = 0, unknowns x_{k,j} = A[k][j]
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        for (int k = 0; k < n1; ++k)
          EQ.at(row, k * n2 + j) = Fl.add(EQ.at(row, k * n2 + j), a1.at(i, k));
        for (int k = 0; k < n2; ++k)
          EQ.at(row, i * n2 + k) = Fl.sub(EQ.at(row, i * n2 + k), a2.at(k, j));
        ++row;
      }
  }
  FpMat N = right_nullspace(Fl, EQ);
  std::vector<FpMat> out;
  for (int r = 0; r < N.rows; ++r) {
    FpMat A(n1, n2);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) A.at(i, j) = N.at(r, i * n2 + j);
    out.push_back(A);
  }
  return out;
}

WeightSpec WeightSpec::parse(const std::string& text) {
  WeightSpec w;
  if (text == "triv" || text.empty()) {
    w.kind = Kind::E;
    return w;
  }
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("bad weight spec '" + text + "'");
  std::string head = text.substr(0, colon);
  std::vector<int> nums;
  std::string tail = text.substr(colon + 1);
  std::istringstream is(tail);
  std::string piece;
  while (std::getline(is, piece, ',')) nums.push_back(std::stoi(piece));
  if (head == "E") {
    w.kind = Kind::E;
    if (nums.size() != 2 && nums.size() != 4) throw std::invalid_argument("weight E needs r,s[,a,b]");
  } else if (head == "I") {
    w.kind = Kind::I;
    if (nums.size() != 2) throw std::invalid_argument("weight I needs r,s");
  } else if (head == "W") {
    w.kind = Kind::W;
    if (nums.size() != 2) throw std::invalid_argument("weight W needs r,s");
  } else if (head == "char") {
    w.kind = Kind::Char;
    if (nums.size() != 2) throw std::invalid_argument("weight char needs r,s");
  } else {
    throw std::invalid_argument("bad weight spec '" + text + "'");
  }
  w.r = nums.size() > 0 ? nums[0] : 0;
  w.s = nums.size() > 1 ? nums[1] : 0;
  w.a = nums.size() > 2 ? nums[2] : 0;
  w.b = nums.size() > 3 ? nums[3] : 0;
  return w;
}

std::string WeightSpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::E:
      os << "E:" << r << ',' << s << ',' << a << ',' << b;
      break;
    case Kind::I:
      os << "I:" << r << ',' << s;
      break;
    case Kind::W:
      os << "W:" << r << ',' << s;
      break;
    case Kind::Char:
      os << "char:" << r << ',' << s;
      break;
  }
  return os.str();
}

ModulePtr weight_module(const FieldData& F, const SplitPrime& sp, const WeightSpec& w) {
  switch (w.kind) {
    case WeightSpec::Kind::E:
      return build_E_ab(F, sp, w.r, w.s, w.a, w.b);
    case WeightSpec::Kind::I:
      return build_I_rs(F, sp, w.r, w.s);
    case WeightSpec::Kind::W:
      return build_W(F, sp, w.r, w.s).W;
    case WeightSpec::Kind::Char:
      return build_char_module(F, sp, {sp.ell, 0}, w.r, w.s);
  }
  throw std::logic_error("weight_module: unreachable");
}

}  // namespace bianchi

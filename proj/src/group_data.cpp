#include "bianchi/group_data.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <sstream>

#include "bianchi/fp.hpp"
#include "json.hpp"

namespace bianchi {

std::string builtin_presentation_json(int d);  // presentations_data.cpp

Mat2 GroupPresentation::eval(const Word& w) const {
  Mat2 m = FieldData::identity();
  for (int letter : w) {
    if (letter == 0 || std::abs(letter) > static_cast<int>(gens.size()))
      throw std::invalid_argument("eval: letter out of range");
    const Mat2& g = gens[std::abs(letter) - 1];
    m = F.mmul(m, letter > 0 ? g : F.sl2_inverse(g));
  }
  return m;
}

void GroupPresentation::verify() const {
  for (const Mat2& g : gens)
    if (!F.is_sl2(g)) throw std::runtime_error("presentation: generator not in SL2");
  for (size_t i = 0; i < relators.size(); ++i)
    if (!(eval(relators[i]) == FieldData::identity()))
      throw std::runtime_error("presentation: relator " + std::to_string(i) +
                               " does not evaluate to the identity");
  if (!minus_identity_word.empty() && !(eval(minus_identity_word) == FieldData::minus_identity()))
    throw std::runtime_error("presentation: minus-identity word is wrong");
  QuadInt w = F.omega();
  if (idx_s >= 0 && !(gens[idx_s] == Mat2{{0, 0}, {-1, 0}, {1, 0}, {0, 0}}))
    throw std::runtime_error("presentation: role 's' has unexpected matrix");
  if (idx_t >= 0 && !(gens[idx_t] == Mat2{{1, 0}, {1, 0}, {0, 0}, {1, 0}}))
    throw std::runtime_error("presentation: role 't' has unexpected matrix");
  if (idx_u >= 0 && !(gens[idx_u] == Mat2{{1, 0}, w, {0, 0}, {1, 0}}))
    throw std::runtime_error("presentation: role 'u' has unexpected matrix");
}

std::string GroupPresentation::hash() const {
  std::ostringstream os;
  os << F.d << ';';
  for (const Mat2& g : gens) os << mat2_to_string(g) << ';';
  for (const Word& r : relators) {
    for (int x : r) os << x << ',';
    os << ';';
  }
  std::ostringstream hex;
  hex << std::hex << fnv1a(os.str());
  return hex.str();
}

GroupPresentation presentation_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  GroupPresentation P;
  P.F = FieldData::make(j.at("d").get<int>());
  for (const auto& g : j.at("generators")) {
    if (g.size() != 4) throw std::invalid_argument("presentation: generator needs 4 entries");
    Mat2 m{parse_quadint(g[0].get<std::string>()), parse_quadint(g[1].get<std::string>()),
           parse_quadint(g[2].get<std::string>()), parse_quadint(g[3].get<std::string>())};
    P.gens.push_back(m);
  }
  if (j.contains("names"))
    for (const auto& n : j.at("names")) P.gen_names.push_back(n.get<std::string>());
  else
    for (size_t i = 0; i < P.gens.size(); ++i) P.gen_names.push_back("g" + std::to_string(i + 1));
  for (const auto& r : j.at("relators")) P.relators.push_back(r.get<Word>());
  if (j.contains("minus_identity")) P.minus_identity_word = j.at("minus_identity").get<Word>();
  if (j.contains("roles")) {
    const auto& roles = j.at("roles");
    if (roles.contains("s")) P.idx_s = roles.at("s").get<int>() - 1;
    if (roles.contains("t")) P.idx_t = roles.at("t").get<int>() - 1;
    if (roles.contains("u")) P.idx_u = roles.at("u").get<int>() - 1;
  }
  P.verify();
  return P;
}

std::string presentation_to_json(const GroupPresentation& P) {
  nlohmann::json j;
  j["d"] = P.F.d;
  j["names"] = P.gen_names;
  nlohmann::json gens = nlohmann::json::array();
  for (const Mat2& g : P.gens)
    gens.push_back({quadint_to_string(g.a), quadint_to_string(g.b), quadint_to_string(g.c),
                    quadint_to_string(g.d)});
  j["generators"] = gens;
  j["relators"] = P.relators;
  j["minus_identity"] = P.minus_identity_word;
  nlohmann::json roles;
  if (P.idx_s >= 0) roles["s"] = P.idx_s + 1;
  if (P.idx_t >= 0) roles["t"] = P.idx_t + 1;
  if (P.idx_u >= 0) roles["u"] = P.idx_u + 1;
  j["roles"] = roles;
  return j.dump(2);
}

const GroupPresentation& builtin_presentation(const FieldData& F) {
  static std::mutex mu;
  static std::map<int, GroupPresentation> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(F.d);
  if (it == cache.end())
    it = cache.emplace(F.d, presentation_from_json(builtin_presentation_json(F.d))).first;
  return it->second;
}

namespace {

void append_inverse(Word& out, const Word& w) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
}

Word word_e12(const GroupPresentation& P, QuadInt z) {
  Word w;
  int t = P.idx_t + 1, u = P.idx_u + 1;
  if (std::llabs(z.x) + std::llabs(z.y) > 200000)
    throw std::runtime_error("word_decompose: translation part too large");
  for (long long i = 0; i < std::llabs(z.x); ++i) w.push_back(z.x > 0 ? t : -t);
  for (long long i = 0; i < std::llabs(z.y); ++i) w.push_back(z.y > 0 ? u : -u);
  return w;
}

// word for diag(unit, unit^-1), found among short central/unit words
Word word_unit_diag(const GroupPresentation& P, QuadInt unit) {
  const FieldData& F = P.F;
  Mat2 target{unit, {0, 0}, {0, 0}, F.divexact({1, 0}, unit)};
  std::vector<Word> candidates;
  int s = P.idx_s + 1;
  int lidx = -1;
  for (size_t i = 0; i < P.gens.size(); ++i) {
    if (static_cast<int>(i) == P.idx_s || static_cast<int>(i) == P.idx_t ||
        static_cast<int>(i) == P.idx_u)
      continue;
    lidx = static_cast<int>(i) + 1;
  }
  int max_pow = static_cast<int>(F.units.size());
  for (int k = 0; k <= max_pow; ++k) {
    Word base;
    for (int i = 0; i < k; ++i) base.push_back(lidx);
    if (lidx < 0 && k > 0) break;
    candidates.push_back(base);
    Word with_minus = base;
    with_minus.push_back(s);
    with_minus.push_back(s);
    candidates.push_back(with_minus);
    Word inv_base;
    for (int i = 0; i < k; ++i) inv_base.push_back(-lidx);
    if (k > 0) {
      candidates.push_back(inv_base);
      Word wm = inv_base;
      wm.push_back(s);
      wm.push_back(s);
      candidates.push_back(wm);
    }
  }
  for (const Word& w : candidates)
    if (P.eval(w) == target) return w;
  throw std::runtime_error("word_decompose: unit diagonal not expressible");
}

}  // namespace

Word word_decompose(const GroupPresentation& P, const Mat2& m) {
  const FieldData& F = P.F;
  if (!P.euclidean_words_available())
    throw std::runtime_error("word_decompose: presentation lacks elementary generator roles");
  if (!FieldData::supported(F.d))
    throw std::runtime_error("word_decompose: the ring is not norm-Euclidean");
  if (!F.is_sl2(m)) throw std::invalid_argument("word_decompose: determinant is not 1");
  int s = P.idx_s + 1;
  Mat2 M = m;
  Word applied;  // letters multiplied on the right of M, in order
  int guard = 0;
  while (!M.c.is_zero()) {
    if (++guard > 10000) throw std::runtime_error("word_decompose: reduction did not terminate");
    QuadInt q, r;
    F.divmod(M.d, M.c, q, r);
    if (!q.is_zero()) {
      Word e = word_e12(P, F.neg(q));
      for (int letter : e) applied.push_back(letter);
      M.b = F.sub(M.b, F.mul(M.a, q));
      M.d = r;
    }
    // right-multiply by S: columns (swap with sign)
    Mat2 next{M.b, F.neg(M.a), M.d, F.neg(M.c)};
    M = next;
    applied.push_back(s);
  }
  // M = [[u, b], [0, u^-1]]
  QuadInt unit = M.a;
  if (!F.is_unit(unit)) throw std::logic_error("word_decompose: expected unit on diagonal");
  QuadInt x = F.divexact(M.b, unit);
  Word w = word_unit_diag(P, unit);
  Word e = word_e12(P, x);
  w.insert(w.end(), e.begin(), e.end());
  append_inverse(w, applied);
  if (!(P.eval(w) == m)) throw std::logic_error("word_decompose: verification failed");
  return w;
}

std::string CongruenceSubgroup::to_string() const {
  switch (kind) {
    case Kind::Gamma0:
      return "G0:" + quadint_to_string(modulus);
    case Kind::Gamma1:
      return "G1:" + quadint_to_string(modulus);
    case Kind::Principal:
      return "P:" + quadint_to_string(modulus);
  }
  return "?";
}

CongruenceSubgroup CongruenceSubgroup::parse(const std::string& level) {
  CongruenceSubgroup H;
  if (level == "1" || level.empty()) {
    H.kind = Kind::Gamma0;
    H.modulus = {1, 0};
    return H;
  }
  auto colon = level.find(':');
  if (colon == std::string::npos) {
    H.kind = Kind::Gamma0;
    H.modulus = parse_quadint(level);
    return H;
  }
  std::string head = level.substr(0, colon);
  std::string tail = level.substr(colon + 1);
  if (head == "G0")
    H.kind = Kind::Gamma0;
  else if (head == "G1")
    H.kind = Kind::Gamma1;
  else if (head == "P")
    H.kind = Kind::Principal;
  else
    throw std::invalid_argument("bad level spec '" + level + "'");
  H.modulus = parse_quadint(tail);
  return H;
}

bool subgroup_membership(const FieldData& F, const Mat2& m, const CongruenceSubgroup& H) {
  if (!F.is_sl2(m)) return false;
  QuadInt one{1, 0};
  if (!F.is_unit(H.base_level)) {
    if (!F.divides(H.base_level, m.c) || !F.congruent(m.d, one, H.base_level)) return false;
  }
  switch (H.kind) {
    case CongruenceSubgroup::Kind::Gamma0:
      return F.divides(H.modulus, m.c);
    case CongruenceSubgroup::Kind::Gamma1:
      return F.divides(H.modulus, m.c) && F.congruent(m.d, one, H.modulus);
    case CongruenceSubgroup::Kind::Principal:
      return F.divides(H.modulus, m.c) && F.divides(H.modulus, m.b) &&
             F.congruent(m.a, one, H.modulus) && F.congruent(m.d, one, H.modulus);
  }
  return false;
}

std::array<long long, 8> CosetTable::key_of_column(QuadInt a, QuadInt c) const {
  a = R.reduce(a);
  c = R.reduce(c);
  if (H.kind == CongruenceSubgroup::Kind::Gamma1) return {a.x, a.y, c.x, c.y, 0, 0, 0, 0};
  // Gamma0: minimize over unit scalings of the residue ring
  std::array<long long, 8> best{};
  bool have = false;
  for (const QuadInt& u : unit_residues) {
    QuadInt ua = R.reduce(F.mul(u, a));
    QuadInt uc = R.reduce(F.mul(u, c));
    std::array<long long, 8> key{ua.x, ua.y, uc.x, uc.y, 0, 0, 0, 0};
    if (!have || key < best) {
      have = true;
      best = key;
    }
  }
  return best;
}

std::array<long long, 8> CosetTable::key_of(const Mat2& g) const {
  if (H.kind == CongruenceSubgroup::Kind::Principal) {
    QuadInt a = R.reduce(g.a), b = R.reduce(g.b), c = R.reduce(g.c), d = R.reduce(g.d);
    return {a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y};
  }
  return key_of_column(g.a, g.c);
}

int CosetTable::index_of(const Mat2& g) const {
  auto it = index_.find(key_of(g));
  return it == index_.end() ? -1 : it->second;
}

int CosetTable::index_of_column(const QuadInt& a, const QuadInt& c) const {
  auto it = index_.find(key_of_column(a, c));
  return it == index_.end() ? -1 : it->second;
}

std::vector<Mat2> CosetTable::schreier_generators() const {
  std::vector<Mat2> out;
  for (const auto& row : gen_action)
    for (const Arrow& ar : row) {
      if (ar.h == FieldData::identity()) continue;
      if (std::find(out.begin(), out.end(), ar.h) == out.end()) out.push_back(ar.h);
    }
  return out;
}

CosetTable coset_table(const GroupPresentation& P, const CongruenceSubgroup& H,
                       long long max_index) {
  const FieldData& F = P.F;
  if (!F.is_unit(H.base_level))
    throw std::invalid_argument("coset_table: composite base levels are not supported");
  CosetTable T;
  T.F = F;
  T.H = H;
  if (H.trivial(F)) {
    T.R = ResidueCtx(F, {1, 0});
    T.reps = {FieldData::identity()};
    T.gen_action.assign(P.gens.size(), {CosetTable::Arrow{0, FieldData::identity()}});
    // single-coset table: the arrow cocycle is the generator itself
    for (size_t gi = 0; gi < P.gens.size(); ++gi) T.gen_action[gi][0].h = P.gens[gi];
    T.index_[T.key_of(FieldData::identity())] = 0;
    return T;
  }
  T.R = ResidueCtx(F, H.modulus);
  for (const QuadInt& r : T.R.all_residues())
    if (F.is_unit(F.gcd(r, H.modulus))) T.unit_residues.push_back(r);

  std::vector<Mat2> step;
  for (const Mat2& g : P.gens) {
    step.push_back(g);
    step.push_back(F.sl2_inverse(g));
  }
  T.reps.push_back(FieldData::identity());
  T.index_[T.key_of(FieldData::identity())] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (const Mat2& g : step) {
      Mat2 m = F.mmul(g, T.reps[i]);
      auto key = T.key_of(m);
      if (T.index_.find(key) != T.index_.end()) continue;
      if (static_cast<long long>(T.reps.size()) >= max_index)
        throw std::runtime_error("coset_table: index bound exceeded");
      T.index_[key] = static_cast<int>(T.reps.size());
      T.reps.push_back(m);
      queue.push_back(static_cast<int>(T.reps.size()) - 1);
    }
  }
  T.gen_action.assign(P.gens.size(), {});
  for (size_t gi = 0; gi < P.gens.size(); ++gi) {
    T.gen_action[gi].resize(T.reps.size());
    std::vector<bool> hit(T.reps.size(), false);
    for (size_t i = 0; i < T.reps.size(); ++i) {
      Mat2 m = F.mmul(P.gens[gi], T.reps[i]);
      int j = T.index_of(m);
      if (j < 0) throw std::logic_error("coset_table: action leaves the table");
      Mat2 h = F.mmul(F.sl2_inverse(T.reps[j]), m);
      if (!subgroup_membership(F, h, H))
        throw std::logic_error("coset_table: cocycle not in the subgroup");
      if (hit[j]) throw std::logic_error("coset_table: generator action not a bijection");
      hit[j] = true;
      T.gen_action[gi][i] = {j, h};
    }
  }
  return T;
}

namespace {

nlohmann::json mat2_json(const Mat2& m) {
  return {quadint_to_string(m.a), quadint_to_string(m.b), quadint_to_string(m.c),
          quadint_to_string(m.d)};
}

Mat2 mat2_unjson(const nlohmann::json& j) {
  return {parse_quadint(j[0].get<std::string>()), parse_quadint(j[1].get<std::string>()),
          parse_quadint(j[2].get<std::string>()), parse_quadint(j[3].get<std::string>())};
}

}  // namespace

std::string coset_table_to_json(const CosetTable& T) {
  nlohmann::json j;
  j["d"] = T.F.d;
  j["kind"] = static_cast<int>(T.H.kind);
  j["modulus"] = quadint_to_string(T.H.modulus);
  nlohmann::json reps = nlohmann::json::array();
  for (const Mat2& r : T.reps) reps.push_back(mat2_json(r));
  j["reps"] = reps;
  nlohmann::json actions = nlohmann::json::array();
  for (const auto& row : T.gen_action) {
    nlohmann::json arow = nlohmann::json::array();
    for (const auto& ar : row) arow.push_back({{"target", ar.target}, {"h", mat2_json(ar.h)}});
    actions.push_back(arow);
  }
  j["gen_action"] = actions;
  return j.dump();
}

CosetTable coset_table_from_json(const GroupPresentation& P, const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  const FieldData& F = P.F;
  CosetTable T;
  T.F = F;
  T.H.kind = static_cast<CongruenceSubgroup::Kind>(j.at("kind").get<int>());
  T.H.modulus = parse_quadint(j.at("modulus").get<std::string>());
  if (j.at("d").get<int>() != F.d)
    throw std::invalid_argument("coset_table_from_json: field mismatch");
  T.R = ResidueCtx(F, T.H.trivial(F) ? QuadInt{1, 0} : T.H.modulus);
  if (!T.H.trivial(F))
    for (const QuadInt& r : T.R.all_residues())
      if (F.is_unit(F.gcd(r, T.H.modulus))) T.unit_residues.push_back(r);
  for (const auto& r : j.at("reps")) T.reps.push_back(mat2_unjson(r));
  for (size_t i = 0; i < T.reps.size(); ++i) {
    auto key = T.key_of(T.reps[i]);
    if (T.index_.count(key)) throw std::runtime_error("coset_table_from_json: duplicate coset");
    T.index_[key] = static_cast<int>(i);
  }
  const auto& actions = j.at("gen_action");
  if (actions.size() != P.gens.size())
    throw std::runtime_error("coset_table_from_json: generator count mismatch");
  T.gen_action.resize(P.gens.size());
  for (size_t gi = 0; gi < P.gens.size(); ++gi) {
    for (const auto& ar : actions[gi]) {
      CosetTable::Arrow a{ar.at("target").get<int>(), mat2_unjson(ar.at("h"))};
      T.gen_action[gi].push_back(a);
    }
    if (T.gen_action[gi].size() != T.reps.size())
      throw std::runtime_error("coset_table_from_json: arrow count mismatch");
    // soundness: gen * rep_i = rep_target * h with h in the subgroup
    for (size_t i = 0; i < T.reps.size(); ++i) {
      const auto& a = T.gen_action[gi][i];
      if (!subgroup_membership(F, a.h, T.H) ||
          !(F.mmul(P.gens[gi], T.reps[i]) == F.mmul(T.reps[a.target], a.h)))
        throw std::runtime_error("coset_table_from_json: corrupt table data");
    }
  }
  return T;
}

std::vector<long long> smith_normal_form(std::vector<std::vector<long long>> M) {
  size_t rows = M.size();
  size_t cols = rows ? M[0].size() : 0;
  std::vector<long long> diag;
  size_t r0 = 0, c0 = 0;
  while (r0 < rows && c0 < cols) {
    // find the pivot of least nonzero absolute value
    size_t pi = r0, pj = c0;
    long long best = 0;
    for (size_t i = r0; i < rows; ++i)
      for (size_t j = c0; j < cols; ++j)
        if (M[i][j] != 0 && (best == 0 || std::llabs(M[i][j]) < best)) {
          best = std::llabs(M[i][j]);
          pi = i;
          pj = j;
        }
    if (best == 0) break;
    std::swap(M[r0], M[pi]);
    for (size_t i = 0; i < rows; ++i) std::swap(M[i][c0], M[i][pj]);
    bool clean = true;
    for (size_t i = r0 + 1; i < rows; ++i) {
      long long q = M[i][c0] / M[r0][c0];
      if (q)
        for (size_t j = c0; j < cols; ++j) M[i][j] -= q * M[r0][j];
      if (M[i][c0]) clean = false;
    }
    for (size_t j = c0 + 1; j < cols; ++j) {
      long long q = M[r0][j] / M[r0][c0];
      if (q)
        for (size_t i = r0; i < rows; ++i) M[i][j] -= q * M[i][c0];
      if (M[r0][j]) clean = false;
    }
    if (!clean) continue;  // keep reducing at the same corner
    diag.push_back(std::llabs(M[r0][c0]));
    ++r0;
    ++c0;
  }
  // enforce divisibility d1 | d2 | ...
  for (size_t i = 0; i + 1 < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j) {
      long long a = diag[i], b = diag[j];
      long long g = std::__gcd(a, b);
      if (g == 0) continue;
      long long l = a / g * b;
      diag[i] = g;
      diag[j] = l;
    }
  std::sort(diag.begin(), diag.end());
  return diag;
}

Abelianization abelianization(const GroupPresentation& P) {
  std::vector<std::vector<long long>> M;
  for (const Word& r : P.relators) {
    std::vector<long long> row(P.gens.size(), 0);
    for (int letter : r) row[std::abs(letter) - 1] += letter > 0 ? 1 : -1;
    M.push_back(row);
  }
  std::vector<long long> diag = smith_normal_form(M);
  Abelianization ab;
  int nonzero = 0;
  for (long long v : diag)
    if (v != 0) {
      ++nonzero;
      if (v > 1) ab.torsion.push_back(v);
    }
  ab.free_rank = static_cast<int>(P.gens.size()) - nonzero;
  return ab;
}

int hom_rank_mod_ell(const Abelianization& ab, long long ell) {
  int r = ab.free_rank;
  for (long long v : ab.torsion)
    if (v % ell == 0) ++r;
  return r;
}

}  // namespace bianchi

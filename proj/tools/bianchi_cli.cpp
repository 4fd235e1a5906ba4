#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bianchi/cache.hpp"
#include "bianchi/suites.hpp"
#include "json.hpp"

using namespace bianchi;
using nlohmann::json;

namespace {

struct CommonOpts {
  int d = 2;
  int ell = 11;
  std::string level = "1";
  std::string weight = "triv";
  long long primes_up_to = 41;
  int max_ext = 4;
  std::string cache_dir;
  unsigned long long seed = 12345;
  bool table = false;
  int threads = 1;
  std::string presentation_file;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--d", o.d, "squarefree d of the field Q(sqrt(-d))");
  cmd->add_option("--ell", o.ell, "split odd prime ell");
  cmd->add_option("--level", o.level, "level: 1, G0:<elt>, G1:<elt>, P:<elt>");
  cmd->add_option("--weight", o.weight, "weight: E:r,s,a,b | I:r,s | W:r,s | char:r,s | triv");
  cmd->add_option("--primes-up-to", o.primes_up_to, "norm bound for Hecke primes");
  cmd->add_option("--max-ext", o.max_ext, "largest extension degree for eigenvalues");
  cmd->add_option("--cache-dir", o.cache_dir, "directory for cached computations");
  cmd->add_option("--seed", o.seed, "seed for randomized checks");
  cmd->add_flag("--table", o.table, "aligned text output instead of JSON");
  cmd->add_flag("--json", "JSON output (default)");
  cmd->add_option("--threads", o.threads, "worker threads for independent computations");
  cmd->add_option("--presentation-file", o.presentation_file,
                  "JSON presentation for fields without a built-in one");
}

Session make_session(const CommonOpts& o) {
  FieldData F = FieldData::make(o.d);
  SplitPrime sp = split_prime(F, o.ell);
  std::shared_ptr<const GroupPresentation> P;
  if (!o.presentation_file.empty()) {
    std::ifstream in(o.presentation_file);
    if (!in) throw std::invalid_argument("cannot open presentation file " + o.presentation_file);
    std::stringstream buf;
    buf << in.rdbuf();
    P = std::make_shared<GroupPresentation>(presentation_from_json(buf.str()));
    if (P->F.d != o.d) throw std::invalid_argument("presentation file is for a different field");
  } else {
    P = std::make_shared<GroupPresentation>(builtin_presentation(F));
  }
  return {F, sp, P};
}

json eigenvalue_json(const EigenValue& v) {
  if (v.deg == 1) return v.coeffs.empty() ? 0u : v.coeffs[0];
  json j;
  j["ext_degree"] = v.deg;
  j["coeffs"] = v.coeffs;
  return j;
}

json systems_json(const std::vector<EigenSystem>& systems) {
  json out = json::array();
  for (const auto& s : systems) {
    json v;
    for (const auto& [label, val] : s.values) v[label] = eigenvalue_json(val);
    out.push_back({{"values", v}, {"ext_degree", s.ext_degree}, {"multiplicity", s.multiplicity}});
  }
  return out;
}

void print_systems_table(std::ostream& os, const std::vector<std::string>& labels,
                         const std::vector<EigenSystem>& systems) {
  os << std::left << std::setw(8) << "alpha";
  for (const auto& l : labels) os << std::setw(8) << l;
  os << "\n";
  for (size_t k = 0; k < systems.size(); ++k) {
    os << std::setw(8) << ("Phi_" + std::to_string(k));
    for (const auto& l : labels) {
      const EigenValue* v = systems[k].value_of(l);
      os << std::setw(8) << (v ? v->to_string() : "-");
    }
    os << "  (mult " << systems[k].multiplicity << ", deg " << systems[k].ext_degree << ")\n";
  }
}

std::string h1_cache_key(const Session& S, const CommonOpts& o) {
  return "h1|v1|d=" + std::to_string(o.d) + "|ell=" + std::to_string(o.ell) +
         "|level=" + o.level + "|weight=" + o.weight + "|pres=" + S.P->hash();
}

json compute_h1_json(const Session& S, const CommonOpts& o) {
  CongruenceSubgroup level = CongruenceSubgroup::parse(o.level);
  WeightSpec w = WeightSpec::parse(o.weight);
  DiskCache cache{o.cache_dir, false};
  CohomologySpace H = build_h1_space(S, level, w, &cache);
  json j;
  j["field"] = o.d;
  j["ell"] = o.ell;
  j["level"] = o.level;
  j["weight"] = w.to_string();
  j["h1_dim"] = H.dim();
  j["z1_dim"] = H.z1_dim;
  j["b1_dim"] = H.b1_dim;
  j["killed_by_center"] = H.killed_by_center;
  j["module_dim"] = H.M->dim;
  j["presentation_hash"] = S.P->hash();
  json basis_rows = json::array();
  std::ostringstream basis;
  for (const auto& b : H.basis) {
    basis_rows.push_back(b);
    for (uint32_t x : b) basis << x << ',';
  }
  j["basis"] = basis_rows;
  std::ostringstream hex;
  hex << std::hex << fnv1a(basis.str());
  j["basis_hash"] = hex.str();
  return j;
}

int cmd_h1(const CommonOpts& o) {
  Session S = make_session(o);
  DiskCache cache{o.cache_dir, false};
  std::string key = h1_cache_key(S, o);
  std::string payload;
  if (auto hit = cache.load(key)) {
    payload = *hit;
  } else {
    payload = compute_h1_json(S, o).dump(2);
    cache.store(key, payload);
  }
  if (o.table) {
    json j = json::parse(payload);
    std::cout << "H1(d=" << o.d << ", ell=" << o.ell << ", level " << o.level << ", weight "
              << j["weight"].get<std::string>() << "): dim " << j["h1_dim"] << "\n";
  } else {
    std::cout << payload << "\n";
  }
  return 0;
}

int cmd_eigensystems(const CommonOpts& o) {
  Session S = make_session(o);
  if (!S.P->euclidean_words_available() || !FieldData::supported(o.d))
    throw std::invalid_argument(
        "Hecke computations need the word problem, which requires a Euclidean field");
  CongruenceSubgroup level = CongruenceSubgroup::parse(o.level);
  if (level.kind == CongruenceSubgroup::Kind::Principal && !level.trivial(S.F))
    throw std::invalid_argument("Hecke operators at principal levels are not supported");
  WeightSpec w = WeightSpec::parse(o.weight);
  DiskCache cache{o.cache_dir, false};
  CohomologySpace H = build_h1_space(S, level, w, &cache);
  std::vector<QuadInt> primes = hecke_prime_list(S, level, o.primes_up_to);
  if (primes.empty())
    throw std::invalid_argument("no usable Hecke primes under the norm bound; raise --primes-up-to");
  std::vector<HeckeOperator> ops(primes.size());
  parallel_for(static_cast<int>(primes.size()), o.threads, [&](int i) {
    CongruenceSubgroup trivial{CongruenceSubgroup::Kind::Gamma0, {1, 0}, {1, 0}};
    ops[i] = hecke_matrix(H, primes[i], hecke_reps(*S.P, primes[i], trivial));
  });
  EigenReport eig = eigensystems(ops, o.max_ext);

  json j;
  j["field"] = o.d;
  j["ell"] = o.ell;
  j["level"] = o.level;
  j["weight"] = w.to_string();
  j["h1_dim"] = H.dim();
  json jops = json::array();
  std::vector<std::string> labels;
  for (const auto& op : ops) {
    std::ostringstream hex;
    hex << std::hex << fnv1a(fpmat_to_string(op.matrix));
    jops.push_back({{"alpha", op.label}, {"matrix_hash", hex.str()}});
    labels.push_back(op.label);
  }
  j["operators"] = jops;
  j["eigensystems"] = systems_json(eig.systems);
  j["unresolved_dim"] = eig.unresolved_dim;
  j["matches"] = json::array();
  j["primes_up_to"] = o.primes_up_to;
  j["max_ext"] = o.max_ext;
  j["presentation_hash"] = S.P->hash();
  if (o.table) {
    std::cout << "eigensystems of H1(d=" << o.d << ", ell=" << o.ell << ", level " << o.level
              << ", weight " << w.to_string() << "), dim " << H.dim() << "\n";
    print_systems_table(std::cout, labels, eig.systems);
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_weight_reduction(const CommonOpts& o, const std::string& target_mode) {
  CongruenceSubgroup base = CongruenceSubgroup::parse(o.level);
  std::vector<WeightSpec> weights;
  if (o.weight != "triv" && o.weight != "all" && !o.weight.empty())
    weights.push_back(WeightSpec::parse(o.weight));
  WeightReductionReport R = weight_reduction_check(o.d, o.ell, base, weights, o.primes_up_to,
                                                   o.max_ext, o.threads, target_mode);
  json j;
  j["field"] = R.d;
  j["ell"] = R.ell;
  j["level"] = R.base_level;
  j["target_mode"] = R.target_mode;
  j["primes"] = R.primes;
  json matches = json::array();
  for (const auto& m : R.matches) {
    json e;
    e["source"] = m.weight.to_string() + "#" + std::to_string(m.source_index);
    e["matched"] = m.matched;
    if (m.matched) {
      e["target"] = "I:" + std::to_string(m.weight.r) + "," + std::to_string(m.weight.s) + "#" +
                    std::to_string(m.target_index);
      e["twist"] = {m.weight.a, m.weight.b};
    }
    json v;
    for (const auto& [label, val] : m.source.values) v[label] = eigenvalue_json(val);
    e["values"] = v;
    matches.push_back(e);
  }
  j["matches"] = matches;
  j["h1_dims"] = R.source_dims;
  j["all_matched"] = R.all_matched;
  j["unresolved_dim"] = R.unresolved;
  if (o.table) {
    std::cout << "weight reduction d=" << R.d << " ell=" << R.ell << " level " << R.base_level
              << " mode " << R.target_mode << "\n";
    int ok = 0;
    for (const auto& m : R.matches) {
      std::cout << (m.matched ? "  match     " : "  UNMATCHED ") << m.weight.to_string() << " #"
                << m.source_index;
      if (m.matched) std::cout << " -> target #" << m.target_index;
      std::cout << "\n";
      if (m.matched) ++ok;
    }
    std::cout << ok << "/" << R.matches.size() << " matched\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return (target_mode == "ell" && !R.all_matched) ? 1 : 0;
}

int run_suite_named(const std::string& name, const CommonOpts& o) {
  SuiteReport rep;
  if (name == "exactness") rep = suite_exactness();
  else if (name == "pairings") rep = suite_pairings();
  else if (name == "invariants") rep = suite_invariants();
  else if (name == "shapiro") rep = suite_shapiro();
  else if (name == "twist") rep = suite_twist(o.seed);
  else if (name == "paper-example") rep = suite_paper_example(o.threads);
  else if (name == "cache") {
    if (o.cache_dir.empty()) throw std::invalid_argument("verify cache needs --cache-dir");
    Session S = make_session(o);
    std::string key = h1_cache_key(S, o);
    std::string fresh = compute_h1_json(S, o).dump(2);
    DiskCache cache{o.cache_dir, true};
    cache.store(key, fresh);
    auto loaded = cache.load(key);
    bool ok = loaded.has_value() && *loaded == fresh;
    std::string fresh2 = compute_h1_json(S, o).dump(2);
    rep.results.push_back({"cache round trip is byte identical", ok, ""});
    rep.results.push_back({"recomputation is deterministic", fresh == fresh2, ""});
  } else {
    throw std::invalid_argument(
        "unknown suite '" + name +
        "' (expected exactness|pairings|invariants|shapiro|twist|paper-example|cache)");
  }
  for (const auto& r : rep.results)
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
              << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mod-ell cohomology of Bianchi groups with Hecke action"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string suite_name = "exactness";
  std::string target_mode = "ell";

  CLI::App* h1cmd = app.add_subcommand("h1", "dimension and basis data of a cohomology space");
  add_common(h1cmd, o);
  CLI::App* eig = app.add_subcommand("eigensystems", "Hecke eigenvalue systems of a space");
  add_common(eig, o);
  CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite_name,
                  "exactness|pairings|invariants|shapiro|twist|paper-example|cache");
  add_common(ver, o);
  CLI::App* wr =
      app.add_subcommand("weight-reduction", "match nontrivial weights into the graded modules");
  add_common(wr, o);
  wr->add_option("--target-mode", target_mode, "ell (default) | lambda | lambdabar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? 0 : 2;
  }

  try {
    if (h1cmd->parsed()) return cmd_h1(o);
    if (eig->parsed()) return cmd_eigensystems(o);
    if (ver->parsed()) return run_suite_named(suite_name, o);
    if (wr->parsed()) return cmd_weight_reduction(o, target_mode);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

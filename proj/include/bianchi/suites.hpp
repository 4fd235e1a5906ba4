#pragma once

#include "bianchi/cache.hpp"
#include "bianchi/hecke.hpp"

namespace bianchi {

struct Session {
  FieldData F;
  SplitPrime sp;
  std::shared_ptr<const GroupPresentation> P;
  static Session make(int d, int ell);
};

// H^1 of SL2(O) with the weight module, induced through the level subgroup
// when the level is nontrivial.  A cache, when given, stores coset tables
// keyed by (d, subgroup kind, modulus).
CohomologySpace build_h1_space(const Session& S, const CongruenceSubgroup& level,
                               const WeightSpec& w, const DiskCache* cache = nullptr);

std::vector<QuadInt> hecke_prime_list(const Session& S, const CongruenceSubgroup& level,
                                      long long norm_bound);
std::vector<HeckeOperator> build_operators(const Session& S, const CohomologySpace& H,
                                           const std::vector<QuadInt>& primes);

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};
struct SuiteReport {
  std::vector<SuiteResult> results;
  bool all_pass() const;
};

SuiteReport suite_exactness();
SuiteReport suite_pairings();
SuiteReport suite_invariants();
SuiteReport suite_shapiro();
SuiteReport suite_twist(uint64_t seed);
SuiteReport suite_paper_example(int threads);

struct WeightReductionMatch {
  WeightSpec weight;
  int source_index = 0;  // which eigensystem of the source space
  EigenSystem source;
  bool matched = false;
  int target_index = -1;  // index into the target system list of the same (r,s)
};
struct WeightReductionReport {
  int d = 0, ell = 0;
  std::string base_level;
  std::string target_mode;  // "ell", "lambda", "lambdabar"
  std::vector<std::string> primes;
  std::vector<WeightReductionMatch> matches;
  std::map<std::pair<int, int>, std::vector<EigenSystem>> target_systems;
  std::map<std::string, int> source_dims;
  int unresolved = 0;
  bool all_matched = true;
};

// Every eigensystem of H^1 at weight E^{a,b}_{r,s} must occur, up to the
// (a,b) twist, among the eigensystems of H^1 with coefficients I_{r,s}
// (mode "ell").  Modes "lambda"/"lambdabar" match against the one-sided
// graded modules instead and assert nothing.
WeightReductionReport weight_reduction_check(int d, int ell, const CongruenceSubgroup& base,
                                             const std::vector<WeightSpec>& weights,
                                             long long prime_bound, int max_ext, int threads,
                                             const std::string& target_mode = "ell");
// all weights with r+s even
std::vector<WeightSpec> full_weight_sweep(int ell);

void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace bianchi

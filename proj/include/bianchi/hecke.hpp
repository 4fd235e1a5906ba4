#pragma once

#include "bianchi/cohomology.hpp"
#include "bianchi/fq.hpp"

namespace bianchi {

struct HeckeOperator {
  QuadInt alpha;
  std::string label;
  uint32_t ell = 0;
  std::vector<Mat2> reps;
  FpMat matrix;  // on the basis of the cohomology space, acting on row vectors
};

// Left coset representatives of Gamma * diag(alpha,1) * Gamma.  The family is
// verified: members of the double coset, pairwise inequivalent, N(alpha)+1 of
// them, closed under the group action with unique targets, and a single
// orbit.  For nontrivial levels a coset table supplies Schreier generators.
std::vector<Mat2> hecke_reps(const GroupPresentation& P, const QuadInt& alpha,
                             const CongruenceSubgroup& level, const CosetTable* table = nullptr);

HeckeOperator hecke_matrix(const CohomologySpace& H, const QuadInt& alpha,
                           const std::vector<Mat2>& reps);

struct EigenValue {
  int deg = 1;
  std::vector<uint32_t> coeffs;  // minimal-field coordinates, constant first
  bool operator==(const EigenValue&) const = default;
  bool is_rational() const { return deg == 1; }
  std::string to_string() const;
};

struct EigenSystem {
  std::vector<std::pair<std::string, EigenValue>> values;  // prime label -> eigenvalue
  int ext_degree = 1;
  int multiplicity = 1;

  const EigenValue* value_of(const std::string& label) const;
};

struct EigenReport {
  std::vector<EigenSystem> systems;
  int unresolved_dim = 0;  // charpoly degree not accounted for within the bound
};

// Simultaneous eigensystems of commuting operators, over F_{ell^k} for
// k <= max_ext_degree.  Throws if the operators do not commute.
EigenReport eigensystems(const std::vector<HeckeOperator>& ops, int max_ext_degree);

EigenSystem twist_eigensystem(const EigenSystem& s, int a, int b,
                              const SplitPrime& sp);
// True when the systems agree at every shared prime label; requires at least
// min_support shared labels.
bool systems_equal_on_support(const EigenSystem& s1, const EigenSystem& s2, int min_support = 1);

struct TwistMatch {
  int candidate_index = -1;
  int a = 0, b = 0;
};
std::vector<TwistMatch> match_up_to_twist(const EigenSystem& phi,
                                          const std::vector<EigenSystem>& candidates,
                                          const SplitPrime& sp, int min_support = 9);

}  // namespace bianchi

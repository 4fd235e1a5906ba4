#pragma once

#include <memory>

#include "bianchi/fp.hpp"
#include "bianchi/group_data.hpp"
#include "bianchi/rep_modules.hpp"

namespace bianchi {

// Cocycles are stored flattened: one module row vector per generator,
// concatenated in generator order.
struct CohomologySpace {
  int degree = 1;
  ModulePtr M;
  std::shared_ptr<const GroupPresentation> P;  // set for degree 1
  std::vector<Mat2> gens;
  std::vector<FpVec> basis;  // cocycles (degree 1) or invariant vectors (degree 0)
  QuotientSolver proj;       // flattened cocycle -> coordinates in `basis`
  bool killed_by_center = false;
  int z1_dim = 0, b1_dim = 0;

  int dim() const { return static_cast<int>(basis.size()); }
  const Fp& field() const { return M->Fl; }
};

CohomologySpace h0(ModulePtr M, const std::vector<Mat2>& gens);
// Basis of the cocycle space Z^1, rows flattened by generator.
FpMat cocycle_space(const GroupPresentation& P, const ModulePtr& M);
CohomologySpace h1(std::shared_ptr<const GroupPresentation> P, ModulePtr M);

// Value of the extended cocycle at an arbitrary group element, via the word
// problem in the ambient presentation.
FpVec cocycle_eval(const GroupPresentation& P, const ModulePtr& M, const FpVec& cocycle,
                   const Mat2& m);
// Same, but with the word already known.
FpVec cocycle_eval_word(const GroupPresentation& P, const ModulePtr& M, const FpVec& cocycle,
                        const Word& w);
// Relator conditions for a flattened cocycle candidate.
bool is_cocycle(const GroupPresentation& P, const ModulePtr& M, const FpVec& c);
// Coboundary of a module vector with respect to the generator list.
FpVec coboundary(const std::vector<Mat2>& gens, const ModulePtr& M, const FpVec& v);

// For spaces with induced coefficients: value of the transported cocycle
// H^1(subgroup, V) at x, i.e. the identity-coset block of the evaluation.
FpVec shapiro_value(const CohomologySpace& H, const FpVec& cocycle, const Mat2& x, int block_dim);

}  // namespace bianchi

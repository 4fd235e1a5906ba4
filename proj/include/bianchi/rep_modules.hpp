#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "bianchi/fp.hpp"
#include "bianchi/group_data.hpp"
#include "bianchi/quad_arith.hpp"

namespace bianchi {

enum class ReductionTag { Lambda, LambdaBar, Both, None };

// Finite dimensional right module over F_ell for the matrix monoid: vectors
// are rows, act(g*h) = act(g)*act(h).
struct FpRepModule {
  Fp Fl;
  FieldData F;
  SplitPrime sp;
  int dim = 0;
  std::vector<std::string> basis_labels;
  ReductionTag tag = ReductionTag::None;
  std::string name;
  std::function<FpMat(const Mat2&)> act_fn;

  const FpMat& act(const Mat2& g) const;

 private:
  mutable std::map<Mat2, FpMat, Mat2Less> cache_;
  mutable std::mutex mu_;
};

using ModulePtr = std::shared_ptr<const FpRepModule>;

struct ModuleMap {
  ModulePtr source, target;
  FpMat matrix;  // source.dim x target.dim, applied as v -> v * matrix
};

ModulePtr trivial_module(const FieldData& F, const SplitPrime& sp);
ModulePtr build_E(const FieldData& F, const SplitPrime& sp, int r, bool bar);
ModulePtr twist_det(ModulePtr M, int a, bool bar);
ModulePtr tensor(ModulePtr M1, ModulePtr M2);
ModulePtr build_I(const FieldData& F, const SplitPrime& sp, int n, bool bar);
// E^{a,b}_{r,s}: det^a (x) Sym^r via lambda, tensored with det^b (x) Sym^s
// via lambda-bar.
ModulePtr build_E_ab(const FieldData& F, const SplitPrime& sp, int r, int s, int a, int b);
ModulePtr build_I_rs(const FieldData& F, const SplitPrime& sp, int r, int s);

ModuleMap map_alpha(const FieldData& F, const SplitPrime& sp, int r, bool bar);
ModuleMap map_beta(const FieldData& F, const SplitPrime& sp, int r, bool bar);

struct FourTermData {
  ModulePtr E, I, U, V;
  ModuleMap iota;      // E_{r,s} -> I_{r,s}
  ModuleMap pi;        // I_{r,s} -> U_{r,s}
  ModuleMap pi_prime;  // U_{r,s} -> V_{r,s}
};
FourTermData build_four_term(const FieldData& F, const SplitPrime& sp, int r, int s);

struct WData {
  ModulePtr W;
  ModuleMap inclusion;  // W -> U_{r,s}
};
WData build_W(const FieldData& F, const SplitPrime& sp, int r, int s);

FpMat pairing_E(const Fp& Fl, int r);
FpMat pairing_I(const Fp& Fl, int r);  // I_r x I_{l-1-r} in delta bases

// One-dimensional module of the monoid { c = 0 mod modulus }: a matrix acts
// by tau1(d)^r * tau2(d)^s.
ModulePtr build_char_module(const FieldData& F, const SplitPrime& sp, QuadInt modulus, int r,
                            int s);

// Functions on coset representatives with values in V, with the monoid action
// computed by rewriting alpha * rep_i = rep_j * beta.
ModulePtr build_induced(std::shared_ptr<const CosetTable> T, ModulePtr V);

bool intertwines(const ModuleMap& m, const std::vector<Mat2>& tests);
// Basis of the space of intertwiners source -> target for the given matrices.
std::vector<FpMat> intertwiner_space(const ModulePtr& M1, const ModulePtr& M2,
                                     const std::vector<Mat2>& tests);

struct WeightSpec {
  enum class Kind { E, I, W, Char };
  Kind kind = Kind::E;
  int r = 0, s = 0, a = 0, b = 0;

  static WeightSpec parse(const std::string& text);
  std::string to_string() const;
};
ModulePtr weight_module(const FieldData& F, const SplitPrime& sp, const WeightSpec& w);

}  // namespace bianchi

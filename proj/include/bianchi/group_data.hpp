#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bianchi/quad_arith.hpp"

namespace bianchi {

// Words are sequences of signed 1-based generator indices; -k means the
// inverse of generator k.
using Word = std::vector<int>;

struct GroupPresentation {
  FieldData F;
  std::vector<Mat2> gens;
  std::vector<std::string> gen_names;
  std::vector<Word> relators;
  Word minus_identity_word;
  // 0-based positions of [[0,-1],[1,0]], [[1,1],[0,1]], [[1,w],[0,1]]; -1 if
  // absent (then word_decompose is unavailable).
  int idx_s = -1, idx_t = -1, idx_u = -1;

  Mat2 eval(const Word& w) const;
  bool euclidean_words_available() const { return idx_s >= 0 && idx_t >= 0 && idx_u >= 0; }
  // Throws unless all relators evaluate to the identity, generators have
  // determinant one and the role generators match their expected matrices.
  void verify() const;
  std::string hash() const;
};

GroupPresentation presentation_from_json(const std::string& json_text);
std::string presentation_to_json(const GroupPresentation& P);
const GroupPresentation& builtin_presentation(const FieldData& F);

// Word in the presentation's generators evaluating to m exactly.
Word word_decompose(const GroupPresentation& P, const Mat2& m);

struct CongruenceSubgroup {
  enum class Kind { Gamma0, Gamma1, Principal };
  Kind kind = Kind::Gamma0;
  QuadInt modulus{1, 0};
  QuadInt base_level{1, 0};

  bool trivial(const FieldData& F) const { return F.is_unit(modulus); }
  std::string to_string() const;
  static CongruenceSubgroup parse(const std::string& level);
};

bool subgroup_membership(const FieldData& F, const Mat2& m, const CongruenceSubgroup& H);

struct CosetTable {
  FieldData F;
  CongruenceSubgroup H;
  ResidueCtx R;
  std::vector<Mat2> reps;  // left coset representatives g*H
  struct Arrow {
    int target = -1;
    Mat2 h;  // gen * rep_i = rep_target * h
  };
  std::vector<std::vector<Arrow>> gen_action;  // [generator][coset]
  std::vector<QuadInt> unit_residues;          // invertible residues mod modulus

  int index_of(const Mat2& g) const;  // coset of g*H, -1 if unknown
  // Coset containing a column (a, c) with content coprime to the modulus; for
  // Gamma1 the exact pair is matched, for Gamma0 the projective class.
  int index_of_column(const QuadInt& a, const QuadInt& c) const;
  std::vector<Mat2> schreier_generators() const;

 private:
  friend CosetTable coset_table(const GroupPresentation&, const CongruenceSubgroup&, long long);
  friend CosetTable coset_table_from_json(const GroupPresentation&, const std::string&);
  std::array<long long, 8> key_of(const Mat2& g) const;
  std::array<long long, 8> key_of_column(QuadInt a, QuadInt c) const;
  std::map<std::array<long long, 8>, int> index_;
};

CosetTable coset_table(const GroupPresentation& P, const CongruenceSubgroup& H,
                       long long max_index = 1000000);

std::string coset_table_to_json(const CosetTable& T);
CosetTable coset_table_from_json(const GroupPresentation& P, const std::string& json_text);

// Invariant factors and free rank of the abelianization, via integer Smith
// normal form of the relator exponent matrix.
struct Abelianization {
  std::vector<long long> torsion;  // invariant factors > 1
  int free_rank = 0;
};
Abelianization abelianization(const GroupPresentation& P);
int hom_rank_mod_ell(const Abelianization& ab, long long ell);

// Smith normal form diagonal of an integer matrix (nonnegative entries).
std::vector<long long> smith_normal_form(std::vector<std::vector<long long>> M);

}  // namespace bianchi

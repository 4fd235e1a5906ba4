#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bianchi {

// x + y*w where w = sqrt(-d) for d = 1,2 mod 4 and w = (1+sqrt(-d))/2 for
// d = 3 mod 4.
struct QuadInt {
  long long x = 0, y = 0;
  QuadInt() = default;
  QuadInt(long long x_, long long y_) : x(x_), y(y_) {}
  bool operator==(const QuadInt&) const = default;
  bool is_zero() const { return x == 0 && y == 0; }
};

struct Mat2 {
  QuadInt a, b, c, d;  // row-major [[a,b],[c,d]]
  bool operator==(const Mat2&) const = default;
};

// Total order for use as map keys.
bool mat2_less(const Mat2& m, const Mat2& n);
struct Mat2Less {
  bool operator()(const Mat2& m, const Mat2& n) const { return mat2_less(m, n); }
};

struct FieldData {
  int d = 0;
  bool half = false;      // true for d = 3 mod 4
  long long minpoly_c = 0;  // w^2 = -minpoly_c (plain) or w^2 = w - minpoly_c (half)
  long long disc = 0;
  std::vector<QuadInt> units;

  static FieldData make(int d);
  // norm-Euclidean fields with built-in presentations
  static bool supported(int d) { return d == 1 || d == 2 || d == 3 || d == 7 || d == 11; }
  static bool class_number_one(int d) {
    return supported(d) || d == 19 || d == 43 || d == 67 || d == 163;
  }

  QuadInt omega() const { return {0, 1}; }
  QuadInt add(QuadInt a, QuadInt b) const { return {a.x + b.x, a.y + b.y}; }
  QuadInt sub(QuadInt a, QuadInt b) const { return {a.x - b.x, a.y - b.y}; }
  QuadInt neg(QuadInt a) const { return {-a.x, -a.y}; }
  QuadInt mul(QuadInt a, QuadInt b) const;
  QuadInt conj(QuadInt a) const;
  __int128 norm(QuadInt a) const;
  bool is_unit(QuadInt a) const { return norm(a) == 1; }

  // a = q*b + r with N(r) < N(b)
  void divmod(QuadInt a, QuadInt b, QuadInt& q, QuadInt& r) const;
  bool divides(QuadInt m, QuadInt x) const;
  QuadInt divexact(QuadInt a, QuadInt b) const;
  bool congruent(QuadInt a, QuadInt b, QuadInt m) const;
  QuadInt gcd(QuadInt a, QuadInt b) const;
  // g = s*a + t*b
  QuadInt ext_gcd(QuadInt a, QuadInt b, QuadInt& s, QuadInt& t) const;
  QuadInt canonical_associate(QuadInt a) const;

  Mat2 mmul(const Mat2& m, const Mat2& n) const;
  QuadInt det(const Mat2& m) const;
  Mat2 iota(const Mat2& m) const;  // adjugate, = det(m) * m^-1
  Mat2 sl2_inverse(const Mat2& m) const;
  Mat2 mat_scale(QuadInt c, const Mat2& m) const;
  bool is_sl2(const Mat2& m) const;
  static Mat2 identity() { return {{1, 0}, {0, 0}, {0, 0}, {1, 0}}; }
  static Mat2 minus_identity() { return {{-1, 0}, {0, 0}, {0, 0}, {-1, 0}}; }
};

// Canonical residues modulo the ideal (m), via a Hermite basis of its lattice.
struct ResidueCtx {
  FieldData F;
  QuadInt m;
  long long ex = 1;        // generator (ex, 0)
  long long fx = 0, gy = 1;  // generator (fx, gy)

  ResidueCtx() = default;
  ResidueCtx(const FieldData& F, QuadInt m);
  long long count() const { return ex * gy; }
  QuadInt reduce(QuadInt v) const;
  std::vector<QuadInt> all_residues() const;
};

// Reductions O -> F_ell attached to the two primes above a split ell.
struct SplitPrime {
  int ell = 0;
  QuadInt lambda, lambda_bar;
  uint32_t root1 = 0, root2 = 0;  // images of w

  uint32_t tau1(QuadInt q) const;
  uint32_t tau2(QuadInt q) const;
  uint32_t tau(bool bar, QuadInt q) const { return bar ? tau2(q) : tau1(q); }
};

SplitPrime split_prime(const FieldData& F, int ell);

bool double_coset_member(const FieldData& F, const Mat2& g, const QuadInt& pi);

std::vector<QuadInt> enumerate_primes(const FieldData& F, long long norm_bound,
                                      const std::vector<QuadInt>& avoid);

std::string quadint_to_string(const QuadInt& q);
QuadInt parse_quadint(const std::string& s);
std::string mat2_to_string(const Mat2& m);

}  // namespace bianchi

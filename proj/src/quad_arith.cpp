#include "bianchi/quad_arith.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace bianchi {

namespace {

long long floordiv(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

__int128 i128_floordiv(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// nearest integer to a/b, b > 0
long long round_div(__int128 a, __int128 b) {
  __int128 q = i128_floordiv(2 * a + b, 2 * b);
  return static_cast<long long>(q);
}

}  // namespace

bool mat2_less(const Mat2& m, const Mat2& n) {
  auto key = [](const Mat2& z) {
    return std::array<long long, 8>{z.a.x, z.a.y, z.b.x, z.b.y, z.c.x, z.c.y, z.d.x, z.d.y};
  };
  return key(m) < key(n);
}

FieldData FieldData::make(int d) {
  if (!class_number_one(d))
    throw std::invalid_argument("FieldData: d=" + std::to_string(d) +
                                " is not a class-number-one field");
  FieldData F;
  F.d = d;
  F.half = (d % 4 == 3);
  if (F.half) {
    F.minpoly_c = (1 + d) / 4;
    F.disc = -d;
  } else {
    F.minpoly_c = d;
    F.disc = -4LL * d;
  }
  if (d == 1) {
    F.units = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  } else if (d == 3) {
    F.units = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
  } else {
    F.units = {{1, 0}, {-1, 0}};
  }
  return F;
}

QuadInt FieldData::mul(QuadInt a, QuadInt b) const {
  long long cross = a.x * b.y + a.y * b.x;
  long long yy = a.y * b.y;
  if (half) return {a.x * b.x - minpoly_c * yy, cross + yy};
  return {a.x * b.x - minpoly_c * yy, cross};
}

QuadInt FieldData::conj(QuadInt a) const {
  if (half) return {a.x + a.y, -a.y};
  return {a.x, -a.y};
}

__int128 FieldData::norm(QuadInt a) const {
  __int128 x = a.x, y = a.y;
  if (half) return x * x + x * y + static_cast<__int128>(minpoly_c) * y * y;
  return x * x + static_cast<__int128>(minpoly_c) * y * y;
}

void FieldData::divmod(QuadInt a, QuadInt b, QuadInt& q, QuadInt& r) const {
  if (b.is_zero()) throw std::domain_error("divmod: division by zero");
  QuadInt num = mul(a, conj(b));
  __int128 nb = norm(b);
  long long qx = round_div(num.x, nb);
  long long qy = round_div(num.y, nb);
  __int128 best = -1;
  QuadInt bestq, bestr;
  for (long long dx = -1; dx <= 1; ++dx)
    for (long long dy = -1; dy <= 1; ++dy) {
      QuadInt qq{qx + dx, qy + dy};
      QuadInt rr = sub(a, mul(qq, b));
      __int128 n = norm(rr);
      if (best < 0 || n < best) {
        best = n;
        bestq = qq;
        bestr = rr;
      }
    }
  if (best >= nb) throw std::logic_error("divmod: remainder norm not reduced");
  q = bestq;
  r = bestr;
}

bool FieldData::divides(QuadInt m, QuadInt x) const {
  if (m.is_zero()) return x.is_zero();
  // m | x iff x * conj(m) / N(m) is integral
  QuadInt num = mul(x, conj(m));
  __int128 n = norm(m);
  return num.x % static_cast<long long>(n) == 0 && num.y % static_cast<long long>(n) == 0;
}

QuadInt FieldData::divexact(QuadInt a, QuadInt b) const {
  QuadInt num = mul(a, conj(b));
  long long n = static_cast<long long>(norm(b));
  if (n == 0 || num.x % n || num.y % n) throw std::domain_error("divexact: not divisible");
  return {num.x / n, num.y / n};
}

bool FieldData::congruent(QuadInt a, QuadInt b, QuadInt m) const { return divides(m, sub(a, b)); }

QuadInt FieldData::gcd(QuadInt a, QuadInt b) const {
  while (!b.is_zero()) {
    QuadInt q, r;
    divmod(a, b, q, r);
    a = b;
    b = r;
  }
  return a;
}

QuadInt FieldData::ext_gcd(QuadInt a, QuadInt b, QuadInt& s, QuadInt& t) const {
  QuadInt r0 = a, r1 = b;
  QuadInt s0{1, 0}, s1{0, 0};
  QuadInt t0{0, 0}, t1{1, 0};
  while (!r1.is_zero()) {
    QuadInt q, r;
    divmod(r0, r1, q, r);
    r0 = r1;
    r1 = r;
    QuadInt s2 = sub(s0, mul(q, s1));
    s0 = s1;
    s1 = s2;
    QuadInt t2 = sub(t0, mul(q, t1));
    t0 = t1;
    t1 = t2;
  }
  s = s0;
  t = t0;
  return r0;
}

QuadInt FieldData::canonical_associate(QuadInt a) const {
  if (a.is_zero()) return a;
  QuadInt best;
  std::tuple<long long, long long, int> best_key;
  bool have = false;
  for (const QuadInt& u : units) {
    QuadInt z = mul(a, u);
    if (!(z.x > 0 || (z.x == 0 && z.y > 0))) continue;
    std::tuple<long long, long long, int> key{z.x, z.y < 0 ? -z.y : z.y, z.y < 0 ? 1 : 0};
    if (!have || key < best_key) {
      have = true;
      best = z;
      best_key = key;
    }
  }
  if (!have) throw std::logic_error("canonical_associate: no positive associate");
  return best;
}

Mat2 FieldData::mmul(const Mat2& m, const Mat2& n) const {
  return {add(mul(m.a, n.a), mul(m.b, n.c)), add(mul(m.a, n.b), mul(m.b, n.d)),
          add(mul(m.c, n.a), mul(m.d, n.c)), add(mul(m.c, n.b), mul(m.d, n.d))};
}

QuadInt FieldData::det(const Mat2& m) const { return sub(mul(m.a, m.d), mul(m.b, m.c)); }

Mat2 FieldData::iota(const Mat2& m) const { return {m.d, neg(m.b), neg(m.c), m.a}; }

Mat2 FieldData::sl2_inverse(const Mat2& m) const {
  if (!(det(m) == QuadInt{1, 0})) throw std::domain_error("sl2_inverse: det != 1");
  return iota(m);
}

Mat2 FieldData::mat_scale(QuadInt c, const Mat2& m) const {
  return {mul(c, m.a), mul(c, m.b), mul(c, m.c), mul(c, m.d)};
}

bool FieldData::is_sl2(const Mat2& m) const { return det(m) == QuadInt{1, 0}; }

ResidueCtx::ResidueCtx(const FieldData& F_, QuadInt m_) : F(F_), m(m_) {
  if (m.is_zero()) throw std::invalid_argument("ResidueCtx: zero modulus");
  // lattice rows for (m): m and w*m
  QuadInt v1 = m;
  QuadInt v2 = F.mul(F.omega(), m);
  // euclid on y components
  while (v2.y != 0) {
    long long q = floordiv(v1.y, v2.y);
    v1 = F.sub(v1, {q * v2.x, q * v2.y});
    std::swap(v1, v2);
  }
  // now v2.y == 0
  ex = v2.x < 0 ? -v2.x : v2.x;
  if (v1.y < 0) v1 = F.neg(v1);
  gy = v1.y;
  fx = ((v1.x % ex) + ex) % ex;
  if (static_cast<__int128>(ex) * gy != F.norm(m))
    throw std::logic_error("ResidueCtx: lattice index mismatch");
}

QuadInt ResidueCtx::reduce(QuadInt v) const {
  long long t = floordiv(v.y, gy);
  v.x -= t * fx;
  v.y -= t * gy;
  v.x -= floordiv(v.x, ex) * ex;
  return v;
}

std::vector<QuadInt> ResidueCtx::all_residues() const {
  std::vector<QuadInt> out;
  out.reserve(static_cast<size_t>(count()));
  for (long long j = 0; j < gy; ++j)
    for (long long i = 0; i < ex; ++i) out.push_back({i, j});
  return out;
}

// deterministic search for an element of norm p whose reduction kills the
// root, i.e. tau(genum) = 0 for tau sending w to x
static QuadInt prime_element_above(const FieldData& F, long long p, long long x) {
  long long ybound = 1;
  while (F.norm({0, ybound}) < p) ++ybound;
  for (long long y = -ybound - 1; y <= ybound + 1; ++y) {
    long long xb = 1;
    while (F.norm({xb, y}) < p && xb < p + 2) ++xb;
    for (long long a = -xb - 1; a <= xb + 1; ++a) {
      QuadInt cand{a, y};
      if (F.norm(cand) != p) continue;
      if ((a + y * x) % p == 0) return F.canonical_associate(cand);
    }
  }
  throw std::logic_error("prime_element_above: no element of the given norm");
}

uint32_t SplitPrime::tau1(QuadInt q) const {
  long long r = (q.x + q.y * static_cast<long long>(root1)) % ell;
  return static_cast<uint32_t>(r < 0 ? r + ell : r);
}

uint32_t SplitPrime::tau2(QuadInt q) const {
  long long r = (q.x + q.y * static_cast<long long>(root2)) % ell;
  return static_cast<uint32_t>(r < 0 ? r + ell : r);
}

SplitPrime split_prime(const FieldData& F, int ell) {
  if (ell < 3) throw std::invalid_argument("split_prime: need an odd prime");
  for (int k = 2; k * k <= ell; ++k)
    if (ell % k == 0) throw std::invalid_argument("split_prime: ell not prime");
  std::vector<uint32_t> roots;
  for (long long x = 0; x < ell; ++x) {
    long long v = F.half ? (x * x - x + F.minpoly_c) % ell : (x * x + F.minpoly_c) % ell;
    if ((v % ell + ell) % ell == 0) roots.push_back(static_cast<uint32_t>(x));
  }
  if (roots.empty())
    throw std::invalid_argument("split_prime: " + std::to_string(ell) + " is inert in Q(sqrt(-" +
                                std::to_string(F.d) + "))");
  if (roots.size() == 1)
    throw std::invalid_argument("split_prime: " + std::to_string(ell) + " is ramified in Q(sqrt(-" +
                                std::to_string(F.d) + "))");
  SplitPrime sp;
  sp.ell = ell;
  sp.root1 = roots[0];
  sp.root2 = roots[1];
  sp.lambda = prime_element_above(F, ell, sp.root1);
  sp.lambda_bar = F.canonical_associate(F.conj(sp.lambda));
  if (F.norm(sp.lambda) != ell) throw std::logic_error("split_prime: gcd has wrong norm");
  if (sp.tau1(sp.lambda) != 0 || sp.tau2(sp.lambda_bar) != 0)
    throw std::logic_error("split_prime: reduction maps inconsistent");
  return sp;
}

bool double_coset_member(const FieldData& F, const Mat2& g, const QuadInt& pi) {
  if (!(F.det(g) == pi)) return false;
  QuadInt content = F.gcd(F.gcd(g.a, g.b), F.gcd(g.c, g.d));
  return F.is_unit(content);
}

std::vector<QuadInt> enumerate_primes(const FieldData& F, long long norm_bound,
                                      const std::vector<QuadInt>& avoid) {
  std::vector<QuadInt> out;
  auto coprime_to_avoid = [&](QuadInt pi) {
    for (const QuadInt& a : avoid)
      if (!F.is_unit(F.gcd(pi, a))) return false;
    return true;
  };
  auto push = [&](QuadInt pi) {
    pi = F.canonical_associate(pi);
    if (coprime_to_avoid(pi)) out.push_back(pi);
  };
  for (long long p = 2; p <= norm_bound; ++p) {
    bool isp = p >= 2;
    for (long long k = 2; k * k <= p; ++k)
      if (p % k == 0) isp = false;
    if (!isp) continue;
    std::vector<long long> roots;
    for (long long x = 0; x < p; ++x) {
      long long v = F.half ? (x * x - x + F.minpoly_c) % p : (x * x + F.minpoly_c) % p;
      if ((v % p + p) % p == 0) roots.push_back(x);
    }
    if (roots.empty()) {
      if (p * p <= norm_bound) push({p, 0});
    } else {
      for (long long x : roots) push(prime_element_above(F, p, x));
    }
  }
  std::sort(out.begin(), out.end(), [&](const QuadInt& a, const QuadInt& b) {
    auto key = [&](const QuadInt& z) {
      return std::tuple<long long, long long, long long, int>(
          static_cast<long long>(F.norm(z)), z.x, z.y < 0 ? -z.y : z.y, z.y < 0 ? 1 : 0);
    };
    return key(a) < key(b);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string quadint_to_string(const QuadInt& q) {
  std::ostringstream os;
  if (q.x == 0 && q.y == 0) return "0";
  if (q.x != 0) os << q.x;
  if (q.y != 0) {
    if (q.y > 0 && q.x != 0) os << "+";
    if (q.y == -1)
      os << "-";
    else if (q.y != 1)
      os << q.y;
    os << "w";
  }
  return os.str();
}

QuadInt parse_quadint(const std::string& s) {
  QuadInt q;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  bool any = false;
  while (i < s.size()) {
    skip_ws();
    long long sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
      skip_ws();
    }
    bool have_digits = false;
    long long val = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      have_digits = true;
      val = val * 10 + (s[i] - '0');
      ++i;
    }
    skip_ws();
    if (i < s.size() && (s[i] == 'w' || s[i] == 'W')) {
      ++i;
      q.y += sign * (have_digits ? val : 1);
    } else {
      if (!have_digits) throw std::invalid_argument("parse_quadint: bad syntax in '" + s + "'");
      q.x += sign * val;
    }
    any = true;
    skip_ws();
  }
  if (!any) throw std::invalid_argument("parse_quadint: empty input");
  return q;
}

std::string mat2_to_string(const Mat2& m) {
  return "[[" + quadint_to_string(m.a) + "," + quadint_to_string(m.b) + "],[" +
         quadint_to_string(m.c) + "," + quadint_to_string(m.d) + "]]";
}

}  // namespace bianchi

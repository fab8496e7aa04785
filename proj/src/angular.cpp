#include "aaphase/angular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace aa {
namespace {

using i128 = __int128;

constexpr int kMaxFactorialArg = 33;  // 33! still fits in a signed 128-bit int

const i128* factorial_table() {
  static const auto table = [] {
    static i128 f[kMaxFactorialArg + 1];
    f[0] = 1;
    for (int n = 1; n <= kMaxFactorialArg; ++n) f[n] = f[n - 1] * n;
    return f;
  }();
  return table;
}

i128 fact(int n) {
  if (n < 0 || n > kMaxFactorialArg)
    throw std::domain_error("wigner3j: factorial argument out of range");
  return factorial_table()[n];
}

i128 iabs(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = iabs(a);
  b = iabs(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr i128 kMul = (i128(1) << 126);

i128 mul_checked(i128 a, i128 b) {
  if (a == 0 || b == 0) return 0;
  if (iabs(a) > kMul / iabs(b))
    throw std::domain_error("wigner3j: exact arithmetic overflow");
  return a * b;
}

// Exact rational with positive denominator.
struct Rat {
  i128 num = 0;
  i128 den = 1;
  void reduce() {
    if (num == 0) {
      den = 1;
      return;
    }
    i128 g = gcd128(num, den);
    num /= g;
    den /= g;
    if (den < 0) {
      num = -num;
      den = -den;
    }
  }
};

Rat rat_add(Rat a, Rat b) {
  Rat r;
  i128 g = gcd128(a.den, b.den);
  i128 bd = b.den / g;
  r.num = mul_checked(a.num, bd);
  i128 t = mul_checked(b.num, a.den / g);
  r.num += t;
  r.den = mul_checked(a.den, bd);
  r.reduce();
  return r;
}

Rat rat_mul(Rat a, Rat b) {
  Rat r;
  r.num = mul_checked(a.num, b.num);
  r.den = mul_checked(a.den, b.den);
  r.reduce();
  return r;
}

double rat_to_double(const Rat& r) {
  return static_cast<double>(static_cast<long double>(r.num) /
                             static_cast<long double>(r.den));
}

int doubled(double x, const char* what) {
  double t = 2.0 * x;
  long long r = std::llround(t);
  if (std::abs(t - static_cast<double>(r)) > 1e-9)
    throw std::invalid_argument(std::string("wigner3j: ") + what +
                                " must be integer or half-integer");
  return static_cast<int>(r);
}

void check_jm(int twoj, int twom, const char* what) {
  if (twoj < 0)
    throw std::invalid_argument(std::string("wigner3j: negative j for ") + what);
  if (((twoj ^ twom) & 1) != 0)
    throw std::invalid_argument(std::string("wigner3j: j and m of ") + what +
                                " differ by a non-integer");
  if (std::abs(twom) > twoj)
    throw std::invalid_argument(std::string("wigner3j: |m| > j for ") + what);
}

}  // namespace

double wigner3j(double j1, double j2, double j3,
                double m1, double m2, double m3) {
  const int tj1 = doubled(j1, "j1"), tj2 = doubled(j2, "j2"), tj3 = doubled(j3, "j3");
  const int tm1 = doubled(m1, "m1"), tm2 = doubled(m2, "m2"), tm3 = doubled(m3, "m3");
  check_jm(tj1, tm1, "(j1,m1)");
  check_jm(tj2, tm2, "(j2,m2)");
  check_jm(tj3, tm3, "(j3,m3)");

  // Selection rules: zero, not an error.
  if (tm1 + tm2 + tm3 != 0) return 0.0;
  if ((tj1 + tj2 + tj3) % 2 != 0) return 0.0;  // j1+j2+j3 must be an integer
  if (tj3 > tj1 + tj2 || tj3 < std::abs(tj1 - tj2)) return 0.0;

  // Racah's closed form.  All factorial arguments below are integers because
  // of the parity checks above; each is formed from doubled values / 2.
  const auto half = [](int twice) { return twice / 2; };

  const int a1 = half(tj1 + tj2 - tj3);
  const int a2 = half(tj1 - tj2 + tj3);
  const int a3 = half(-tj1 + tj2 + tj3);
  const int a4 = half(tj1 + tj2 + tj3) + 1;

  Rat delta{mul_checked(mul_checked(fact(a1), fact(a2)), fact(a3)), fact(a4)};
  delta.reduce();

  Rat mfac{1, 1};
  mfac.num = mul_checked(mfac.num, fact(half(tj1 + tm1)));
  mfac.num = mul_checked(mfac.num, fact(half(tj1 - tm1)));
  mfac.num = mul_checked(mfac.num, fact(half(tj2 + tm2)));
  mfac.num = mul_checked(mfac.num, fact(half(tj2 - tm2)));
  mfac.num = mul_checked(mfac.num, fact(half(tj3 + tm3)));
  mfac.num = mul_checked(mfac.num, fact(half(tj3 - tm3)));

  const int kmin = std::max({0, half(tj2 - tj3 - tm1), half(tj1 - tj3 + tm2)});
  const int kmax = std::min({half(tj1 + tj2 - tj3), half(tj1 - tm1), half(tj2 + tm2)});
  if (kmin > kmax) return 0.0;

  Rat sum{0, 1};
  for (int k = kmin; k <= kmax; ++k) {
    i128 den = fact(k);
    den = mul_checked(den, fact(half(tj1 + tj2 - tj3) - k));
    den = mul_checked(den, fact(half(tj1 - tm1) - k));
    den = mul_checked(den, fact(half(tj2 + tm2) - k));
    den = mul_checked(den, fact(half(tj3 - tj2 + tm1) + k));
    den = mul_checked(den, fact(half(tj3 - tj1 - tm2) + k));
    Rat term{(k % 2 == 0) ? i128(1) : i128(-1), den};
    sum = rat_add(sum, term);
  }
  if (sum.num == 0) return 0.0;

  // phase (-1)^(j1-j2-m3); the exponent is an integer here.
  const int phase_exp = half(tj1 - tj2 - tm3);
  const double phase = (phase_exp % 2 == 0) ? 1.0 : -1.0;

  const Rat under_root = rat_mul(delta, mfac);
  const long double root = std::sqrt(static_cast<long double>(under_root.num) /
                                     static_cast<long double>(under_root.den));
  return phase * static_cast<double>(root) * rat_to_double(sum);
}

double dipole_element(double j_bra, double m_bra, int q,
                      double j_ket, double m_ket) {
  if (q < -1 || q > 1)
    throw std::invalid_argument("dipole_element: q must be -1, 0, or +1");
  const double w = wigner3j(j_ket, 1.0, j_bra, m_ket, q, -m_bra);
  if (w == 0.0) return 0.0;
  // (-1)^(j_ket - 1 + m_bra); w != 0 guarantees the exponent is an integer.
  const int e2 = doubled(j_ket, "j_ket") - 2 + doubled(m_bra, "m_bra");
  const double phase = ((e2 / 2) % 2 == 0) ? 1.0 : -1.0;
  return phase * w;
}

}  // namespace aa

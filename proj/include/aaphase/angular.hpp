#pragma once

// Wigner 3-j symbols (Racah formula, exact integer arithmetic) and the
// orientation-dependent single-atom dipole matrix elements built from them.
//
// Conventions:
//   * j, m may be integer or half-integer; internally doubled integers.
//   * <j,m| d_q |j',m'> = (-1)^(j'-1+m) * ThreeJ(j',1,j; m',q,-m)
//     i.e. reduced matrix elements are set to 1; only the angular structure
//     is kept, the radial part is absorbed into the C3 coefficient.

namespace aa {

// Wigner 3-j symbol (j1 j2 j3 / m1 m2 m3).
// Selection-rule failures (m-sum, triangle rule, non-integer j1+j2+j3)
// return 0.  Structurally invalid inputs (negative or non-half-integer j,
// |m| > j, mismatched j/m parity) throw std::invalid_argument.
double wigner3j(double j1, double j2, double j3,
                double m1, double m2, double m3);

// Angular part of <j_bra, m_bra| d_q |j_ket, m_ket>, q in {-1, 0, +1}.
double dipole_element(double j_bra, double m_bra, int q,
                      double j_ket, double m_ket);

}  // namespace aa

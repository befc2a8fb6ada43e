#pragma once
// Lefschetz-number rank computation for Delsarte elliptic surfaces: the
// subgroup L of (Q/Z)^4 spanned by the rows of (e_i - e_4) A^-1, the character
// count lambda, and the rank formula
//   rank = (e - 2) - lambda - 2 - sum_v (m_v - 1).

#include <array>

#include "ellsurf/intmat.hpp"
#include "ellsurf/kodaira.hpp"

namespace ellsurf {

struct DelsarteSurface {
  IntMat A;  // 4x4 exponent matrix, rows = exponents of (t, X, Y, Z)
};

struct QmodZVec {
  std::array<Rat, 4> a;  // each reduced to [0, 1)
};

struct SubgroupL {
  Int N = 1;  // common denominator
  std::vector<std::array<long, 4>> elems;  // numerators over N, in [0, N)
  IntMat hermite;                          // basis of the lattice between N Z^4 and Z^4

  size_t size() const { return elems.size(); }
};

// throws "degenerate Delsarte data" when A is singular
SubgroupL group_L(const DelsarteSurface& S);

// number of all-nonzero elements admitting a unit t mod lcm(orders) with
// sum of fractional parts != 2 (the adopted reading)
long lambda_count(const SubgroupL& L);
// the complementary "for all units t" reading, kept for calibration evidence
long lambda_count_forall(const SubgroupL& L);

struct DelsarteRankReport {
  long euler = 0;
  long b2 = 0;
  long sum_m_minus_1 = 0;
  long lambda = 0;
  long lambda_forall = 0;
  long rank = 0;              // (e-2) - lambda - 2 - sum(m_v - 1)
  long rank_alt_reading = 0;  // lambda - 2 - sum(m_v - 1), the misprinted closing formula
  size_t L_size = 0;
};

// E must be the Weierstrass realization of S (any chi; fibres classifiable)
DelsarteRankReport delsarte_rank(const DelsarteSurface& S, const WModel<Rat>& E);

// convenience: y^2 = x^3 + B with B = c_hi t^hi + c_lo t^lo (two terms) or
// monomial-plus-constant; builds the exponent matrix of the homogenization
std::optional<DelsarteSurface> delsarte_from_b(const QPoly& B);

}  // namespace ellsurf

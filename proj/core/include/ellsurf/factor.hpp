#pragma once
// Exact polynomial factorization:
//   - over F_q: squarefree + distinct-degree + Cantor-Zassenhaus (seeded RNG)
//   - over Q:   Zassenhaus (reduce mod p, Hensel lift, subset recombination)
//               with a cyclotomic fast path for x^n +- 1 shapes
// plus multifactor Hensel lifting and exact polynomial square roots.

#include <optional>
#include <utility>
#include <vector>

#include "ellsurf/finite_field.hpp"
#include "ellsurf/numeric.hpp"
#include "ellsurf/poly.hpp"

namespace ellsurf {

using FqPoly = Poly<FqElem>;

// dense integer polynomial, ascending coefficients
using ZPoly = std::vector<Int>;

// ---- factorization -------------------------------------------------------

// irreducible factors with multiplicities; factors monic, deterministic order
// (degree, then coefficient lex).  Throws "zero input" on the zero polynomial.
std::vector<std::pair<FqPoly, unsigned>> factor_fq(const FqPoly& f);

// roots of f lying in its coefficient field (each listed once)
std::vector<FqElem> fq_roots(const FqPoly& f);

bool fq_irreducible_poly(const FqPoly& f);

// irreducible monic factors over Q with multiplicities (the unit
// lc(f)/prod(...) is implicit).  Subset recombination capped at 20 modular
// factors; inputs needing more raise an error unless the cyclotomic fast path
// applies.
std::vector<std::pair<QPoly, unsigned>> factor_q(const QPoly& f);

bool q_irreducible(const QPoly& f);

// n-th cyclotomic polynomial over Q
QPoly cyclotomic(unsigned long n);

// squarefree decomposition: list of (g_i, e_i), g_i squarefree pairwise
// coprime monic, f = unit * prod g_i^{e_i}.  Valid over Q and over F_q
// (finite-field version handles the p-th power degeneration).
std::vector<std::pair<QPoly, unsigned>> squarefree_decomp(const QPoly& f);
std::vector<std::pair<FqPoly, unsigned>> squarefree_decomp(const FqPoly& f);

// ---- Hensel lifting ------------------------------------------------------

// Given f over Z with f mod p squarefree, lc(f) a unit mod p, and the monic
// pairwise-coprime factors of f mod p, returns monic factors mod p^B (B >= 1
// doublings as needed) whose product is f/lc(f) mod p^B and which reduce to
// the inputs mod p.  Throws on non-coprime inputs.
std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<ZPoly>& factors_mod_p,
                               const Int& p, unsigned B);

// ---- square roots --------------------------------------------------------

// exact g with g^2 = f, or nullopt.  Sign convention: lc(g) is the canonical
// square root of lc(f) (positive over Q, lexicographically smaller
// representative over F_q).
std::optional<QPoly> poly_sqrt(const QPoly& f);
std::optional<FqPoly> poly_sqrt(const FqPoly& f);

// ---- misc helpers --------------------------------------------------------

ZPoly zpoly_from_q(const QPoly& f);  // requires integer coefficients
QPoly qpoly_from_z(const ZPoly& f);
FqPoly fq_poly_from_z(const ZPoly& f, const FqPtr& F);
FqPoly fq_poly_from_q(const QPoly& f, const FqPtr& F);  // denominators must be units mod p

// deterministic comparison for canonical factor ordering
int qpoly_cmp(const QPoly& a, const QPoly& b);
int fqpoly_cmp(const FqPoly& a, const FqPoly& b);

}  // namespace ellsurf

#pragma once
// Number fields as residue rings Q[x]/(g) with g monic integral irreducible,
// exact element arithmetic, Trager factorization with modular internals, and
// the iterated-adjunction step (primitive element by shifted resultants,
// re-expression of old generators by modular gcds).

#include <memory>

#include "ellsurf/factor.hpp"
#include "ellsurf/poly.hpp"

namespace ellsurf {

struct NfCtx;
using NfPtr = std::shared_ptr<const NfCtx>;

struct NfCtx {
  ZPoly g;            // monic integral, irreducible; degree >= 1 (g = x for Q itself)
  unsigned degree() const { return static_cast<unsigned>(g.size()) - 1; }
  std::string label() const;
};

NfPtr nf_rationals();                 // Q as the trivial field (g = x)
NfPtr nf_make(const ZPoly& g);        // validates monic; irreducibility is the caller's contract

struct NfElem {
  NfPtr K;
  std::vector<Rat> c;  // dense, size deg(g)

  NfElem() = default;
  NfElem(NfPtr k, const Rat& v);
  static NfElem from_poly(NfPtr k, const QPoly& f);  // reduces mod g
  QPoly to_poly() const;

  bool is_zero() const;
  bool is_one() const;
  NfElem zero() const { return NfElem(K, Rat(0)); }
  NfElem one() const { return NfElem(K, Rat(1)); }
  NfElem inv() const;

  NfElem operator-() const;
  NfElem& operator+=(const NfElem& o);
  NfElem& operator-=(const NfElem& o);
  NfElem& operator*=(const NfElem& o);
  NfElem& operator/=(const NfElem& o);
  friend NfElem operator+(NfElem a, const NfElem& b) { a += b; return a; }
  friend NfElem operator-(NfElem a, const NfElem& b) { a -= b; return a; }
  friend NfElem operator*(NfElem a, const NfElem& b) { a *= b; return a; }
  friend NfElem operator/(NfElem a, const NfElem& b) { a /= b; return a; }
  friend bool operator==(const NfElem& a, const NfElem& b);
  friend bool operator!=(const NfElem& a, const NfElem& b) { return !(a == b); }
  static int cmp(const NfElem& a, const NfElem& b);

  std::string str() const;
};

// generator x-bar of the field
NfElem nf_gen(const NfPtr& K);
// evaluate an integer/rational polynomial at an element (R(theta) expressions)
NfElem nf_eval(const QPoly& f, const NfElem& x);

// ---- modular machinery -------------------------------------------------------

// reduction of K modulo a good prime p: F_p[z]/(g) split into local fields
struct NfModCtx {
  NfPtr K;
  std::uint64_t p;
  std::vector<FqPtr> locals;  // one per irreducible factor of g mod p
};

// nullopt when p is unusable (divides lc/denominators or g mod p not squarefree)
std::optional<NfModCtx> nf_mod_ctx(const NfPtr& K, std::uint64_t p);

// image of an element in each local field (requires p coprime to denominators)
std::vector<FqElem> nf_mod_images(const NfModCtx& M, const NfElem& a);

// ---- field operations ----------------------------------------------------------

// monic gcd of two polynomials over K via modular images + rational
// reconstruction + exact verification
Poly<NfElem> nf_gcd(const Poly<NfElem>& A, const Poly<NfElem>& B);

// roots of f lying in K (each exactly verified)
std::vector<NfElem> nf_roots(const Poly<NfElem>& f);

// irreducible monic factors with multiplicity (Trager: squarefree split,
// shifted norm by modular resultants, factor_q, gcd lift).  Norm degree capped.
inline constexpr long kTragerNormCap = 300;
std::vector<std::pair<Poly<NfElem>, unsigned>> factor_over_numberfield(const Poly<NfElem>& f);

// the norm Res_x(g(x), f(y - s x)) used by Trager, exposed for tests
QPoly nf_trager_norm(const Poly<NfElem>& f, long s);

// ---- adjunction -----------------------------------------------------------------

struct Adjoined {
  NfPtr K2;          // the extended field
  NfElem old_gen;    // image of the old generator theta in K2
  NfElem new_root;   // the adjoined root of u in K2
  long shift = 0;    // theta' = new_root + shift * theta
};

// adjoin a root of u (irreducible over K, degree >= 2); K may be Q itself.
// Throws when the projected degree exceeds `degree_bound`.
Adjoined nf_adjoin(const NfPtr& K, const Poly<NfElem>& u, unsigned degree_bound);

// lift a polynomial over K into K2 coefficients through the embedding
Poly<NfElem> nf_lift_poly(const Poly<NfElem>& f, const NfPtr& K2, const NfElem& old_gen_image);

// migrate field elements through the embedding (cleared-denominator path)
std::vector<NfElem> nf_migrate(const std::vector<NfElem>& elems, const NfPtr& K2,
                               const NfElem& old_gen_image);

}  // namespace ellsurf

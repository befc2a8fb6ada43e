#pragma once
// Finite fields F_{p^k}, p >= 5, elements as dense coefficient vectors over
// F_p modulo a monic irreducible modulus.  Characteristic 2 and 3 are rejected
// at construction: the Kodaira valuation table used downstream is only valid
// away from residue characteristic 2, 3.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellsurf {

struct FqCtx;
using FqPtr = std::shared_ptr<const FqCtx>;

struct FqCtx {
  std::uint64_t p = 0;             // prime >= 5, < 2^31
  std::uint32_t k = 1;             // extension degree
  std::vector<std::uint64_t> mod;  // monic modulus, ascending, size k+1 (k>=2), empty for k=1

  std::uint64_t q_fits() const;  // p^k if it fits in 64 bits, else 0
  std::string label() const;     // "F_p" or "F_p^k"
};

FqPtr fq_field(std::uint64_t p);                                          // F_p
FqPtr fq_field(std::uint64_t p, std::uint32_t k);                         // deterministic modulus
FqPtr fq_field(std::uint64_t p, const std::vector<std::uint64_t>& mod);   // explicit modulus

struct FqElem {
  FqPtr F;
  std::vector<std::uint64_t> c;  // size k, ascending powers of the generator

  FqElem() = default;
  FqElem(FqPtr f, std::uint64_t v);  // embed integer
  static FqElem make(FqPtr f, std::vector<std::uint64_t> coords);

  bool is_zero() const;
  bool is_one() const;
  FqElem zero() const { return FqElem(F, 0); }
  FqElem one() const { return FqElem(F, 1); }
  FqElem inv() const;
  FqElem pow(std::uint64_t e) const;
  FqElem frobenius() const;                   // x -> x^p
  FqElem frobenius_iter(std::uint32_t n) const;  // x -> x^(p^n)

  FqElem operator-() const;
  FqElem& operator+=(const FqElem& o);
  FqElem& operator-=(const FqElem& o);
  FqElem& operator*=(const FqElem& o);
  FqElem& operator/=(const FqElem& o);
  friend FqElem operator+(FqElem a, const FqElem& b) { a += b; return a; }
  friend FqElem operator-(FqElem a, const FqElem& b) { a -= b; return a; }
  friend FqElem operator*(FqElem a, const FqElem& b) { a *= b; return a; }
  friend FqElem operator/(FqElem a, const FqElem& b) { a /= b; return a; }
  friend bool operator==(const FqElem& a, const FqElem& b);
  friend bool operator!=(const FqElem& a, const FqElem& b) { return !(a == b); }

  // canonical total order (coordinate lex), for deterministic output
  static int cmp(const FqElem& a, const FqElem& b);

  std::string str() const;
};

// square root in F_q (q odd); returns the canonical root r with
// cmp(r, -r) <= 0, or nullopt for a non-residue
std::optional<FqElem> fq_sqrt(const FqElem& a);

// n-th root: solves x^n = a if possible (defined in factor.cpp via root
// extraction of z^n - a)
std::optional<FqElem> fq_nth_root(const FqElem& a, std::uint64_t n);

// deterministic nonresidue search
FqElem fq_nonresidue(const FqPtr& F);

// --- flattened extensions -------------------------------------------------
//
// Given F = F_{p^k} and a monic irreducible pi of degree d over F (supplied as
// coefficients in F), builds the flat field E = F_{p^{kd}} together with the
// ring isomorphism F[z]/(pi) = E.  Used to realize residue fields of places
// and coordinate fields of variety points.

struct FlatExt {
  FqPtr base;                       // F
  FqPtr big;                        // E, flat over F_p
  std::vector<FqElem> pi;           // the adjoined polynomial over F (ascending, monic)
  // internal change-of-basis data over F_p
  std::vector<std::uint64_t> to_flat_mat;    // n x n, row-major
  std::vector<std::uint64_t> from_flat_mat;  // n x n

  std::uint32_t deg() const { return static_cast<std::uint32_t>(pi.size()) - 1; }
  // image of an element of F inside E
  FqElem embed(const FqElem& a) const;
  // the designated root of pi in E (the class of z)
  FqElem root() const;
  // map a tower element given by coordinates over F (length d) into E
  FqElem flatten(const std::vector<FqElem>& coords) const;
  // inverse of flatten
  std::vector<FqElem> unflatten(const FqElem& a) const;
};

FlatExt fq_flatten(const FqPtr& F, const std::vector<FqElem>& pi);

// embedding F_{p^a} -> F_{p^b} for a | b (deterministic: smallest root of the
// modulus); identity when the contexts coincide
struct FqEmbed {
  FqPtr src, dst;
  FqElem gen_image;  // image of the generator of src
  FqElem operator()(const FqElem& a) const;
};
FqEmbed fq_embedding(const FqPtr& src, const FqPtr& dst);

}  // namespace ellsurf

#pragma once
// Splitting fields over Q and their automorphism groups.
//
// Construction is by iterated adjunction: factor over the current field, adjoin
// a root of a nonlinear factor (primitive element via shifted resultants),
// re-express all tracked roots through the old-generator image.  The
// automorphism maps are then produced by the interpolation + Newton-lifting +
// symmetric-representative reconstruction algorithm, with every accepted map
// verified exactly against the adjunction data.

#include "ellsurf/numfield.hpp"

namespace ellsurf {

struct SplitField {
  NfPtr K;                          // the splitting field Q[X]/(g)
  std::vector<QPoly> inputs;        // normalized monic-integral inputs
  std::vector<Rat> input_scales;    // original root = tracked root / scale
  std::vector<NfElem> roots;        // tracked roots, grouped by input
  std::vector<size_t> root_input;   // input index per tracked root
  std::vector<Int> weights;         // theta = sum weights[i] * roots[i]
  std::vector<unsigned> tower_degrees;  // field degree after each adjunction

  unsigned degree() const { return K->degree(); }
};

struct AutMap {
  std::vector<size_t> perm;  // action on the tracked roots
  QPoly h;                   // image of the generator: exact residue polynomial
};

struct SplitResult {
  SplitField field;
  std::vector<AutMap> group;                 // element 0 = identity
  std::vector<std::vector<size_t>> table;    // table[a][b] = index of sigma_a o sigma_b
  std::vector<size_t> generators;            // indices of a generating set
  std::uint64_t prime = 0;                   // fully-split working prime
  std::string group_name;
  size_t directly_verified = 0;  // elements with the residue identity checked head-on
};

inline constexpr unsigned kDefaultSplitDegreeBound = 240;

// iterated-adjunction construction; throws on non-squarefree products and on
// degree-bound overflow (naming the partial tower)
SplitField splitting_field(const std::vector<QPoly>& fs,
                           unsigned degree_bound = kDefaultSplitDegreeBound);

// the full pipeline: field + group + automorphisms + composition table
SplitResult split_aut_grp(const std::vector<QPoly>& fs,
                          std::optional<std::uint64_t> prime = std::nullopt,
                          unsigned degree_bound = kDefaultSplitDegreeBound);

// the interpolation/Newton/reconstruction engine for one group element; the
// returned flag reports whether reconstruction stabilized at the exact map
struct LiftOutcome {
  QPoly h;                 // reconstructed map (g'-cleared form divided back out)
  unsigned doublings = 0;  // Newton steps used
  bool matches_exact = false;
};
LiftOutcome lift_automorphism(const SplitResult& R, size_t elem_index, std::uint64_t prime);

// roots of f expressed in the splitting field via the Newton engine, given the
// permutation data assigning mod-p roots to embeddings.  For tracked inputs the
// assignment is derived automatically.
std::vector<NfElem> roots_in_field(const SplitResult& R, const QPoly& f);

// Frobenius-order sampling: k_p = lcm of factor degrees of prod(fs) mod p
struct ChebotarevSample {
  std::uint64_t p;
  std::uint64_t k_p;
};
struct ChebotarevResult {
  Int order_lcm = 1;           // lcm of all k_p: divides the true group order
  double density_estimate = 0; // 1 / frequency of k_p == 1
  size_t full_splits = 0;
  std::vector<ChebotarevSample> samples;
};
ChebotarevResult chebotarev_estimate(const std::vector<QPoly>& fs, std::uint64_t p_min,
                                     size_t sample_count);

}  // namespace ellsurf

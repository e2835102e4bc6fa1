#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symhom/algebra.hpp"
#include "symhom/chain_complex.hpp"
#include "symhom/homology.hpp"

namespace symhom::hs
{

// The partial complex 0 <- A <- A⊗A⊗A <- (A⊗A⊗A⊗A) ⊕ A with
//   d1(a⊗b⊗c) = abc - cba,
//   d2(a⊗b⊗c⊗d) = ab⊗c⊗d + d⊗ca⊗b + bca⊗1⊗d + d⊗bc⊗a,  d2(a) = 1⊗a⊗1.
// Monoid algebras need a weight; every group is then its weight-w part.
// Homology is available in degrees 0 and 1 only.
homology::ChainComplexDesc build_prop3_complex(const algebra::Algebra& A, RingSpec ring,
                                               std::optional<int> weight = std::nullopt);

// 0 <- A <- A⊗A <- (A⊗A⊗A) ⊕ A with d1(a⊗b) = ab - ba,
//   d2(a⊗b⊗c) = ab⊗c - a⊗bc + ca⊗b,  d2(a) = 1⊗a - a⊗1.
homology::ChainComplexDesc build_hc_low_complex(const algebra::Algebra& A, RingSpec ring,
                                                std::optional<int> weight = std::nullopt);

struct LowDegrees
{
    homology::HomologyEntry h0;
    homology::HomologyEntry h1;
};

LowDegrees hs_low(const algebra::Algebra& A, RingSpec ring, std::optional<int> weight = std::nullopt);
LowDegrees hc_low(const algebra::Algebra& A, RingSpec ring, std::optional<int> weight = std::nullopt);

// Chain map from the cyclic partial complex to the symmetric one:
// identity, a⊗b -> a⊗b⊗1, and f on (A⊗A⊗A) ⊕ A.
struct ComparisonMap
{
    linalg::SparseExactMatrix f0;
    linalg::SparseExactMatrix f1;
    linalg::SparseExactMatrix f2;
    // Matrices over Q of HC_i -> HS_i in the homology bases of the two complexes.
    std::vector<std::vector<Rational>> on_h0;
    std::vector<std::vector<Rational>> on_h1;
};

// Throws InternalError when a square fails to commute.
ComparisonMap comparison_map(const algebra::Algebra& A, RingSpec ring, std::optional<int> weight = std::nullopt);

struct TruncationParams
{
    // Largest object [m] allowed at the head of a chain.
    int m = 0;
    // Homology degree of interest; the complex covers degrees 0..i+1.
    int i = 0;
    std::optional<int> weight;
};

// floor(3(i+1)/2) + 1, the smallest m with m > 3(i+1)/2.
int default_truncation(int i);
// True when H_i(F_m) is known to equal HS_i: m > 3(i+1)/2, or a weight w is
// fixed on a positively graded ideal and m >= w - 1 (then F_m is everything).
bool truncation_certified(const algebra::Algebra& A, const TruncationParams& params);

struct HsOptions
{
    std::optional<int> m;
    // Guard on the number of cells (chains times tensors) in the largest group used.
    std::size_t max_cells = 4'000'000;
    // Guard on stored nonzeros when a Smith form over Z is needed.
    std::size_t max_nonzeros = 2'000'000;
};

// F_m L^epi in degrees 0..i+1: chains [m0] ->> [m1] ->> ... ->> [mq] of
// epimorphisms with m0 <= m, tensored with B^sym_{m0} I (A when m0 = 0).
// d_0 acts on the tensor by the first arrow, middle faces compose, the last
// face drops the final arrow. Materialized in full, so only for small cases.
homology::ChainComplexDesc build_lepi_truncated(const algebra::Algebra& A, const TruncationParams& params,
                                                RingSpec ring, const HsOptions& options = {});

struct HsReport
{
    std::string algebra;
    int degree = 0;
    std::optional<int> weight;
    int m = 0;
    bool certified = false;
    std::size_t betti = 0;
    std::vector<Integer> torsion;
    // "lepi" (reduced epi complex) or "full-bar" (all morphisms of Delta^(m)S,
    // used for algebras without augmentation).
    std::string method;
    // Weights summed over when no single weight was requested.
    std::vector<int> weights;

    nlohmann::json to_json() const;
};

// HS_i(A) as H_i of the truncated complex. Chains ending away from [0] are
// eliminated against the extension by the collapse [n] -> [0], so only
// chains ending at [0] are stored. Without a weight on a graded algebra the
// weight components are computed separately and summed.
HsReport hs_degree(const algebra::Algebra& A, int i, RingSpec ring, std::optional<int> weight = std::nullopt,
                   const HsOptions& options = {});

} // namespace symhom::hs

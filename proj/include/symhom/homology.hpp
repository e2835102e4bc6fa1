#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symhom/chain_complex.hpp"
#include "symhom/linalg.hpp"

namespace symhom::homology
{

struct HomologyOptions
{
    // Over Z, compute the Smith form of d_{i+1}. Without it only ranks over Q are computed.
    bool torsion = true;
    // Explicit cycles over Q representing a basis of H_i.
    bool basis = false;
    bool use_cache = true;
};

struct HomologyEntry
{
    int degree = 0;
    std::size_t betti = 0;
    std::vector<Integer> torsion;
    // Over Z: the Smith form of d_{i+1} is all ones. Over a field: always true.
    bool certified_torsion_free = false;
    // How the ranks were obtained: "smith", "exact", "multimodular" or "mod p".
    std::string rank_method;
    bool rank_certified = false;
    std::vector<std::vector<Rational>> basis;

    nlohmann::json to_json() const;
};

HomologyEntry homology(const ChainComplexDesc& C, int i, HomologyOptions options = {});
// Every degree of the window; for bounded complexes the Euler characteristic is checked.
std::vector<HomologyEntry> homology_all(const ChainComplexDesc& C, HomologyOptions options = {});

struct Polynomial
{
    // coefficients[i] is the coefficient of t^i.
    std::vector<std::size_t> coefficients;
    // "7t^2+6t^3"; "1" for the constant 1, "0" for zero.
    std::string to_string() const;
    friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

Polynomial poincare_polynomial(const std::vector<HomologyEntry>& entries);

// Matrix over Q of the map induced on H_i (in the basis returned with
// HomologyOptions::basis) by phi : C_i -> C_i. phi must send cycles to
// cycles and boundaries to boundaries; otherwise DomainError names the
// first failing basis vector.
std::vector<std::vector<Rational>> induced_map_on_homology(const ChainComplexDesc& C, int i,
                                                           const linalg::SparseExactMatrix& phi);
// Same for phi : source_i -> target_i; rows index the target classes.
std::vector<std::vector<Rational>> induced_map_between(const ChainComplexDesc& source, const ChainComplexDesc& target,
                                                       int i, const linalg::SparseExactMatrix& phi);

// Traces on H_i of maps given on C_i and C_{i+1} (commuting with d),
// computed modulo a large prime and lifted to (-q/2, q/2]. Exact when H_i
// and H_{i-1} have no q-torsion and |trace| < q/2.
struct TraceInput
{
    linalg::SparseExactMatrix on_degree;
    linalg::SparseExactMatrix on_degree_above;
};
std::vector<std::int64_t> homology_traces(const ChainComplexDesc& C, int i, const std::vector<TraceInput>& maps,
                                          std::uint32_t prime = 2147483629u);

// Rank of d_i, memoized per complex.
linalg::RankReport boundary_rank(const ChainComplexDesc& C, int i);

void clear_homology_cache();

} // namespace symhom::homology

#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "symhom/common.hpp"
#include "symhom/deltas.hpp"
#include "symhom/homology.hpp"

namespace symhom::reps
{

// Parts in descending order.
using Partition = std::vector<int>;

// All partitions of n in lexicographically ascending order of their part
// sequences: 1+1+1, 2+1, 3.
std::vector<Partition> partitions(int n);

// "3+1+1"
std::string partition_string(const Partition& lambda);
Partition parse_partition(const std::string& text);

// Size of the centralizer of an element of cycle type lambda.
Integer centralizer_order(const Partition& lambda);
Integer class_size(const Partition& lambda);

// Cycles of lengths lambda_1 >= lambda_2 >= ... on consecutive blocks
// 0..lambda_1-1, lambda_1..., each sending x to x+1 within its block.
deltas::Permutation class_representative(const Partition& lambda);
Partition cycle_type(const deltas::Permutation& g);

struct ClassFunction
{
    int n = 0;
    std::map<Partition, Rational> values;

    Rational at(const Partition& lambda) const;
    Rational degree() const { return at(Partition(static_cast<std::size_t>(n), 1)); }

    // {"n": 3, "values": {"1+1+1": 2, "2+1": 0, "3": 2}}
    nlohmann::json to_json() const;
    static ClassFunction from_json(const nlohmann::json& j);

    friend bool operator==(const ClassFunction&, const ClassFunction&) = default;
};

// (1/n!) sum over classes |C| a(C) b(C); characters of Sigma_n are real.
Rational inner_product(const ClassFunction& a, const ClassFunction& b);

// Murnaghan-Nakayama value chi^lambda(mu).
Integer character_value(const Partition& lambda, const Partition& mu);
std::map<Partition, ClassFunction> irreducible_characters(int n);

Rational multiplicity(const ClassFunction& chi, const Partition& lambda);

// Character of Sigma_{p+1} on H_i(Sym^(p)) ⊗ Q, one trace per class.
// Modular traces are exact when H_i and H_{i-1} have no torsion at the
// working prime; the exact method traces induced_map_on_homology over Q.
enum class TraceMethod
{
    Modular,
    Exact
};
ClassFunction homology_character(int p, int i, TraceMethod method = TraceMethod::Modular);
// Trace on H_i(Sym^(p)) of arbitrary permutations of {0..p}.
std::vector<std::int64_t> homology_traces_at(int p, int i, const std::vector<deltas::Permutation>& g);

// Character of Sigma_{p+1} on the chain group Sym^(p)_i.
ClassFunction chain_character(int p, int i);

// Ind from the cyclic group generated by the (p+1)-cycle of the character
// sending the generator to (-1)^p.
ClassFunction induced_cyclic_character(int p);

// H_i(Sigma_n; ring) from the normalized bar complex. n <= 4, i <= 3.
homology::HomologyEntry group_homology_small(int n, int i, RingSpec ring);

} // namespace symhom::reps

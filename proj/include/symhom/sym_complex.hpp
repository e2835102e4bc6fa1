#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symhom/chain_complex.hpp"
#include "symhom/deltas.hpp"
#include "symhom/homology.hpp"
#include "symhom/linalg.hpp"

// The complexes Sym^(p)_*: degree i is spanned by tensor words
// Z_0 (x) ... (x) Z_{p-i} in the generators z_0..z_p, each used once, modulo
// block swaps with sign (-1)^{(|Z|+1)(|W|+1)}.
namespace symhom::sym
{

inline constexpr int kMaxP = 11;

struct SymBasisElement
{
    int p = 0;
    std::vector<std::vector<int>> blocks;

    int degree() const { return p + 1 - static_cast<int>(blocks.size()); }
    // "[2,0,3][1,4]"
    std::string to_string() const;
    static SymBasisElement parse(const std::string& text);

    friend auto operator<=>(const SymBasisElement&, const SymBasisElement&) = default;
};

// Packed word + cut positions. Letter k sits in a nibble above the 11 cut
// bits; bit g of the low part means a block ends after letter g.
using Code = std::uint64_t;

Code encode(const SymBasisElement& x);
SymBasisElement decode(int p, Code code);

// Koszul sign of sorting the blocks by their minimum, and the sorted element.
// Throws DomainError unless the blocks use each of 0..p exactly once.
std::pair<int, SymBasisElement> canonicalize(int p, std::vector<std::vector<int>> blocks);
// Same on a raw packed word.
std::pair<int, Code> canonicalize_code(int p, Code code);

// (p+1)! C(p, p-i) / (p-i+1)!
std::uint64_t basis_count(int p, int i);

// Sorted canonical codes of degree i; shared and cached.
class SymBasis
{
public:
    SymBasis(int p, int i);
    int p() const { return p_; }
    int degree() const { return i_; }
    std::size_t size() const { return codes_.size(); }
    Code code(std::size_t k) const { return codes_[k]; }
    const std::vector<Code>& codes() const { return codes_; }
    std::optional<std::size_t> index_of(Code code) const;
    SymBasisElement element(std::size_t k) const { return decode(p_, codes_[k]); }

private:
    int p_;
    int i_;
    std::vector<Code> codes_;
};

const SymBasis& basis(int p, int i);
std::vector<SymBasisElement> enumerate_basis(int p, int i);

// A chain in Sym^(p)_i with exact coefficients over canonical codes.
struct SymChain
{
    int p = 0;
    int degree = 0;
    std::map<Code, Rational> terms;

    static SymChain zero(int p, int degree) { return {p, degree, {}}; }
    // The basis element after canonicalization (sign included).
    static SymChain from_blocks(int p, std::vector<std::vector<int>> blocks, const Rational& coeff = 1);
    static SymChain parse(int p, const std::string& text);

    bool is_zero() const { return terms.empty(); }
    void add(Code canonical, const Rational& coeff);
    SymChain& operator+=(const SymChain& other);
    SymChain& operator-=(const SymChain& other);
    friend SymChain operator+(SymChain a, const SymChain& b) { return a += b; }
    friend SymChain operator-(SymChain a, const SymChain& b) { return a -= b; }
    friend SymChain operator*(const Rational& c, const SymChain& a);
    friend bool operator==(const SymChain&, const SymChain&) = default;

    // Coordinates in basis(p, degree).
    std::vector<Rational> coordinates() const;
    static SymChain from_coordinates(int p, int degree, const std::vector<Rational>& x);

    // "[0,1] - [1,0]"
    std::string to_string() const;
};

// Alternating sum of the faces splitting one block in two, faces numbered
// left to right across the whole element.
SymChain boundary(const SymChain& c);

// Relabels z_r to z_{g(r)}.
SymChain sigma_act(const deltas::Permutation& g, const SymChain& c);

// sum_k (-1)^{kp} z_k z_{k+1} ... z_{k-1}
SymChain b_cycle(int p);

// Y (x) Z' where Z' shifts every generator of Z by p+1.
SymChain box_product(const SymChain& Y, const SymChain& Z);

// The permutation sigma with Y box Z = (-1)^{ij} sigma (Z box Y) for Y in
// Sym^(p), Z in Sym^(q): 0..q go to p+1..p+q+1 and q+1..p+q+1 to 0..p.
deltas::Permutation twist_permutation(int p, int q);

// d_i : Sym^(p)_i -> Sym^(p)_{i-1} in the sorted bases.
linalg::SparseExactMatrix boundary_matrix(int p, int i);
// Matrix of g acting on Sym^(p)_i.
linalg::SparseExactMatrix action_matrix(const deltas::Permutation& g, int p, int i);

homology::ChainComplexDesc build_complex(int p, RingSpec ring);

// Rank of d_i modulo an odd prime, summed over the character blocks of the
// subgroup generated by (0 1), (2 3), ..., which commutes with d.
std::size_t equivariant_rank_mod_p(int p, int i, std::uint32_t prime);
// Betti numbers over Q from equivariant ranks at two large primes; no
// torsion information. rank_certified records whether the primes agree.
std::vector<homology::HomologyEntry> rational_homology_by_symmetry(int p);

} // namespace symhom::sym

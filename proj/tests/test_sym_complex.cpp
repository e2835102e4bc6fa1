#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "symhom/sym_complex.hpp"

using namespace symhom;
using namespace symhom::sym;
using deltas::Permutation;

namespace
{

using Blocks = std::vector<std::vector<int>>;

// Bubble sort by block minimum, one adjacent swap at a time.
std::pair<int, Blocks> oracle_canonical(Blocks blocks)
{
    int sign = 1;
    for (std::size_t pass = 0; pass < blocks.size(); ++pass)
        for (std::size_t k = 0; k + 1 < blocks.size(); ++k) {
            auto& a = blocks[k];
            auto& b = blocks[k + 1];
            if (*std::min_element(a.begin(), a.end()) > *std::min_element(b.begin(), b.end())) {
                if ((a.size() + 1) * (b.size() + 1) % 2)
                    sign = -sign;
                std::swap(a, b);
            }
        }
    return {sign, blocks};
}

// All ways to cut a word into ordered nonempty blocks.
void all_blockings(const std::vector<int>& word, std::vector<Blocks>& out)
{
    const int gaps = static_cast<int>(word.size()) - 1;
    for (int mask = 0; mask < (1 << gaps); ++mask) {
        Blocks b{{word[0]}};
        for (int g = 0; g < gaps; ++g) {
            if ((mask >> g) & 1)
                b.push_back({});
            b.back().push_back(word[static_cast<std::size_t>(g + 1)]);
        }
        out.push_back(b);
    }
}

std::map<Blocks, Rational> oracle_boundary(int p, const Blocks& x)
{
    std::map<Blocks, Rational> out;
    int face = 0;
    for (std::size_t b = 0; b < x.size(); ++b)
        for (std::size_t cut = 1; cut < x[b].size(); ++cut) {
            Blocks y;
            for (std::size_t c = 0; c < x.size(); ++c) {
                if (c != b) {
                    y.push_back(x[c]);
                    continue;
                }
                y.emplace_back(x[b].begin(), x[b].begin() + static_cast<std::ptrdiff_t>(cut));
                y.emplace_back(x[b].begin() + static_cast<std::ptrdiff_t>(cut), x[b].end());
            }
            auto [sign, canonical] = oracle_canonical(y);
            out[canonical] += (face % 2 ? -sign : sign);
            ++face;
        }
    (void)p;
    std::erase_if(out, [](auto& kv) { return kv.second == 0; });
    return out;
}

Permutation random_permutation(int size, std::mt19937& rng)
{
    std::vector<int> images(static_cast<std::size_t>(size));
    std::iota(images.begin(), images.end(), 0);
    std::shuffle(images.begin(), images.end(), rng);
    return Permutation(images);
}

SymChain random_chain(int p, int i, std::mt19937& rng)
{
    const auto& b = basis(p, i);
    SymChain c = SymChain::zero(p, i);
    for (int k = 0; k < 4 && b.size(); ++k)
        c.add(b.code(rng() % b.size()), static_cast<int>(rng() % 7) - 3);
    return c;
}

} // namespace

TEST_CASE("canonical forms and Koszul signs")
{
    auto [s1, x1] = canonicalize(1, {{0}, {1}});
    CHECK(s1 == 1);
    CHECK(x1.to_string() == "[0][1]");
    auto [s2, x2] = canonicalize(4, {{1, 4}, {2, 0, 3}});
    CHECK(s2 == 1);
    CHECK(x2.to_string() == "[2,0,3][1,4]");
    auto [s3, x3] = canonicalize(3, {{2, 3}, {0, 1}});
    CHECK(s3 == -1);
    CHECK(x3.to_string() == "[0,1][2,3]");
    CHECK_THROWS_AS(canonicalize(2, {{0, 1}}), DomainError);
    CHECK_THROWS_AS(canonicalize(2, {{0, 1}, {1, 2}}), DomainError);
    CHECK(SymBasisElement::parse("[2,0,3][1,4]").blocks == Blocks{{2, 0, 3}, {1, 4}});
    CHECK_THROWS_AS(SymBasisElement::parse("[2,0"), ValidationError);

    // agrees with adjacent-swap bubble sort on every blocking of every word, p <= 4
    for (int p = 0; p <= 4; ++p) {
        std::vector<int> word(static_cast<std::size_t>(p + 1));
        std::iota(word.begin(), word.end(), 0);
        do {
            std::vector<Blocks> all;
            all_blockings(word, all);
            for (auto& b : all) {
                auto expected = oracle_canonical(b);
                auto got = canonicalize(p, b);
                REQUIRE(got.first == expected.first);
                REQUIRE(got.second.blocks == expected.second);
                // idempotent
                auto again = canonicalize(p, got.second.blocks);
                REQUIRE(again.first == 1);
                REQUIRE(again.second == got.second);
            }
        } while (std::next_permutation(word.begin(), word.end()));
    }
}

TEST_CASE("basis enumeration matches the count formula and brute force")
{
    CHECK(enumerate_basis(1, 1).size() == 2);
    CHECK(enumerate_basis(2, 0).size() == 1);
    CHECK(enumerate_basis(3, 2).size() == 36);
    CHECK(enumerate_basis(3, 4).empty());
    CHECK(enumerate_basis(3, -1).empty());
    CHECK(basis_count(5, 3) == 1200);
    for (int p = 0; p <= 6; ++p)
        for (int i = 0; i <= p; ++i)
            REQUIRE(basis(p, i).size() == basis_count(p, i));
    for (int p = 0; p <= 4; ++p) {
        std::map<int, std::set<Blocks>> canonical;
        std::vector<int> word(static_cast<std::size_t>(p + 1));
        std::iota(word.begin(), word.end(), 0);
        do {
            std::vector<Blocks> all;
            all_blockings(word, all);
            for (auto& b : all) {
                int degree = p + 1 - static_cast<int>(b.size());
                canonical[degree].insert(oracle_canonical(b).second);
            }
        } while (std::next_permutation(word.begin(), word.end()));
        for (int i = 0; i <= p; ++i) {
            auto listed = enumerate_basis(p, i);
            std::set<Blocks> got;
            for (auto& x : listed)
                got.insert(x.blocks);
            REQUIRE(got == canonical[i]);
            REQUIRE(got.size() == listed.size());
        }
    }
}

TEST_CASE("no basis element is identified with its own negative")
{
    // a relation x = -x would need a nontrivial reordering of pairwise distinct blocks back to x
    for (int p = 0; p <= 6; ++p)
        for (int i = 0; i <= p; ++i)
            for (auto code : basis(p, i).codes()) {
                auto [sign, c] = canonicalize_code(p, code);
                REQUIRE(sign == 1);
                REQUIRE(c == code);
            }
}

TEST_CASE("boundary")
{
    auto x = SymChain::from_blocks(4, {{2, 0, 3}, {1, 4}});
    auto expected = SymChain::parse(4, "[2][0,3][1,4] - [2,0][3][1,4] + [2,0,3][1][4]");
    CHECK(boundary(x) == expected);
    CHECK(boundary(SymChain::parse(1, "[0,1] - [1,0]")).is_zero());
    CHECK(SymChain::from_blocks(1, {{1}, {0}}) == SymChain::from_blocks(1, {{0}, {1}}));
    CHECK(boundary(SymChain::from_blocks(2, {{0}, {1}, {2}})).is_zero());

    for (int p = 0; p <= 4; ++p)
        for (int i = 1; i <= p; ++i)
            for (auto& e : enumerate_basis(p, i)) {
                std::map<Blocks, Rational> got;
                for (auto& [code, c] : boundary(SymChain::from_blocks(p, e.blocks)).terms)
                    got[decode(p, code).blocks] = c;
                REQUIRE(got == oracle_boundary(p, e.blocks));
            }
    for (int p = 0; p <= 5; ++p)
        for (int i = 2; i <= p; ++i)
            for (auto& e : enumerate_basis(p, i))
                REQUIRE(boundary(boundary(SymChain::from_blocks(p, e.blocks))).is_zero());
}

TEST_CASE("boundary matrices square to zero for p = 6")
{
    for (int i = 2; i <= 6; ++i)
        REQUIRE((boundary_matrix(6, i - 1) * boundary_matrix(6, i)).is_zero());
}

TEST_CASE("symmetric group action")
{
    auto z01 = SymChain::from_blocks(1, {{0, 1}});
    CHECK(sigma_act(Permutation::identity(2), z01) == z01);
    CHECK(sigma_act(Permutation({1, 0}), z01) == SymChain::from_blocks(1, {{1, 0}}));
    CHECK_THROWS_AS(sigma_act(Permutation::identity(3), z01), DomainError);

    std::mt19937 rng(13);
    for (int p = 0; p <= 4; ++p)
        for (int trial = 0; trial < 6; ++trial) {
            auto g = random_permutation(p + 1, rng), h = random_permutation(p + 1, rng);
            for (int i = 0; i <= p; ++i)
                for (auto& e : enumerate_basis(p, i)) {
                    auto x = SymChain::from_blocks(p, e.blocks);
                    REQUIRE(sigma_act(g, sigma_act(h, x)) == sigma_act(g * h, x));
                    REQUIRE(boundary(sigma_act(g, x)) == sigma_act(g, boundary(x)));
                }
        }
    // matrices agree with the chain-level action
    auto g = Permutation::from_one_line("[2031]");
    auto M = action_matrix(g, 3, 2);
    auto x = random_chain(3, 2, rng);
    CHECK(SymChain::from_coordinates(3, 2, M.apply(x.coordinates())) == sigma_act(g, x));
}

TEST_CASE("the cycles b_p")
{
    CHECK(b_cycle(0) == SymChain::from_blocks(0, {{0}}));
    CHECK(b_cycle(1) == SymChain::parse(1, "[0,1] - [1,0]"));
    CHECK(b_cycle(2) == SymChain::parse(2, "[0,1,2] + [1,2,0] + [2,0,1]"));
    for (int p = 0; p <= 6; ++p) {
        REQUIRE(b_cycle(p).terms.size() == static_cast<std::size_t>(p + 1));
        REQUIRE(boundary(b_cycle(p)).is_zero());
    }
}

TEST_CASE("box product")
{
    auto z0 = SymChain::from_blocks(0, {{0}});
    CHECK(box_product(z0, z0) == SymChain::from_blocks(1, {{0}, {1}}));
    CHECK(box_product(b_cycle(1), b_cycle(0)) == SymChain::parse(2, "[0,1][2] - [1,0][2]"));
    CHECK(twist_permutation(1, 0).images() == std::vector<int>{2, 0, 1});

    std::mt19937 rng(19);
    int trials = 0;
    while (trials < 100) {
        int p = static_cast<int>(rng() % 4), q = static_cast<int>(rng() % 4);
        if (p + q > 4)
            continue;
        int i = static_cast<int>(rng() % (p + 1)), j = static_cast<int>(rng() % (q + 1));
        auto Y = random_chain(p, i, rng), Z = random_chain(q, j, rng);
        auto lhs = boundary(box_product(Y, Z));
        auto rhs = box_product(boundary(Y), Z) + Rational(i % 2 ? -1 : 1) * box_product(Y, boundary(Z));
        REQUIRE(lhs == rhs);
        auto twisted = Rational((i * j) % 2 ? -1 : 1) * sigma_act(twist_permutation(p, q), box_product(Z, Y));
        REQUIRE(box_product(Y, Z) == twisted);
        ++trials;
    }
}

TEST_CASE("complexes Sym^(p)")
{
    auto c1 = build_complex(1, RingSpec::integers());
    CHECK(c1.rank(0) == 1);
    CHECK(c1.rank(1) == 2);
    auto d1 = c1.boundary(1);
    CHECK(d1->at(0, 0) == 1);
    CHECK(d1->at(0, 1) == 1);
    auto c2 = build_complex(2, RingSpec::integers());
    CHECK(c2.rank(1) == 6);
    CHECK(c2.rank(2) == 6);
    long euler = 0;
    for (int i = 0; i <= 2; ++i)
        euler += (i % 2 ? -1 : 1) * static_cast<long>(c2.rank(i));
    CHECK(euler == 1);
    CHECK(linalg::rank(*c2.boundary(1), RingSpec::integers()) == 1);
    CHECK(build_complex(5, RingSpec::integers()).rank(3) == 1200);
    for (int p = 0; p <= 5; ++p)
        CHECK_NOTHROW(build_complex(p, RingSpec::integers()).verify());
    auto j = c1.to_json();
    CHECK(j["ranks"] == nlohmann::json::array({1, 2}));
    CHECK(j["boundaries"][0]["entries"].size() == 2);
    CHECK(c1.label(1, 0) == "[0,1]");
    CHECK(c1.boundary(2)->cols() == 0);
}

TEST_CASE("block ranks under the transposition subgroup")
{
    const auto prime = linalg::large_primes(1)[0];
    for (int p = 1; p <= 6; ++p)
        for (int i = 1; i <= p; ++i)
            CHECK(equivariant_rank_mod_p(p, i, prime) == linalg::rank_mod_p(boundary_matrix(p, i), prime));
    CHECK(equivariant_rank_mod_p(4, 3, 101) == linalg::rank_mod_p(boundary_matrix(4, 3), 101));
    CHECK_THROWS_AS(equivariant_rank_mod_p(4, 3, 2), DomainError);
    auto entries = rational_homology_by_symmetry(5);
    REQUIRE(entries.size() == 6);
    CHECK(homology::poincare_polynomial(entries).to_string() == "t^3+272t^4+120t^5");
    for (auto& e : entries)
        CHECK(e.rank_certified);
}

#include "doctest.h"

#include "symhom/homology.hpp"
#include "symhom/sym_complex.hpp"

using namespace symhom;
namespace hom = symhom::homology;
using hom::ChainComplexDesc;
using hom::homology_all;
using hom::poincare_polynomial;
using hom::induced_map_on_homology;
using hom::TraceInput;
using hom::homology_traces;
using deltas::Permutation;
using linalg::SparseExactMatrix;

namespace
{

using Matrix = std::vector<std::vector<Rational>>;

Matrix multiply(const Matrix& a, const Matrix& b)
{
    Matrix c(a.size(), std::vector<Rational>(b.empty() ? 0 : b[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            if (a[i][k] != 0)
                for (std::size_t j = 0; j < b[0].size(); ++j)
                    c[i][j] += a[i][k] * b[k][j];
    return c;
}

Matrix identity(std::size_t n)
{
    Matrix m(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        m[i][i] = 1;
    return m;
}

Matrix power(const Matrix& a, int k)
{
    Matrix r = identity(a.size());
    for (int j = 0; j < k; ++j)
        r = multiply(r, a);
    return r;
}

Rational trace(const Matrix& m)
{
    Rational t = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        t += m[i][i];
    return t;
}

ChainComplexDesc two_term(std::int64_t d)
{
    std::vector<linalg::SparseVector<std::int64_t>> cols{{}};
    if (d)
        cols[0] = {{0, d}};
    return ChainComplexDesc::from_matrices("two_term", RingSpec::integers(), 0, {1, 1},
                                           {SparseExactMatrix::from_int_columns(1, cols)});
}

} // namespace

TEST_CASE("small complexes")
{
    auto zero = two_term(0);
    CHECK(hom::homology(zero, 0).betti == 1);
    CHECK(hom::homology(zero, 1).betti == 1);
    auto two = two_term(2);
    auto h0 = hom::homology(two, 0);
    CHECK(h0.betti == 0);
    CHECK(h0.torsion == std::vector<Integer>{2});
    CHECK_FALSE(h0.certified_torsion_free);
    CHECK(hom::homology(two, 1).betti == 0);
    CHECK(h0.to_json()["torsion"] == nlohmann::json::array({2}));

    auto over_f2 = ChainComplexDesc::from_matrices("two_term_f2", RingSpec::prime_field(2), 0, {1, 1},
                                                   {SparseExactMatrix::from_int_columns(1, {{{0, 2}}})});
    CHECK(hom::homology(over_f2, 0).betti == 1);
    CHECK(hom::homology(over_f2, 1).betti == 1);
    CHECK(hom::homology(over_f2, 0).torsion.empty());

    ChainComplexDesc truncated("window", RingSpec::integers(), 0, {1, 1},
                               [](int) { return SparseExactMatrix(1, 1); }, false);
    CHECK(hom::homology(truncated, 0).betti == 1);
    CHECK_THROWS_WITH_AS(hom::homology(truncated, 1), doctest::Contains("truncation too small"), TruncationError);
    CHECK_THROWS_AS(ChainComplexDesc::from_matrices("bad", RingSpec::integers(), 0, {1, 2},
                                                    {SparseExactMatrix(1, 1)}),
                    DomainError);
}

TEST_CASE("Sym^(p) homology for small p")
{
    auto h1 = homology_all(sym::build_complex(1, RingSpec::integers()));
    CHECK(h1[0].betti == 0);
    CHECK(h1[1].betti == 1);
    CHECK(h1[1].certified_torsion_free);

    auto h3 = homology_all(sym::build_complex(3, RingSpec::integers()));
    CHECK(h3[2].betti == 7);
    CHECK(h3[3].betti == 6);
    for (auto& e : h3)
        CHECK(e.certified_torsion_free);

    CHECK(poincare_polynomial(homology_all(sym::build_complex(0, RingSpec::integers()))).to_string() == "1");
    CHECK(poincare_polynomial(h1).to_string() == "t");
    CHECK(poincare_polynomial(homology_all(sym::build_complex(2, RingSpec::integers()))).to_string() == "t+2t^2");
    CHECK(poincare_polynomial(h3).to_string() == "7t^2+6t^3");
    CHECK(poincare_polynomial(homology_all(sym::build_complex(4, RingSpec::integers()))).to_string()
          == "43t^3+24t^4");
    CHECK(poincare_polynomial(homology_all(sym::build_complex(3, RingSpec::rationals()))).to_string()
          == "7t^2+6t^3");
    CHECK(poincare_polynomial(homology_all(sym::build_complex(3, RingSpec::prime_field(3)))).to_string()
          == "7t^2+6t^3");
}

TEST_CASE("homology bases are independent cycles modulo boundaries")
{
    for (int p = 1; p <= 4; ++p) {
        auto C = sym::build_complex(p, RingSpec::integers());
        for (int i = 0; i <= p; ++i) {
            auto e = hom::homology(C, i, {.torsion = false, .basis = true});
            REQUIRE(e.basis.size() == e.betti);
            std::vector<linalg::SparseVector<Rational>> cols;
            for (auto& z : e.basis) {
                for (auto& x : C.boundary(i)->apply(z))
                    REQUIRE(x == 0);
                linalg::SparseVector<Rational> v;
                for (std::size_t k = 0; k < z.size(); ++k)
                    if (z[k] != 0)
                        v.emplace_back(static_cast<std::uint32_t>(k), z[k]);
                cols.push_back(v);
            }
            auto above = C.boundary(i + 1);
            std::size_t b = linalg::rank(*above, RingSpec::rationals());
            for (std::size_t j = 0; j < above->cols(); ++j) {
                linalg::SparseVector<Rational> v;
                for (auto k = above->column_begin(j); k < above->column_end(j); ++k)
                    v.emplace_back(above->row_of(k), above->value(k));
                cols.push_back(v);
            }
            auto joint = SparseExactMatrix::from_columns(C.rank(i), cols);
            REQUIRE(linalg::rank(joint, RingSpec::rationals()) == b + e.betti);
        }
    }
}

TEST_CASE("induced maps on homology")
{
    auto C1 = sym::build_complex(1, RingSpec::integers());
    auto id = induced_map_on_homology(C1, 1, SparseExactMatrix::identity(2));
    CHECK(id == identity(1));
    auto swap = induced_map_on_homology(C1, 1, sym::action_matrix(Permutation({1, 0}), 1, 1));
    CHECK(swap == Matrix{{Rational(-1)}});

    // a map that is not a chain map: kills one basis word of Sym^(1)_1 only
    auto broken = SparseExactMatrix::from_int_columns(2, {{{0, 1}}, {}});
    CHECK_THROWS_WITH_AS(induced_map_on_homology(C1, 1, broken), doctest::Contains("not a chain map"),
                         DomainError);

    // Coxeter relations for the adjacent transpositions of Sigma_4 on H_2(Sym^(3))
    auto C3 = sym::build_complex(3, RingSpec::integers());
    std::vector<Matrix> s;
    for (int k = 0; k < 3; ++k) {
        std::vector<int> images{0, 1, 2, 3};
        std::swap(images[static_cast<std::size_t>(k)], images[static_cast<std::size_t>(k + 1)]);
        s.push_back(induced_map_on_homology(C3, 2, sym::action_matrix(Permutation(images), 3, 2)));
    }
    auto I7 = identity(7);
    for (auto& m : s)
        CHECK(multiply(m, m) == I7);
    CHECK(power(multiply(s[0], s[1]), 3) == I7);
    CHECK(power(multiply(s[1], s[2]), 3) == I7);
    CHECK(power(multiply(s[0], s[2]), 2) == I7);

    // functoriality
    auto g = Permutation::from_one_line("[1302]"), h = Permutation::from_one_line("[2013]");
    auto Mg = induced_map_on_homology(C3, 2, sym::action_matrix(g, 3, 2));
    auto Mh = induced_map_on_homology(C3, 2, sym::action_matrix(h, 3, 2));
    auto Mgh = induced_map_on_homology(C3, 2, sym::action_matrix(g * h, 3, 2));
    CHECK(Mgh == multiply(Mg, Mh));
}

TEST_CASE("modular traces agree with traces of induced maps")
{
    for (int p = 2; p <= 4; ++p) {
        auto C = sym::build_complex(p, RingSpec::integers());
        std::vector<Permutation> perms{Permutation::identity(p + 1)};
        std::vector<int> cycle(static_cast<std::size_t>(p + 1));
        for (int k = 0; k <= p; ++k)
            cycle[static_cast<std::size_t>(k)] = (k + 1) % (p + 1);
        perms.emplace_back(cycle);
        std::vector<int> transposition(static_cast<std::size_t>(p + 1));
        for (int k = 0; k <= p; ++k)
            transposition[static_cast<std::size_t>(k)] = k;
        std::swap(transposition[0], transposition[1]);
        perms.emplace_back(transposition);
        for (int i = 0; i <= p; ++i) {
            std::vector<TraceInput> maps;
            for (auto& g : perms)
                maps.push_back({sym::action_matrix(g, p, i),
                                i < p ? sym::action_matrix(g, p, i + 1) : SparseExactMatrix(0, 0)});
            auto traces = homology_traces(C, i, maps);
            for (std::size_t k = 0; k < perms.size(); ++k) {
                auto M = induced_map_on_homology(C, i, maps[k].on_degree);
                REQUIRE(Rational(traces[k]) == trace(M));
            }
        }
    }
    CHECK(is_prime(2147483629u));
}

TEST_CASE("Euler characteristics agree for Sym^(p), p <= 5")
{
    for (int p = 0; p <= 5; ++p) {
        auto C = sym::build_complex(p, RingSpec::rationals());
        // homology_all raises on mismatch
        CHECK_NOTHROW(homology_all(C));
    }
}

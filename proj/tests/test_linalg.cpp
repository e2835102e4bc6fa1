#include "doctest.h"

#include <random>
#include <sstream>

#include "symhom/linalg.hpp"

using namespace symhom;
using namespace symhom::linalg;

namespace
{

using Dense = std::vector<std::vector<Rational>>;

Dense random_dense(std::mt19937& rng, std::size_t r, std::size_t c, double density, int range)
{
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> v(-range, range);
    Dense a(r, std::vector<Rational>(c));
    for (auto& row : a)
        for (auto& x : row)
            if (u(rng) < density)
                x = v(rng);
    return a;
}

SparseExactMatrix to_sparse(const Dense& a, std::size_t cols)
{
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (a[i][j] != 0)
                t.push_back({i, j, a[i][j]});
    return SparseExactMatrix::from_triplets(a.size(), cols, t);
}

// Textbook Gaussian elimination over Q.
std::size_t oracle_rank(Dense a)
{
    std::size_t rank = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
        std::size_t p = rank;
        while (p < a.size() && a[p][c] == 0)
            ++p;
        if (p == a.size())
            continue;
        std::swap(a[p], a[rank]);
        for (std::size_t i = rank + 1; i < a.size(); ++i) {
            Rational f = a[i][c] / a[rank][c];
            for (std::size_t k = c; k < cols; ++k)
                a[i][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

std::size_t oracle_rank_mod(const Dense& a, std::int64_t p)
{
    std::vector<std::vector<std::int64_t>> m;
    for (auto& row : a) {
        std::vector<std::int64_t> r;
        for (auto& x : row)
            r.push_back(static_cast<std::int64_t>(reduce_mod(x, static_cast<std::uint32_t>(p))));
        m.push_back(r);
    }
    std::size_t rank = 0;
    const std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0)
            ++piv;
        if (piv == m.size())
            continue;
        std::swap(m[piv], m[rank]);
        std::int64_t inv = 1, base = m[rank][c], e = p - 2;
        while (e) {
            if (e & 1)
                inv = inv * base % p;
            base = base * base % p;
            e >>= 1;
        }
        for (std::size_t i = rank + 1; i < m.size(); ++i) {
            std::int64_t f = m[i][c] * inv % p;
            for (std::size_t k = c; k < cols; ++k)
                m[i][k] = ((m[i][k] - f * m[rank][k]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

Integer cofactor_det(const std::vector<std::vector<Integer>>& m)
{
    const std::size_t n = m.size();
    if (n == 0)
        return 1;
    Integer det = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Integer>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Integer> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j)
                    row.push_back(m[i][k]);
            minor.push_back(row);
        }
        Integer term = m[0][j] * cofactor_det(minor);
        det += (j % 2 ? -term : term);
    }
    return det;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out)
{
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

// Invariant factors from determinantal divisors: d_1 ... d_k = gcd of k x k minors.
std::vector<Integer> oracle_invariants(const Dense& a, std::size_t cols)
{
    std::vector<Integer> out;
    Integer previous = 1;
    for (std::size_t k = 1; k <= std::min(a.size(), cols); ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(a.size(), k, 0, cur, rs);
        subsets(cols, k, 0, cur, cs);
        Integer g = 0;
        for (auto& r : rs)
            for (auto& c : cs) {
                std::vector<std::vector<Integer>> m(k, std::vector<Integer>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        m[i][j] = numerator(a[r[i]][c[j]]);
                g = gcd(g, cofactor_det(m));
            }
        if (g == 0)
            break;
        out.push_back(g / previous);
        previous = g;
    }
    return out;
}

} // namespace

TEST_CASE("Smith form of small diagonal and degenerate matrices")
{
    auto d = SparseExactMatrix::from_triplets(2, 2, {{0, 0, 2}, {1, 1, 3}});
    auto s = smith_normal_form(d);
    CHECK(s.diagonal == std::vector<Integer>{1, 6});
    CHECK(s.torsion() == std::vector<Integer>{6});
    CHECK(smith_normal_form(SparseExactMatrix::identity(5)).diagonal == std::vector<Integer>(5, 1));
    CHECK(smith_normal_form(SparseExactMatrix(3, 4)).diagonal.empty());
    CHECK(smith_normal_form(SparseExactMatrix(0, 0)).rank() == 0);
    CHECK(rank_mod_p(d, 2) == 1);
    CHECK(rank_mod_p(d, 3) == 1);
    CHECK(rank_mod_p(d, 5) == 2);
}

TEST_CASE("random 4x4 determinants agree with cofactor expansion")
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_dense(rng, 4, 4, 0.8, 6);
        std::vector<std::vector<Integer>> m(4, std::vector<Integer>(4));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                m[i][j] = numerator(a[i][j]);
        Integer det = abs(cofactor_det(m));
        auto s = smith_normal_form(to_sparse(a, 4));
        Integer prod = s.rank() == 4 ? Integer(1) : Integer(0);
        if (s.rank() == 4)
            for (auto& x : s.diagonal)
                prod *= x;
        REQUIRE(prod == det);
    }
}

TEST_CASE("invariant factors match determinantal divisors")
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
        auto a = random_dense(rng, r, c, 0.6, 4);
        auto expected = oracle_invariants(a, c);
        auto M = to_sparse(a, c);
        REQUIRE(smith_normal_form(M).diagonal == expected);
        auto w = smith_normal_form(M, true);
        REQUIRE(w.diagonal == expected);
        // U M V is diagonal with the invariants
        auto D = (*w.U) * to_dense(M) * (*w.V);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                REQUIRE(D(i, j) == (i == j && i < expected.size() ? expected[i] : Integer(0)));
    }
}

TEST_CASE("rank over Q agrees with Gaussian elimination on random sparse matrices")
{
    std::mt19937 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t r = 1 + rng() % 50, c = 1 + rng() % 50;
        auto a = random_dense(rng, r, c, 0.08 + 0.02 * (trial % 10), 3);
        if (trial % 7 == 0 && r > 2)
            a[r - 1] = a[0]; // force a dependency
        auto M = to_sparse(a, c);
        auto expected = oracle_rank(a);
        REQUIRE(smith_normal_form(M).rank() == expected);
        REQUIRE(rank_exact(M) == expected);
        for (auto p : large_primes(2))
            REQUIRE(rank_mod_p(M, p) == expected);
        REQUIRE(rank(M, RingSpec::rationals()) == expected);
    }
}

TEST_CASE("multimodular rank on a larger matrix")
{
    std::mt19937 rng(23);
    std::vector<Triplet> t;
    // block structure so that the rank is known: 300 independent columns plus 200 sums
    const std::size_t n = 300;
    std::vector<SparseVector<std::int64_t>> cols;
    for (std::size_t j = 0; j < n; ++j) {
        SparseVector<std::int64_t> col{{static_cast<std::uint32_t>(j), 1}};
        for (int k = 0; k < 80; ++k)
            col.emplace_back(static_cast<std::uint32_t>(j + 1 + rng() % (2 * n)), static_cast<int>(rng() % 5) - 2);
        cols.push_back(col);
    }
    for (std::size_t j = 0; j < 200; ++j) {
        SparseVector<std::int64_t> sum;
        for (auto& e : cols[j])
            sum.push_back(e);
        for (auto& e : cols[j + 50])
            sum.emplace_back(e.first, 2 * e.second);
        cols.push_back(sum);
    }
    auto M = SparseExactMatrix::from_int_columns(3 * n + 1, cols);
    REQUIRE(M.nnz() > 20000);
    auto report = rank_report(M, RingSpec::integers());
    CHECK(report.method == "multimodular");
    CHECK(report.certified);
    CHECK(report.rank == n);
    CHECK(report.modular_ranks.size() == 2);
}

TEST_CASE("mod p elimination switches to dense without changing the rank")
{
    std::mt19937 rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_dense(rng, 150, 140, 0.3, 5);
        auto M = to_sparse(a, 140);
        REQUIRE(rank_mod_p(M, 1000003) == oracle_rank_mod(a, 1000003));
        REQUIRE(rank_mod_p(M, 3) == oracle_rank_mod(a, 3));
    }
}

TEST_CASE("solve in span")
{
    auto two = SparseExactMatrix::from_triplets(1, 1, {{0, 0, 2}});
    auto x = solve_in_span(two, {4}, RingSpec::integers());
    REQUIRE(x);
    CHECK((*x)[0] == 2);
    CHECK_FALSE(solve_in_span(two, {3}, RingSpec::integers()));
    auto q = solve_in_span(two, {3}, RingSpec::rationals());
    REQUIRE(q);
    CHECK((*q)[0] == Rational(3, 2));
    auto zero = solve_in_span(two, {0}, RingSpec::integers());
    REQUIRE(zero);
    CHECK((*zero)[0] == 0);
    CHECK_FALSE(solve_in_span(two, {1}, RingSpec::prime_field(2)));

    std::mt19937 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t r = 2 + rng() % 5, c = 1 + rng() % 5;
        auto a = random_dense(rng, r, c, 0.6, 4);
        auto M = to_sparse(a, c);
        std::vector<Rational> y(c);
        for (auto& v : y)
            v = static_cast<int>(rng() % 7) - 3;
        auto b = M.apply(y);
        for (auto ring : {RingSpec::integers(), RingSpec::rationals()}) {
            auto sol = solve_in_span(M, b, ring);
            REQUIRE(sol);
            REQUIRE(M.apply(*sol) == b);
        }
    }
}

TEST_CASE("coordinate format round trip and products")
{
    auto M = SparseExactMatrix::from_triplets(3, 2, {{0, 0, 5}, {2, 1, Rational(-7, 3)}, {1, 0, 1}, {1, 0, -1}});
    CHECK(M.nnz() == 2);
    CHECK(M.at(2, 1) == Rational(-7, 3));
    CHECK(M.at(1, 0) == 0);
    std::stringstream ss;
    M.write_coordinate(ss);
    auto back = SparseExactMatrix::read_coordinate(ss);
    CHECK(back == M);
    CHECK(back.hash() == M.hash());
    CHECK(M.transpose().transpose() == M);
    std::stringstream bad("2 2 3\n1 1 1\n");
    CHECK_THROWS_AS(SparseExactMatrix::read_coordinate(bad), ValidationError);

    auto A = SparseExactMatrix::from_triplets(2, 2, {{0, 1, 1}});
    CHECK((A * A).is_zero());
    auto I = SparseExactMatrix::identity(2);
    CHECK(A * I == A);
    CHECK(M.scaled_to_integers().is_integral());
}

TEST_CASE("incremental echelon against dense oracle")
{
    std::mt19937 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t dim = 3 + rng() % 20;
        IncrementalEchelon<QField> E(dim, QField{});
        IncrementalEchelon<ModP> P(dim, ModP(1000003));
        Dense added;
        for (int k = 0; k < 25; ++k) {
            auto row = random_dense(rng, 1, dim, 0.3, 3)[0];
            if (k % 5 == 4 && !added.empty()) {
                row = added[rng() % added.size()];
                for (std::size_t i = 0; i < dim; ++i)
                    row[i] *= 2;
            }
            SparseVector<Rational> v;
            SparseVector<std::uint32_t> vp;
            for (std::size_t i = 0; i < dim; ++i)
                if (row[i] != 0) {
                    v.emplace_back(static_cast<std::uint32_t>(i), row[i]);
                    vp.emplace_back(static_cast<std::uint32_t>(i), P.field().from_rational(row[i]));
                }
            auto before = oracle_rank(added);
            added.push_back(row);
            bool independent = oracle_rank(added) > before;
            REQUIRE(E.add(v) == independent);
            REQUIRE(P.add(vp) == independent);
            REQUIRE(E.rank() == oracle_rank(added));
        }
        // fully reduced: pivot columns of other rows are zero, reducing any added row gives zero
        for (auto p : E.pivots())
            for (auto& [c, x] : E.row_at_pivot(p))
                REQUIRE_FALSE(E.is_pivot(c));
        for (auto& row : added) {
            SparseVector<Rational> v;
            for (std::size_t i = 0; i < dim; ++i)
                if (row[i] != 0)
                    v.emplace_back(static_cast<std::uint32_t>(i), row[i]);
            REQUIRE(E.reduce(v).empty());
        }
        CHECK(E.pivots().size() + E.free_columns().size() == dim);
    }
}

TEST_CASE("Smith form recovers invariants hidden by unimodular transforms")
{
    std::mt19937 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 12 + rng() % 20;
        // known invariants 1 | 2 | 2 | 6 | 12 ... with the tail zero
        std::vector<Integer> expected{1, 1, 2, 2, 6, 12, 12, 60};
        expected.resize(std::min<std::size_t>(expected.size(), n - 3));
        DenseIntMatrix D(n, n + 2);
        for (std::size_t i = 0; i < expected.size(); ++i)
            D(i, i) = expected[i];
        auto unimodular = [&](std::size_t m) {
            auto P = DenseIntMatrix::identity(m);
            for (int k = 0; k < 3 * static_cast<int>(m); ++k) {
                std::size_t a = rng() % m, b = rng() % m;
                if (a == b)
                    continue;
                int q = static_cast<int>(rng() % 5) - 2;
                for (std::size_t j = 0; j < m; ++j)
                    P(a, j) += q * P(b, j);
            }
            return P;
        };
        auto M = unimodular(n) * D * unimodular(n + 2);
        std::vector<Triplet> t;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n + 2; ++j)
                if (M(i, j) != 0)
                    t.push_back({i, j, Rational(M(i, j))});
        auto S = SparseExactMatrix::from_triplets(n, n + 2, t);
        REQUIRE(smith_normal_form(S).diagonal == expected);
        REQUIRE(smith_dense(M) == expected);
    }
}

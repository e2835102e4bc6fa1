#include "doctest.h"

#include "symhom/hs.hpp"
#include "symhom/symmetric_reps.hpp"

using namespace symhom;
using algebra::Algebra;
using algebra::FiniteBasis;
using algebra::LinComb;

namespace
{

Algebra corpus(const std::string& file) { return Algebra::load(std::string(SYMHOM_DATA_DIR) + "/algebras/" + file); }

using Vec = std::vector<Rational>;

// Dimension of the span of dense vectors by plain Gaussian elimination.
std::size_t span_dimension(std::vector<Vec> rows)
{
    std::size_t rank = 0;
    if (rows.empty())
        return 0;
    const std::size_t n = rows[0].size();
    for (std::size_t c = 0; c < n && rank < rows.size(); ++c) {
        std::size_t p = rank;
        while (p < rows.size() && rows[p][c] == 0)
            ++p;
        if (p == rows.size())
            continue;
        std::swap(rows[rank], rows[p]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r][c] != 0) {
                Rational f = rows[r][c] / rows[rank][c];
                for (std::size_t k = 0; k < n; ++k)
                    rows[r][k] -= f * rows[rank][k];
            }
        ++rank;
    }
    return rank;
}

Vec dense(const LinComb& x, int n)
{
    Vec v(static_cast<std::size_t>(n));
    for (auto& [k, c] : x)
        v[static_cast<std::size_t>(k)] += c;
    return v;
}

Vec mul(const FiniteBasis& B, const Vec& x, int b, bool left)
{
    Vec out(x.size());
    for (int a = 0; a < B.size(); ++a) {
        if (x[static_cast<std::size_t>(a)] == 0)
            continue;
        for (auto& [r, c] : left ? B.multiply(b, a) : B.multiply(a, b))
            out[static_cast<std::size_t>(r)] += x[static_cast<std::size_t>(a)] * c;
    }
    return out;
}

Vec basis_product(const FiniteBasis& B, std::vector<int> word)
{
    Vec x = dense(B.unit(), B.size());
    for (int b : word)
        x = mul(B, x, b, false);
    return x;
}

Vec minus(Vec a, const Vec& b)
{
    for (std::size_t k = 0; k < a.size(); ++k)
        a[k] -= b[k];
    return a;
}

// dim of the two-sided ideal generated by all commutators ab - ba
std::size_t commutator_ideal_dimension(const FiniteBasis& B)
{
    const int n = B.size();
    std::vector<Vec> rows;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Vec c = minus(basis_product(B, {a, b}), basis_product(B, {b, a}));
            for (int x = -1; x < n; ++x)
                for (int y = -1; y < n; ++y) {
                    Vec v = c;
                    if (x >= 0)
                        v = mul(B, v, x, true);
                    if (y >= 0)
                        v = mul(B, v, y, false);
                    rows.push_back(v);
                }
        }
    return span_dimension(rows);
}

// dim of the span of abc - cba, the image of d1
std::size_t symmetric_relations_dimension(const FiniteBasis& B)
{
    const int n = B.size();
    std::vector<Vec> rows;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                rows.push_back(minus(basis_product(B, {a, b, c}), basis_product(B, {c, b, a})));
    return span_dimension(rows);
}

std::size_t additive_commutators_dimension(const FiniteBasis& B)
{
    const int n = B.size();
    std::vector<Vec> rows;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            rows.push_back(minus(basis_product(B, {a, b}), basis_product(B, {b, a})));
    return span_dimension(rows);
}

std::vector<Algebra> finite_corpus()
{
    return {corpus("k.json"), corpus("qz2.json"), corpus("m2.json"), corpus("trunc_poly3.json")};
}

} // namespace

TEST_CASE("partial complexes in degrees 0 and 1")
{
    for (auto& A : finite_corpus()) {
        INFO(A.name());
        auto C = hs::build_prop3_complex(A, RingSpec::rationals());
        auto H = hs::build_hc_low_complex(A, RingSpec::rationals());
        CHECK(((*C.boundary(1)) * (*C.boundary(2))).is_zero());
        CHECK(((*H.boundary(1)) * (*H.boundary(2))).is_zero());

        auto B = A.window(std::nullopt);
        const auto n = static_cast<std::size_t>(B.size());
        auto low = hs::hs_low(A, RingSpec::rationals());
        CHECK(low.h0.betti == n - symmetric_relations_dimension(B));
        // the image of d1 is the ideal generated by commutators
        CHECK(symmetric_relations_dimension(B) == commutator_ideal_dimension(B));
        CHECK(hs::hc_low(A, RingSpec::rationals()).h0.betti == n - additive_commutators_dimension(B));
    }

    auto k = hs::hs_low(corpus("k.json"), RingSpec::integers());
    CHECK(k.h0.betti == 1);
    CHECK(k.h0.torsion.empty());
    CHECK(k.h1.betti == 0);
    CHECK(k.h1.torsion.empty());
    CHECK(hs::hs_low(corpus("m2.json"), RingSpec::rationals()).h0.betti == 0);
    CHECK(hs::hc_low(corpus("m2.json"), RingSpec::rationals()).h0.betti == 1);
    CHECK(hs::hs_low(corpus("qz2.json"), RingSpec::rationals()).h0.betti == 2);
    CHECK(hs::hs_low(corpus("trunc_poly3.json"), RingSpec::rationals()).h0.betti == 3);

    auto xy = Algebra::free_comm_monoid({"x", "y"});
    for (int w = 0; w <= 3; ++w)
        CHECK(hs::hs_low(xy, RingSpec::rationals(), w).h0.betti == static_cast<std::size_t>(w + 1));

    CHECK_THROWS_AS(hs::hs_low(corpus("free_t.json"), RingSpec::integers()), UnsupportedError);
}

TEST_CASE("comparison map")
{
    for (auto& A : finite_corpus()) {
        INFO(A.name());
        auto f = hs::comparison_map(A, RingSpec::rationals());
        auto hc = hs::hc_low(A, RingSpec::rationals());
        auto hsl = hs::hs_low(A, RingSpec::rationals());
        CHECK(f.on_h0.size() == hsl.h0.betti);
        // HC_0 -> HS_0 is a quotient map, so onto
        if (!f.on_h0.empty()) {
            std::vector<Vec> rows = f.on_h0;
            CHECK(span_dimension(rows) == hsl.h0.betti);
            CHECK(rows[0].size() == hc.h0.betti);
        }
    }
    auto k = hs::comparison_map(corpus("k.json"), RingSpec::rationals());
    CHECK(k.on_h0 == std::vector<Vec>{{1}});
    auto m2 = hs::comparison_map(corpus("m2.json"), RingSpec::rationals());
    CHECK(m2.on_h0.empty());
    // for commutative algebras the quotient is an isomorphism
    auto t3 = hs::comparison_map(corpus("trunc_poly3.json"), RingSpec::rationals());
    CHECK(span_dimension(t3.on_h0) == 3);

    auto t = corpus("free_t.json");
    for (int w = 1; w <= 3; ++w) {
        auto f = hs::comparison_map(t, RingSpec::integers(), w);
        REQUIRE(f.on_h0.size() == 1);
        CHECK(f.on_h0[0].size() == 1);
        CHECK(abs(f.on_h0[0][0]) == 1);
    }
}

TEST_CASE("truncated epi complex")
{
    // with I = 0 only the identity chains of [0] survive
    auto k = corpus("k.json");
    auto C = hs::build_lepi_truncated(k, {3, 2, std::nullopt}, RingSpec::integers());
    C.verify();
    CHECK(C.rank(0) == 1);
    CHECK(C.rank(1) == 1);
    CHECK(C.rank(2) == 1);
    CHECK(homology::homology(C, 0).betti == 1);
    CHECK(homology::homology(C, 1).betti == 0);

    // T(t) in weight 2 at m = 2: t^2 at [0] and t (x) t at [1]
    auto t = corpus("free_t.json");
    auto T2 = hs::build_lepi_truncated(t, {2, 1, 2}, RingSpec::integers());
    T2.verify();
    CHECK(T2.rank(0) == 2);
    CHECK(T2.rank(1) == 1 + (deltas::epi_count(1, 0) + deltas::epi_count(1, 1)).convert_to<std::size_t>());

    // HS_0 window of T(t) in weight 1 at m = 2 is k.t
    auto W = hs::build_lepi_truncated(t, {2, 0, 1}, RingSpec::integers());
    CHECK(homology::homology(W, 0).betti == 1);

    CHECK_THROWS_AS(hs::build_lepi_truncated(corpus("m2.json"), {2, 0, std::nullopt}, RingSpec::rationals()),
                    UnsupportedError);
    hs::HsOptions tiny;
    tiny.max_cells = 10;
    CHECK_THROWS_AS(hs::build_lepi_truncated(t, {3, 2, 3}, RingSpec::integers(), tiny), ResourceLimitError);
}

TEST_CASE("reduced computation matches the materialized complex")
{
    auto t = corpus("free_t.json");
    for (int m = 0; m <= 3; ++m)
        for (int w = 1; w <= 4; ++w) {
            auto C = hs::build_lepi_truncated(t, {m, 2, w}, RingSpec::integers());
            for (int i = 0; i <= 1; ++i) {
                INFO("m=" << m << " w=" << w << " i=" << i);
                hs::HsOptions o;
                o.m = m;
                auto direct = homology::homology(C, i);
                auto reduced = hs::hs_degree(t, i, RingSpec::integers(), w, o);
                CHECK(direct.betti == reduced.betti);
                CHECK(direct.torsion == reduced.torsion);
            }
        }
    auto q = corpus("qz2.json");
    for (int m = 0; m <= 3; ++m) {
        auto C = hs::build_lepi_truncated(q, {m, 1, std::nullopt}, RingSpec::rationals());
        for (int i = 0; i <= 1; ++i) {
            hs::HsOptions o;
            o.m = m;
            CHECK(homology::homology(C, i).betti == hs::hs_degree(q, i, RingSpec::rationals(), std::nullopt, o).betti);
        }
    }
}

TEST_CASE("hs_degree against the partial complex")
{
    for (auto file : {"k.json", "qz2.json"}) {
        auto A = corpus(file);
        auto low = hs::hs_low(A, RingSpec::rationals());
        auto h0 = hs::hs_degree(A, 0, RingSpec::rationals());
        auto h1 = hs::hs_degree(A, 1, RingSpec::rationals());
        CHECK(h0.certified);
        CHECK(h1.certified);
        CHECK(h0.method == "lepi");
        CHECK(h0.betti == low.h0.betti);
        CHECK(h1.betti == low.h1.betti);
    }
    auto m2 = corpus("m2.json");
    auto h = hs::hs_degree(m2, 0, RingSpec::rationals());
    CHECK(h.method == "full-bar");
    CHECK(h.betti == 0);
    CHECK(h.m == 2);
    CHECK_THROWS_AS(hs::hs_degree(m2, 1, RingSpec::rationals()), ResourceLimitError);

    auto t3 = corpus("trunc_poly3.json");
    auto g = hs::hs_degree(t3, 0, RingSpec::rationals());
    CHECK(g.betti == 3);
    CHECK(g.weights == std::vector<int>{0, 1, 2});
    CHECK(hs::hs_degree(t3, 0, RingSpec::rationals(), 1).betti == 1);

    CHECK(hs::default_truncation(0) == 2);
    CHECK(hs::default_truncation(1) == 4);
    CHECK(hs::default_truncation(2) == 5);
    CHECK_FALSE(hs::truncation_certified(m2, {3, 1, std::nullopt}));
    CHECK(hs::truncation_certified(corpus("free_t.json"), {2, 5, 3}));
    CHECK_THROWS_AS(hs::hs_degree(corpus("free_t.json"), 0, RingSpec::integers()), UnsupportedError);
}

TEST_CASE("one-variable tensor algebra against group homology")
{
    auto t = corpus("free_t.json");
    for (int w = 1; w <= 4; ++w) {
        INFO("weight " << w);
        auto h0 = hs::hs_degree(t, 0, RingSpec::integers(), w);
        auto h1 = hs::hs_degree(t, 1, RingSpec::integers(), w);
        CHECK(h0.certified);
        CHECK(h1.certified);
        auto g0 = reps::group_homology_small(w, 0, RingSpec::integers());
        auto g1 = reps::group_homology_small(w, 1, RingSpec::integers());
        CHECK(h0.betti == g0.betti);
        CHECK(h0.torsion == g0.torsion);
        CHECK(h1.betti == g1.betti);
        CHECK(h1.torsion == g1.torsion);
        auto low = hs::hs_low(t, RingSpec::integers(), w);
        CHECK(low.h1.torsion == h1.torsion);
    }
    CHECK(hs::hs_degree(t, 1, RingSpec::integers(), 2).torsion == std::vector<Integer>{2});
    CHECK(hs::hs_degree(t, 1, RingSpec::integers(), 3).torsion == std::vector<Integer>{2});
    CHECK(hs::hs_degree(t, 1, RingSpec::prime_field(2), 2).betti == 1);
    CHECK(hs::hs_degree(t, 1, RingSpec::prime_field(3), 2).betti == 0);
    CHECK(hs::hs_degree(t, 0, RingSpec::integers(), 0).betti == 1);
}

TEST_CASE("report json")
{
    auto r = hs::hs_degree(corpus("free_t.json"), 1, RingSpec::integers(), 2);
    auto j = r.to_json();
    CHECK(j["algebra"] == "T_t");
    CHECK(j["weight"] == 2);
    CHECK(j["torsion"] == nlohmann::json::array({2}));
    CHECK(j["method"] == "lepi");
}

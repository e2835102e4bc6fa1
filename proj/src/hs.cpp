#include "symhom/hs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

#include "symhom/linalg.hpp"

namespace symhom::hs
{

using algebra::Algebra;
using algebra::FiniteBasis;
using algebra::LinComb;
using deltas::Morphism;
using homology::ChainComplexDesc;
using linalg::SparseExactMatrix;
using linalg::SparseVector;
using linalg::Triplet;

namespace
{

// ------------------------------------------------------------ tensor spaces

void add_into(std::map<int, Rational>& acc, int key, const Rational& c)
{
    auto [it, inserted] = acc.emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            acc.erase(it);
    }
}

LinComb to_lincomb(const std::map<int, Rational>& acc)
{
    LinComb out;
    for (auto& [k, c] : acc)
        if (c != 0)
            out.emplace_back(k, c);
    return out;
}

LinComb times(const FiniteBasis& B, const LinComb& x, int b)
{
    std::map<int, Rational> acc;
    for (auto& [a, c] : x)
        for (auto& [r, d] : B.multiply(a, b))
            add_into(acc, r, c * d);
    return to_lincomb(acc);
}

// Ordered product of basis elements; the unit for an empty word.
LinComb product(const FiniteBasis& B, const std::vector<int>& word)
{
    if (word.empty())
        return B.unit();
    LinComb x{{word[0], Rational(1)}};
    for (std::size_t k = 1; k < word.size(); ++k)
        x = times(B, x, word[k]);
    return x;
}

// All tuples of `arity` local basis indices, restricted to total weight w.
std::vector<std::vector<int>> tuples(const FiniteBasis& B, int arity, std::optional<int> w)
{
    std::vector<std::vector<int>> out;
    if (arity == 0) {
        if (!w || *w == 0)
            out.emplace_back();
        return out;
    }
    const int n = B.size();
    if (n == 0)
        return out;
    int min_weight = B.weight(0);
    for (int k = 0; k < n; ++k)
        min_weight = std::min(min_weight, B.weight(k));
    std::vector<int> pick;
    auto rec = [&](auto&& self, int left, int used) -> void {
        if (left == 0) {
            if (!w || used == *w)
                out.push_back(pick);
            return;
        }
        for (int k = 0; k < n; ++k) {
            int next = used + B.weight(k);
            if (w && next + (left - 1) * min_weight > *w)
                continue;
            pick.push_back(k);
            self(self, left - 1, next);
            pick.pop_back();
        }
    };
    rec(rec, arity, 0);
    return out;
}

struct TensorSpace
{
    std::vector<std::vector<int>> basis;
    std::map<std::vector<int>, std::size_t> index;

    TensorSpace() = default;
    TensorSpace(const FiniteBasis& B, int arity, std::optional<int> w)
        : basis(tuples(B, arity, w))
    {
        for (std::size_t k = 0; k < basis.size(); ++k)
            index.emplace(basis[k], k);
    }
    std::size_t size() const { return basis.size(); }
    std::size_t at(const std::vector<int>& t) const
    {
        auto it = index.find(t);
        if (it == index.end())
            throw InternalError("tensor outside its weight component");
        return it->second;
    }
};

// Column builder: a sum of tensor products of combinations, each factor a LinComb.
class Column
{
public:
    void add(const TensorSpace& space, std::size_t offset, const std::vector<LinComb>& factors, const Rational& c)
    {
        std::vector<int> t(factors.size());
        auto rec = [&](auto&& self, std::size_t k, const Rational& coeff) -> void {
            if (k == factors.size()) {
                add_into(acc_, static_cast<int>(offset + space.at(t)), coeff);
                return;
            }
            for (auto& [b, d] : factors[k]) {
                t[k] = b;
                self(self, k + 1, coeff * d);
            }
        };
        rec(rec, 0, c);
    }
    void flush(std::size_t col, std::vector<Triplet>& out)
    {
        for (auto& [r, c] : acc_)
            out.push_back({static_cast<std::size_t>(r), col, c});
        acc_.clear();
    }

private:
    std::map<int, Rational> acc_;
};

LinComb single(int b) { return {{b, Rational(1)}}; }

FiniteBasis low_window(const Algebra& A, std::optional<int> weight)
{
    if (A.is_monoid() && !weight)
        throw UnsupportedError("algebra '" + A.name() + "' has an infinite basis; choose a weight");
    return A.window(weight);
}

std::string low_key(const std::string& kind, const Algebra& A, std::optional<int> weight)
{
    return kind + "(" + A.name() + "#" + std::to_string(A.fingerprint()) + (weight ? ",w=" + std::to_string(*weight) : "")
           + ")";
}

struct LowSpaces
{
    FiniteBasis B;
    TensorSpace a1, a2, a3, a4;
};

LowSpaces low_spaces(const Algebra& A, std::optional<int> weight)
{
    auto B = low_window(A, weight);
    LowSpaces s{B, TensorSpace(B, 1, weight), TensorSpace(B, 2, weight), TensorSpace(B, 3, weight),
                TensorSpace(B, 4, weight)};
    return s;
}

SparseExactMatrix hs_d1(const LowSpaces& s)
{
    std::vector<Triplet> t;
    Column col;
    for (std::size_t j = 0; j < s.a3.size(); ++j) {
        auto& x = s.a3.basis[j];
        col.add(s.a1, 0, {product(s.B, {x[0], x[1], x[2]})}, 1);
        col.add(s.a1, 0, {product(s.B, {x[2], x[1], x[0]})}, -1);
        col.flush(j, t);
    }
    return SparseExactMatrix::from_triplets(s.a1.size(), s.a3.size(), std::move(t));
}

SparseExactMatrix hs_d2(const LowSpaces& s)
{
    std::vector<Triplet> t;
    Column col;
    const auto one = s.B.unit();
    for (std::size_t j = 0; j < s.a4.size(); ++j) {
        auto& x = s.a4.basis[j];
        int a = x[0], b = x[1], c = x[2], d = x[3];
        col.add(s.a3, 0, {product(s.B, {a, b}), single(c), single(d)}, 1);
        col.add(s.a3, 0, {single(d), product(s.B, {c, a}), single(b)}, 1);
        col.add(s.a3, 0, {product(s.B, {b, c, a}), one, single(d)}, 1);
        col.add(s.a3, 0, {single(d), product(s.B, {b, c}), single(a)}, 1);
        col.flush(j, t);
    }
    for (std::size_t j = 0; j < s.a1.size(); ++j) {
        col.add(s.a3, 0, {one, single(s.a1.basis[j][0]), one}, 1);
        col.flush(s.a4.size() + j, t);
    }
    return SparseExactMatrix::from_triplets(s.a3.size(), s.a4.size() + s.a1.size(), std::move(t));
}

SparseExactMatrix hc_d1(const LowSpaces& s)
{
    std::vector<Triplet> t;
    Column col;
    for (std::size_t j = 0; j < s.a2.size(); ++j) {
        auto& x = s.a2.basis[j];
        col.add(s.a1, 0, {product(s.B, {x[0], x[1]})}, 1);
        col.add(s.a1, 0, {product(s.B, {x[1], x[0]})}, -1);
        col.flush(j, t);
    }
    return SparseExactMatrix::from_triplets(s.a1.size(), s.a2.size(), std::move(t));
}

SparseExactMatrix hc_d2(const LowSpaces& s)
{
    std::vector<Triplet> t;
    Column col;
    const auto one = s.B.unit();
    for (std::size_t j = 0; j < s.a3.size(); ++j) {
        auto& x = s.a3.basis[j];
        int a = x[0], b = x[1], c = x[2];
        col.add(s.a2, 0, {product(s.B, {a, b}), single(c)}, 1);
        col.add(s.a2, 0, {single(a), product(s.B, {b, c})}, -1);
        col.add(s.a2, 0, {product(s.B, {c, a}), single(b)}, 1);
        col.flush(j, t);
    }
    for (std::size_t j = 0; j < s.a1.size(); ++j) {
        int a = s.a1.basis[j][0];
        col.add(s.a2, 0, {one, single(a)}, 1);
        col.add(s.a2, 0, {single(a), one}, -1);
        col.flush(s.a3.size() + j, t);
    }
    return SparseExactMatrix::from_triplets(s.a2.size(), s.a3.size() + s.a1.size(), std::move(t));
}

// --------------------------------------------------------- chain categories

struct VecHash
{
    std::size_t operator()(const std::vector<int>& v) const noexcept
    {
        std::uint64_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::uint32_t>(x);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Morphisms of Delta^(m)S (or only its epimorphisms) with integer ids.
class MorphismTable
{
public:
    MorphismTable(int m, bool epi_only)
        : m_(m)
        , epi_only_(epi_only)
        , between_(static_cast<std::size_t>((m + 1) * (m + 1)))
    {
        for (int a = 0; a <= m; ++a)
            for (int b = 0; b <= m; ++b) {
                if (epi_only && b > a)
                    continue;
                auto list = epi_only ? deltas::enumerate_epis(a, b) : deltas::enumerate_morphisms(a, b);
                for (auto& f : list) {
                    int id = static_cast<int>(all_.size());
                    ids_.emplace(f, id);
                    all_.push_back(std::move(f));
                    between_[static_cast<std::size_t>(a * (m + 1) + b)].push_back(id);
                }
            }
        for (int n = 0; n <= m; ++n)
            collapse_.push_back(id_of(Morphism::collapse(n)));
    }

    int max_object() const { return m_; }
    bool epi_only() const { return epi_only_; }
    const Morphism& at(int id) const { return all_[static_cast<std::size_t>(id)]; }
    int source(int id) const { return at(id).source(); }
    int target(int id) const { return at(id).target(); }
    const std::vector<int>& between(int a, int b) const
    {
        return between_[static_cast<std::size_t>(a * (m_ + 1) + b)];
    }
    int collapse(int n) const { return collapse_[static_cast<std::size_t>(n)]; }
    int id_of(const Morphism& f) const
    {
        auto it = ids_.find(f);
        if (it == ids_.end())
            throw InternalError("morphism " + f.to_string() + " outside the table");
        return it->second;
    }
    // id of g o f
    int compose(int f, int g)
    {
        auto key = (static_cast<std::uint64_t>(f) << 32) | static_cast<std::uint32_t>(g);
        if (auto it = compose_cache_.find(key); it != compose_cache_.end())
            return it->second;
        int id = id_of(deltas::compose(at(f), at(g)));
        compose_cache_.emplace(key, id);
        return id;
    }

private:
    int m_;
    bool epi_only_;
    std::vector<Morphism> all_;
    std::unordered_map<Morphism, int, deltas::MorphismHash> ids_;
    std::vector<std::vector<int>> between_;
    std::vector<int> collapse_;
    std::unordered_map<std::uint64_t, int> compose_cache_;
};

// B^sym on objects 0..m: A at [0] and I^{⊗n+1} at [n] for the epi complex,
// A^{⊗n+1} everywhere for the full bar complex.
class Coefficients
{
public:
    Coefficients(const Algebra& A, bool full, std::optional<int> weight, int m)
        : full_(full)
        , A_(low_window(A, weight))
    {
        if (!full)
            I_ = A.ideal_window(weight);
        for (int n = 0; n <= m; ++n)
            spaces_.emplace_back(factors(n), n + 1, weight);
    }

    std::size_t dim(int n) const { return spaces_[static_cast<std::size_t>(n)].size(); }

    const LinComb& act(const MorphismTable& table, int f, int k)
    {
        auto key = (static_cast<std::uint64_t>(f) << 32) | static_cast<std::uint32_t>(k);
        if (auto it = cache_.find(key); it != cache_.end())
            return it->second;
        const auto& mor = table.at(f);
        const int s = mor.source(), t = mor.target();
        const auto& x = spaces_[static_cast<std::size_t>(s)].basis[static_cast<std::size_t>(k)];
        const FiniteBasis& from = factors(s);
        const bool to_ambient = !full_ && s > 0 && t == 0;
        std::vector<LinComb> parts;
        for (auto& fiber : mor.fibers()) {
            std::vector<int> word;
            for (int j : fiber)
                word.push_back(x[static_cast<std::size_t>(j)]);
            LinComb p = product(from, word);
            if (to_ambient) {
                std::map<int, Rational> acc;
                for (auto& [b, c] : p)
                    for (auto& [r, d] : I_.include_into(A_, b))
                        add_into(acc, r, c * d);
                p = to_lincomb(acc);
            }
            parts.push_back(std::move(p));
        }
        std::map<int, Rational> acc;
        const auto& target = spaces_[static_cast<std::size_t>(t)];
        std::vector<int> y(parts.size());
        auto rec = [&](auto&& self, std::size_t j, const Rational& c) -> void {
            if (j == parts.size()) {
                add_into(acc, static_cast<int>(target.at(y)), c);
                return;
            }
            for (auto& [b, d] : parts[j]) {
                y[j] = b;
                self(self, j + 1, c * d);
            }
        };
        rec(rec, 0, Rational(1));
        return cache_.emplace(key, to_lincomb(acc)).first->second;
    }

private:
    const FiniteBasis& factors(int n) const { return (full_ || n == 0) ? A_ : I_; }

    bool full_;
    FiniteBasis A_;
    FiniteBasis I_;
    std::vector<TensorSpace> spaces_;
    std::unordered_map<std::uint64_t, LinComb> cache_;
};

// A chain [head] -> ... with morphism ids and a tensor index at the head.
struct Cell
{
    int head = 0;
    std::vector<int> morphs;
    int tensor = 0;
};

using Terms = std::vector<std::pair<Cell, Rational>>;

class ChainEngine
{
public:
    ChainEngine(const Algebra& A, bool full, std::optional<int> weight, int m)
        : table_(m, !full)
        , coeffs_(A, full, weight, m)
    {
    }

    MorphismTable& table() { return table_; }
    Coefficients& coefficients() { return coeffs_; }

    int last(const Cell& c) const { return c.morphs.empty() ? c.head : table_.target(c.morphs.back()); }

    static std::vector<int> key(const Cell& c)
    {
        std::vector<int> k;
        k.reserve(c.morphs.size() + 2);
        k.push_back(c.head);
        k.insert(k.end(), c.morphs.begin(), c.morphs.end());
        k.push_back(c.tensor);
        return k;
    }

    // The j-th face, unsigned.
    Terms face(const Cell& c, std::size_t j)
    {
        const std::size_t q = c.morphs.size();
        Terms out;
        if (j == 0) {
            int f = c.morphs[0];
            Cell base{table_.target(f), std::vector<int>(c.morphs.begin() + 1, c.morphs.end()), 0};
            for (auto& [k, x] : coeffs_.act(table_, f, c.tensor)) {
                base.tensor = k;
                out.emplace_back(base, x);
            }
        }
        else if (j < q) {
            Cell d{c.head, {}, c.tensor};
            d.morphs.reserve(q - 1);
            for (std::size_t k = 0; k < q; ++k) {
                if (k == j - 1) {
                    d.morphs.push_back(table_.compose(c.morphs[k], c.morphs[k + 1]));
                    ++k;
                }
                else {
                    d.morphs.push_back(c.morphs[k]);
                }
            }
            out.emplace_back(std::move(d), Rational(1));
        }
        else {
            Cell d{c.head, std::vector<int>(c.morphs.begin(), c.morphs.end() - 1), c.tensor};
            out.emplace_back(std::move(d), Rational(1));
        }
        return out;
    }

    Terms boundary(const Cell& c)
    {
        Terms out;
        const std::size_t q = c.morphs.size();
        if (q == 0)
            return out;
        for (std::size_t j = 0; j <= q; ++j)
            for (auto& [d, x] : face(c, j))
                out.emplace_back(std::move(d), j % 2 ? -x : x);
        return out;
    }

    // A chain ending at [0] is its own representative. Otherwise x is
    // replaced by (-1)^q sum_{j<=q} (-1)^j d_j h(x), h appending the
    // collapse of the last object, which differs from x by a boundary.
    Terms reduce(const Cell& c)
    {
        if (last(c) == 0)
            return {{c, Rational(1)}};
        Cell h = c;
        h.morphs.push_back(table_.collapse(last(c)));
        const std::size_t q = c.morphs.size();
        Terms out;
        for (std::size_t j = 0; j <= q; ++j)
            for (auto& [d, x] : face(h, j))
                out.emplace_back(std::move(d), ((j + q) % 2) ? -x : x);
        return out;
    }

    // Number of chains of length q with head <= m ending at `end` (or anywhere
    // when end < 0), weighted by the head tensor dimension.
    long double count_cells(int q, int end) const
    {
        const int m = table_.max_object();
        // paths[a] = number of length-r chains starting at a satisfying the end condition
        std::vector<long double> paths(static_cast<std::size_t>(m + 1));
        for (int a = 0; a <= m; ++a)
            paths[static_cast<std::size_t>(a)] = (end < 0 || a == end) ? 1 : 0;
        for (int r = 0; r < q; ++r) {
            std::vector<long double> next(static_cast<std::size_t>(m + 1), 0);
            for (int a = 0; a <= m; ++a)
                for (int b = 0; b <= m; ++b) {
                    if (table_.epi_only() && b > a)
                        continue;
                    long double hom = table_.epi_only() ? deltas::epi_count(a, b).convert_to<long double>()
                                                        : deltas::morphism_count(a, b).convert_to<long double>();
                    next[static_cast<std::size_t>(a)] += hom * paths[static_cast<std::size_t>(b)];
                }
            paths = std::move(next);
        }
        long double total = 0;
        for (int a = 0; a <= m; ++a)
            total += paths[static_cast<std::size_t>(a)] * static_cast<long double>(coeffs_.dim(a));
        return total;
    }

    // All cells of length q, optionally only those ending at [0].
    std::vector<Cell> cells(int q, bool ending_at_zero)
    {
        std::vector<Cell> out;
        const int m = table_.max_object();
        for (int head = 0; head <= m; ++head) {
            const auto dim = coeffs_.dim(head);
            if (dim == 0)
                continue;
            std::vector<std::vector<int>> paths;
            std::vector<int> path;
            auto rec = [&](auto&& self, int at, int left) -> void {
                if (left == 0) {
                    if (!ending_at_zero || at == 0)
                        paths.push_back(path);
                    return;
                }
                for (int b = 0; b <= m; ++b) {
                    if (table_.epi_only() && b > at)
                        continue;
                    if (ending_at_zero && table_.epi_only() && left == 1 && b != 0)
                        continue;
                    for (int f : table_.between(at, b)) {
                        path.push_back(f);
                        self(self, b, left - 1);
                        path.pop_back();
                    }
                }
            };
            rec(rec, head, q);
            for (auto& p : paths)
                for (std::size_t k = 0; k < dim; ++k)
                    out.push_back(Cell{head, p, static_cast<int>(k)});
        }
        return out;
    }

private:
    MorphismTable table_;
    Coefficients coeffs_;
};

void check_guard(long double cells, const HsOptions& options, const std::string& what)
{
    if (cells > static_cast<long double>(options.max_cells))
        throw ResourceLimitError(what + " needs about " + std::to_string(static_cast<long long>(cells))
                                 + " cells, above the limit of " + std::to_string(options.max_cells)
                                 + " (raise max_cells to try anyway)");
}

struct WeightResult
{
    std::size_t betti = 0;
    std::vector<Integer> torsion;
    bool rank_certified = true;
};

std::size_t streamed_rank(const std::vector<std::map<int, Rational>>& columns, std::size_t dimension,
                          std::uint32_t prime, std::size_t stop_at)
{
    linalg::ModP F(prime);
    linalg::IncrementalEchelon<linalg::ModP> E(dimension, F);
    for (auto& col : columns) {
        if (E.rank() >= stop_at)
            break;
        SparseVector<std::uint32_t> v;
        for (auto& [r, x] : col) {
            auto y = F.from_rational(x);
            if (y)
                v.emplace_back(static_cast<std::uint32_t>(r), y);
        }
        if (!v.empty())
            E.add(v);
    }
    return E.rank();
}

WeightResult reduced_homology(const Algebra& A, int i, RingSpec ring, std::optional<int> weight, int m, bool full,
                              const HsOptions& options)
{
    ChainEngine engine(A, full, weight, m);
    const std::string what = "HS_" + std::to_string(i) + " of '" + A.name() + "'"
                             + (weight ? " in weight " + std::to_string(*weight) : "") + " at m=" + std::to_string(m);
    check_guard(engine.count_cells(i + 1, 0), options, what);
    check_guard(engine.count_cells(i, 0), options, what);

    auto rows = engine.cells(i, true);
    std::unordered_map<std::vector<int>, int, VecHash> row_index;
    for (std::size_t k = 0; k < rows.size(); ++k)
        row_index.emplace(ChainEngine::key(rows[k]), static_cast<int>(k));
    auto row_of = [&](const Cell& c) {
        auto it = row_index.find(ChainEngine::key(c));
        if (it == row_index.end())
            throw InternalError("reduced chain outside the chains ending at [0]");
        return it->second;
    };

    // rank of d_i on the chains ending at [0]
    std::size_t rank_d = 0;
    bool certified = true;
    if (i > 0) {
        std::unordered_map<std::vector<int>, int, VecHash> below;
        std::vector<SparseVector<Rational>> cols;
        for (auto& x : rows) {
            std::map<int, Rational> acc;
            for (auto& [d, c] : engine.boundary(x)) {
                auto [it, inserted] = below.emplace(ChainEngine::key(d), static_cast<int>(below.size()));
                add_into(acc, it->second, c);
            }
            SparseVector<Rational> v;
            for (auto& [r, c] : acc)
                v.emplace_back(static_cast<std::uint32_t>(r), c);
            cols.push_back(std::move(v));
        }
        auto D = SparseExactMatrix::from_columns(below.size(), cols);
        auto report = linalg::rank_report(D, ring.kind == RingKind::Integers ? RingSpec::rationals() : ring);
        rank_d = report.rank;
        certified = report.certified;
    }

    // reduced boundaries from the chains of length i+1 ending at [0]
    std::vector<std::map<int, Rational>> columns;
    std::set<std::vector<std::pair<int, Rational>>> seen;
    for (auto& y : engine.cells(i + 1, true)) {
        std::map<int, Rational> acc;
        for (auto& [x, c] : engine.boundary(y))
            for (auto& [z, e] : engine.reduce(x))
                add_into(acc, row_of(z), c * e);
        if (acc.empty())
            continue;
        std::vector<std::pair<int, Rational>> flat(acc.begin(), acc.end());
        if (seen.insert(flat).second)
            columns.push_back(std::move(acc));
    }

    WeightResult result;
    const std::size_t n = rows.size();
    if (rank_d > n)
        throw InternalError("rank of d exceeds the number of chains");
    std::size_t rank_r = 0;
    if (ring.kind == RingKind::Integers) {
        std::size_t nnz = 0;
        std::vector<SparseVector<Rational>> cols;
        for (auto& col : columns) {
            nnz += col.size();
            SparseVector<Rational> v;
            for (auto& [r, x] : col) {
                if (!is_integral(x))
                    throw DomainError("structure constants of '" + A.name() + "' are not integral; use Q");
                v.emplace_back(static_cast<std::uint32_t>(r), x);
            }
            cols.push_back(std::move(v));
        }
        if (nnz > options.max_nonzeros)
            throw ResourceLimitError(what + ": Smith form over Z needs " + std::to_string(nnz)
                                     + " stored nonzeros, above the limit of " + std::to_string(options.max_nonzeros));
        auto snf = linalg::smith_normal_form(SparseExactMatrix::from_columns(n, cols));
        rank_r = snf.rank();
        result.torsion = snf.torsion();
    }
    else if (ring.kind == RingKind::PrimeField) {
        rank_r = streamed_rank(columns, n, ring.characteristic, n - rank_d);
    }
    else {
        auto primes = linalg::large_primes(2);
        auto r0 = streamed_rank(columns, n, primes[0], n - rank_d);
        auto r1 = streamed_rank(columns, n, primes[1], n - rank_d);
        rank_r = std::max(r0, r1);
        certified = certified && r0 == r1;
    }
    if (rank_d + rank_r > n)
        throw InternalError("ranks exceed the number of chains ending at [0]");
    result.betti = n - rank_d - rank_r;
    result.rank_certified = certified;
    return result;
}

int max_grading(const Algebra& A)
{
    auto B = A.window(std::nullopt);
    int top = 0;
    for (int k = 0; k < B.size(); ++k)
        top = std::max(top, B.weight(k));
    return top;
}

bool positively_graded_ideal(const Algebra& A, int w)
{
    if (A.is_monoid())
        return true;
    if (!A.is_graded() || !A.has_augmentation())
        return false;
    auto I = A.ideal_window(w);
    for (int k = 0; k < I.size(); ++k)
        if (I.weight(k) < 1)
            return false;
    return true;
}

} // namespace

// ---------------------------------------------------------------- public API

ChainComplexDesc build_prop3_complex(const Algebra& A, RingSpec ring, std::optional<int> weight)
{
    auto s = low_spaces(A, weight);
    return ChainComplexDesc::from_matrices(low_key("prop3", A, weight), ring, 0,
                                           {s.a1.size(), s.a3.size(), s.a4.size() + s.a1.size()}, {hs_d1(s), hs_d2(s)},
                                           false);
}

ChainComplexDesc build_hc_low_complex(const Algebra& A, RingSpec ring, std::optional<int> weight)
{
    auto s = low_spaces(A, weight);
    return ChainComplexDesc::from_matrices(low_key("hc_low", A, weight), ring, 0,
                                           {s.a1.size(), s.a2.size(), s.a3.size() + s.a1.size()}, {hc_d1(s), hc_d2(s)},
                                           false);
}

LowDegrees hs_low(const Algebra& A, RingSpec ring, std::optional<int> weight)
{
    auto C = build_prop3_complex(A, ring, weight);
    return {homology::homology(C, 0), homology::homology(C, 1)};
}

LowDegrees hc_low(const Algebra& A, RingSpec ring, std::optional<int> weight)
{
    auto C = build_hc_low_complex(A, ring, weight);
    return {homology::homology(C, 0), homology::homology(C, 1)};
}

ComparisonMap comparison_map(const Algebra& A, RingSpec ring, std::optional<int> weight)
{
    auto s = low_spaces(A, weight);
    const auto one = s.B.unit();
    ComparisonMap out;
    out.f0 = SparseExactMatrix::identity(s.a1.size());

    std::vector<Triplet> t;
    Column col;
    for (std::size_t j = 0; j < s.a2.size(); ++j) {
        auto& x = s.a2.basis[j];
        col.add(s.a3, 0, {single(x[0]), single(x[1]), one}, 1);
        col.flush(j, t);
    }
    out.f1 = SparseExactMatrix::from_triplets(s.a3.size(), s.a2.size(), std::move(t));

    t.clear();
    const std::size_t tail = s.a4.size();
    for (std::size_t j = 0; j < s.a3.size(); ++j) {
        auto& x = s.a3.basis[j];
        int a = x[0], b = x[1], c = x[2];
        col.add(s.a4, 0, {single(a), single(b), single(c), one}, 1);
        col.add(s.a4, 0, {one, single(a), product(s.B, {b, c}), one}, -1);
        col.add(s.a4, 0, {one, product(s.B, {c, a}), single(b), one}, 1);
        col.add(s.a4, 0, {one, one, product(s.B, {a, b, c}), one}, 1);
        col.add(s.a4, 0, {single(b), product(s.B, {c, a}), one, one}, -1);
        col.add(s.a1, tail, {product(s.B, {a, b, c})}, -2);
        col.add(s.a1, tail, {product(s.B, {c, a, b})}, -1);
        col.flush(j, t);
    }
    for (std::size_t j = 0; j < s.a1.size(); ++j) {
        int a = s.a1.basis[j][0];
        col.add(s.a1, tail, {single(a)}, 4);
        col.add(s.a4, 0, {one, one, single(a), one}, -1);
        col.flush(s.a3.size() + j, t);
    }
    out.f2 = SparseExactMatrix::from_triplets(s.a4.size() + s.a1.size(), s.a3.size() + s.a1.size(), std::move(t));

    auto C = ChainComplexDesc::from_matrices(low_key("hc_low", A, weight), ring, 0,
                                             {s.a1.size(), s.a2.size(), s.a3.size() + s.a1.size()},
                                             {hc_d1(s), hc_d2(s)}, false);
    auto S = ChainComplexDesc::from_matrices(low_key("prop3", A, weight), ring, 0,
                                             {s.a1.size(), s.a3.size(), s.a4.size() + s.a1.size()},
                                             {hs_d1(s), hs_d2(s)}, false);
    if (!((*S.boundary(1)) * out.f1 == out.f0 * (*C.boundary(1))))
        throw InternalError("comparison map: the degree 1 square does not commute");
    if (!((*S.boundary(2)) * out.f2 == out.f1 * (*C.boundary(2))))
        throw InternalError("comparison map: the degree 2 square does not commute");
    out.on_h0 = homology::induced_map_between(C, S, 0, out.f0);
    out.on_h1 = homology::induced_map_between(C, S, 1, out.f1);
    return out;
}

int default_truncation(int i) { return 3 * (i + 1) / 2 + 1; }

bool truncation_certified(const Algebra& A, const TruncationParams& params)
{
    if (2 * params.m > 3 * (params.i + 1))
        return true;
    return params.weight && A.has_augmentation() && params.m >= *params.weight - 1
           && positively_graded_ideal(A, *params.weight);
}

ChainComplexDesc build_lepi_truncated(const Algebra& A, const TruncationParams& params, RingSpec ring,
                                      const HsOptions& options)
{
    if (!A.has_augmentation())
        throw UnsupportedError("the epi complex needs an augmented algebra; '" + A.name() + "' has no augmentation");
    if (params.m < 0 || params.i < 0)
        throw DomainError("truncation parameters must be non-negative");
    auto engine = std::make_shared<ChainEngine>(A, false, params.weight, params.m);
    std::vector<std::vector<Cell>> groups;
    std::vector<std::size_t> ranks;
    for (int q = 0; q <= params.i + 1; ++q) {
        check_guard(engine->count_cells(q, -1), options, "the truncated epi complex of '" + A.name() + "'");
        groups.push_back(engine->cells(q, false));
        ranks.push_back(groups.back().size());
    }
    std::vector<SparseExactMatrix> boundaries;
    for (int q = 1; q <= params.i + 1; ++q) {
        std::unordered_map<std::vector<int>, int, VecHash> index;
        auto& below = groups[static_cast<std::size_t>(q - 1)];
        for (std::size_t k = 0; k < below.size(); ++k)
            index.emplace(ChainEngine::key(below[k]), static_cast<int>(k));
        std::vector<Triplet> t;
        auto& cells = groups[static_cast<std::size_t>(q)];
        for (std::size_t j = 0; j < cells.size(); ++j) {
            std::map<int, Rational> acc;
            for (auto& [d, c] : engine->boundary(cells[j])) {
                auto it = index.find(ChainEngine::key(d));
                if (it == index.end())
                    throw InternalError("face outside the truncated complex");
                add_into(acc, it->second, c);
            }
            for (auto& [r, c] : acc)
                t.push_back({static_cast<std::size_t>(r), j, c});
        }
        boundaries.push_back(SparseExactMatrix::from_triplets(below.size(), cells.size(), std::move(t)));
    }
    std::string key = "lepi(" + A.name() + "#" + std::to_string(A.fingerprint()) + ",m=" + std::to_string(params.m)
                      + (params.weight ? ",w=" + std::to_string(*params.weight) : "") + ")";
    return ChainComplexDesc::from_matrices(key, ring, 0, ranks, std::move(boundaries), false);
}

nlohmann::json HsReport::to_json() const
{
    nlohmann::json t = nlohmann::json::array();
    for (auto& d : torsion)
        t.push_back(d.convert_to<long long>());
    return {{"algebra", algebra},
            {"degree", degree},
            {"weight", weight ? nlohmann::json(*weight) : nlohmann::json(nullptr)},
            {"m", m},
            {"certified", certified},
            {"betti", betti},
            {"torsion", t},
            {"method", method},
            {"weights", weights}};
}

HsReport hs_degree(const Algebra& A, int i, RingSpec ring, std::optional<int> weight, const HsOptions& options)
{
    if (i < 0)
        throw DomainError("homology degree must be non-negative");
    HsReport report;
    report.algebra = A.name();
    report.degree = i;
    report.weight = weight;
    report.m = options.m ? *options.m : default_truncation(i);
    if (report.m < 0)
        throw DomainError("truncation m must be non-negative");
    const bool full = !A.has_augmentation();
    report.method = full ? "full-bar" : "lepi";
    if (A.is_monoid() && !weight)
        throw UnsupportedError("algebra '" + A.name() + "' has an infinite basis; choose a weight");

    std::vector<std::optional<int>> components;
    if (weight)
        components.push_back(weight);
    else if (A.is_graded()) {
        for (int w = 0; w <= max_grading(A) * (report.m + 1); ++w)
            components.push_back(w);
    }
    else
        components.push_back(std::nullopt);

    std::vector<WeightResult> results(components.size());
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), components.size());
    if (workers <= 1) {
        for (std::size_t k = 0; k < components.size(); ++k)
            results[k] = reduced_homology(A, i, ring, components[k], report.m, full, options);
    }
    else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t k = t; k < components.size(); k += workers)
                        results[k] = reduced_homology(A, i, ring, components[k], report.m, full, options);
                }
                catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool)
            th.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    bool all_certified = true;
    for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& w = components[k];
        const auto& r = results[k];
        report.betti += r.betti;
        report.torsion.insert(report.torsion.end(), r.torsion.begin(), r.torsion.end());
        all_certified = all_certified && r.rank_certified;
        if (w && !weight && (r.betti || !r.torsion.empty()))
            report.weights.push_back(*w);
    }
    std::sort(report.torsion.begin(), report.torsion.end());
    report.certified = all_certified && truncation_certified(A, {report.m, i, weight});
    return report;
}

} // namespace symhom::hs

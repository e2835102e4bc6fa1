#include "symhom/homology.hpp"

#include <map>
#include <mutex>

namespace symhom::homology
{

using linalg::IncrementalEchelon;
using linalg::ModP;
using linalg::QField;
using linalg::SparseExactMatrix;
using linalg::SparseVector;

namespace
{

std::mutex g_cache_mutex;
std::map<std::string, HomologyEntry> g_entries;
std::map<std::string, linalg::RankReport> g_ranks;

std::string cache_key(const ChainComplexDesc& C, int i)
{
    return std::to_string(C.hash()) + "|" + C.key() + "|" + C.ring().name() + "|" + std::to_string(i);
}

// Row echelon of d_i, the free columns (cycle coordinates), and an echelon of
// the boundaries from degree i+1 expressed in those coordinates.
template <class F>
struct Frame
{
    IncrementalEchelon<F> cycles;
    std::vector<std::uint32_t> free;
    std::vector<std::int64_t> free_index;
    IncrementalEchelon<F> boundaries;
    // Positions in `free` whose cycles form a basis of H_i.
    std::vector<std::uint32_t> classes;

    Frame(std::size_t n, const F& f)
        : cycles(n, f)
        , boundaries(0, f)
    {
    }

    SparseVector<typename F::value_type> restrict_to_free(const SparseVector<typename F::value_type>& v) const
    {
        SparseVector<typename F::value_type> out;
        for (auto& [c, x] : v)
            if (free_index[c] >= 0)
                out.emplace_back(static_cast<std::uint32_t>(free_index[c]), x);
        return out;
    }
};

template <class F>
IncrementalEchelon<F> row_echelon(const SparseExactMatrix& d, const F& f)
{
    IncrementalEchelon<F> E(d.cols(), f);
    for (auto& row : d.transpose().columns_as(f))
        E.add(row);
    return E;
}

template <class F>
Frame<F> build_frame(const ChainComplexDesc& C, int i, const F& f, bool with_boundaries)
{
    Frame<F> frame(C.rank(i), f);
    frame.cycles = row_echelon(*C.boundary(i), f);
    frame.free = frame.cycles.free_columns();
    frame.free_index.assign(C.rank(i), -1);
    for (std::size_t t = 0; t < frame.free.size(); ++t)
        frame.free_index[frame.free[t]] = static_cast<std::int64_t>(t);
    if (with_boundaries) {
        frame.boundaries = IncrementalEchelon<F>(frame.free.size(), f);
        for (auto& col : C.boundary(i + 1)->columns_as(f))
            frame.boundaries.add(frame.restrict_to_free(col));
        frame.classes = frame.boundaries.free_columns();
    }
    return frame;
}

// Kernel vectors z_k = e_k - sum_p R_p[k] e_p for the requested free columns.
template <class F>
std::vector<SparseVector<typename F::value_type>> kernel_vectors(const Frame<F>& frame,
                                                                 const std::vector<std::uint32_t>& free_positions)
{
    using T = typename F::value_type;
    const auto& f = frame.cycles.field();
    std::map<std::uint32_t, std::size_t> wanted;
    std::vector<SparseVector<T>> out(free_positions.size());
    for (std::size_t t = 0; t < free_positions.size(); ++t) {
        auto column = frame.free[free_positions[t]];
        wanted[column] = t;
        out[t].emplace_back(column, f.from_int(1));
    }
    for (auto p : frame.cycles.pivots())
        for (auto& [k, v] : frame.cycles.row_at_pivot(p))
            if (auto it = wanted.find(k); it != wanted.end())
                out[it->second].emplace_back(p, f.neg(v));
    for (auto& v : out)
        std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
}

template <class F>
SparseVector<typename F::value_type> apply_sparse(const std::vector<SparseVector<typename F::value_type>>& columns,
                                                  const SparseVector<typename F::value_type>& v, const F& f)
{
    using T = typename F::value_type;
    std::map<std::uint32_t, T> acc;
    for (auto& [j, x] : v)
        for (auto& [r, y] : columns[j]) {
            auto [it, inserted] = acc.emplace(r, f.mul(x, y));
            if (!inserted)
                it->second = f.add(it->second, f.mul(x, y));
        }
    SparseVector<T> out;
    for (auto& [r, x] : acc)
        if (!f.is_zero(x))
            out.emplace_back(r, x);
    return out;
}

Rational rational_of(const QField&, const Rational& x) { return x; }

} // namespace

nlohmann::json HomologyEntry::to_json() const
{
    nlohmann::json t = nlohmann::json::array();
    for (auto& d : torsion)
        t.push_back(d <= Integer(std::numeric_limits<std::int64_t>::max()) ? nlohmann::json(d.convert_to<std::int64_t>())
                                                                           : nlohmann::json(symhom::to_string(d)));
    return {{"degree", degree},
            {"betti", betti},
            {"torsion", t},
            {"certified_torsion_free", certified_torsion_free},
            {"rank_method", rank_method},
            {"rank_certified", rank_certified}};
}

linalg::RankReport boundary_rank(const ChainComplexDesc& C, int i)
{
    const auto key = cache_key(C, i) + "|rank";
    {
        std::lock_guard lock(g_cache_mutex);
        if (auto it = g_ranks.find(key); it != g_ranks.end())
            return it->second;
    }
    auto d = C.boundary(i);
    linalg::RankReport report;
    if (d->nnz() == 0) {
        report.method = "exact";
        report.certified = true;
    }
    else {
        report = linalg::rank_report(*d, C.ring());
        if (C.ring().kind == RingKind::PrimeField)
            report.method = "mod p";
    }
    std::lock_guard lock(g_cache_mutex);
    g_ranks.emplace(key, report);
    return report;
}

HomologyEntry homology(const ChainComplexDesc& C, int i, HomologyOptions options)
{
    auto above = C.boundary(i + 1); // throws TruncationError when outside the window
    const auto key = cache_key(C, i) + "|" + (options.torsion ? "T" : "t") + (options.basis ? "B" : "b");
    if (options.use_cache) {
        std::lock_guard lock(g_cache_mutex);
        if (auto it = g_entries.find(key); it != g_entries.end())
            return it->second;
    }
    HomologyEntry entry;
    entry.degree = i;
    const std::size_t n = C.rank(i);
    auto below = boundary_rank(C, i);
    std::size_t rank_above = 0;
    bool done = false;
    if (C.ring().kind == RingKind::Integers && options.torsion) {
        try {
            auto snf = above->nnz() ? linalg::smith_normal_form(*above) : linalg::SmithForm{};
            rank_above = snf.rank();
            entry.torsion = snf.torsion();
            entry.certified_torsion_free = entry.torsion.empty();
            entry.rank_method = "smith";
            entry.rank_certified = below.certified;
            done = true;
        }
        catch (const ResourceLimitError&) {
        }
    }
    if (!done) {
        auto r = boundary_rank(C, i + 1);
        rank_above = r.rank;
        entry.rank_method = r.method;
        entry.rank_certified = r.certified && below.certified;
        entry.certified_torsion_free = C.ring().is_field();
    }
    if (below.rank + rank_above > n)
        throw InternalError("ranks " + std::to_string(below.rank) + " + " + std::to_string(rank_above)
                            + " exceed the chain rank " + std::to_string(n) + " in degree " + std::to_string(i)
                            + " of " + C.key());
    entry.betti = n - below.rank - rank_above;
    if (options.basis) {
        if (C.ring().kind == RingKind::PrimeField)
            throw UnsupportedError("homology bases are computed over Q only");
        auto frame = build_frame(C, i, QField{}, true);
        if (frame.classes.size() != entry.betti)
            throw InternalError("homology basis size " + std::to_string(frame.classes.size())
                                + " differs from the Betti number " + std::to_string(entry.betti));
        for (auto& z : kernel_vectors(frame, frame.classes)) {
            std::vector<Rational> dense(n);
            for (auto& [k, x] : z)
                dense[k] = rational_of(QField{}, x);
            entry.basis.push_back(std::move(dense));
        }
    }
    if (options.use_cache) {
        std::lock_guard lock(g_cache_mutex);
        g_entries.emplace(key, entry);
    }
    return entry;
}

std::vector<HomologyEntry> homology_all(const ChainComplexDesc& C, HomologyOptions options)
{
    std::vector<HomologyEntry> out;
    const int top = C.bounded() ? C.max_degree() : C.max_degree() - 1;
    for (int i = C.min_degree(); i <= top; ++i)
        out.push_back(homology(C, i, options));
    if (C.bounded()) {
        long long chains = 0, betti = 0;
        for (int i = C.min_degree(); i <= C.max_degree(); ++i) {
            long long sign = (i % 2 == 0) ? 1 : -1;
            chains += sign * static_cast<long long>(C.rank(i));
            betti += sign * static_cast<long long>(out[static_cast<std::size_t>(i - C.min_degree())].betti);
        }
        if (chains != betti)
            throw InternalError("Euler characteristic mismatch for " + C.key() + ": chains " + std::to_string(chains)
                                + ", homology " + std::to_string(betti));
    }
    return out;
}

std::string Polynomial::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        auto c = coefficients[i];
        if (c == 0)
            continue;
        if (!out.empty())
            out += '+';
        if (i == 0) {
            out += std::to_string(c);
            continue;
        }
        if (c != 1)
            out += std::to_string(c);
        out += 't';
        if (i > 1)
            out += '^' + std::to_string(i);
    }
    return out.empty() ? "0" : out;
}

Polynomial poincare_polynomial(const std::vector<HomologyEntry>& entries)
{
    Polynomial poly;
    for (auto& e : entries) {
        if (e.degree < 0)
            throw DomainError("Poincare polynomial of a complex with negative degrees");
        if (poly.coefficients.size() <= static_cast<std::size_t>(e.degree))
            poly.coefficients.resize(static_cast<std::size_t>(e.degree) + 1, 0);
        poly.coefficients[static_cast<std::size_t>(e.degree)] = e.betti;
    }
    while (!poly.coefficients.empty() && poly.coefficients.back() == 0)
        poly.coefficients.pop_back();
    return poly;
}

std::vector<std::vector<Rational>> induced_map_between(const ChainComplexDesc& source, const ChainComplexDesc& target,
                                                       int i, const SparseExactMatrix& phi)
{
    const std::size_t n = target.rank(i);
    if (phi.rows() != n || phi.cols() != source.rank(i))
        throw DomainError("chain map on degree " + std::to_string(i) + " must be " + std::to_string(n) + "x"
                          + std::to_string(source.rank(i)));
    QField Q;
    auto from = build_frame(source, i, Q, true);
    auto to = build_frame(target, i, Q, true);
    auto phi_cols = phi.columns_as(Q);
    auto d_rows = target.boundary(i)->transpose().columns_as(Q);

    auto is_cycle = [&](const SparseVector<Rational>& w) {
        std::vector<Rational> dense(n);
        for (auto& [k, x] : w)
            dense[k] = x;
        for (auto& row : d_rows) {
            Rational s = 0;
            for (auto& [k, x] : row)
                if (dense[k] != 0)
                    s += x * dense[k];
            if (s != 0)
                return false;
        }
        return true;
    };

    auto above = source.boundary(i + 1)->columns_as(Q);
    for (std::size_t j = 0; j < above.size(); ++j) {
        auto image = apply_sparse(phi_cols, above[j], Q);
        if (!to.boundaries.reduce(to.restrict_to_free(image)).empty() || !is_cycle(image))
            throw DomainError("not a chain map: the image of boundary column " + std::to_string(j)
                              + " is not a boundary");
    }

    std::map<std::uint32_t, std::size_t> class_row;
    for (std::size_t t = 0; t < to.classes.size(); ++t)
        class_row[to.classes[t]] = t;
    std::vector<std::vector<Rational>> M(to.classes.size(), std::vector<Rational>(from.classes.size()));

    auto cycles = kernel_vectors(from, from.classes);
    for (std::size_t t = 0; t < cycles.size(); ++t) {
        auto image = apply_sparse(phi_cols, cycles[t], Q);
        if (!is_cycle(image))
            throw DomainError("not a chain map: the image of cycle " + std::to_string(t) + " (column "
                              + std::to_string(from.free[from.classes[t]]) + ") is not a cycle");
        for (auto& [pos, x] : to.boundaries.reduce(to.restrict_to_free(image))) {
            auto it = class_row.find(pos);
            if (it == class_row.end())
                throw InternalError("reduced homology coordinates outside the class basis");
            M[it->second][t] = x;
        }
    }
    return M;
}

std::vector<std::vector<Rational>> induced_map_on_homology(const ChainComplexDesc& C, int i,
                                                           const SparseExactMatrix& phi)
{
    return induced_map_between(C, C, i, phi);
}

std::vector<std::int64_t> homology_traces(const ChainComplexDesc& C, int i, const std::vector<TraceInput>& maps,
                                          std::uint32_t prime)
{
    ModP F(prime);
    auto Ei = row_echelon(*C.boundary(i), F);
    auto Eabove = row_echelon(*C.boundary(i + 1), F);

    auto entry = [&](const SparseExactMatrix& G, std::size_t r, std::size_t c) { return F.from_rational(G.at(r, c)); };
    // trace on ker d of G: sum over free k of G[k][k] - sum_p sum_{(k,v) in R_p} v G[k][p]
    auto cycle_trace = [&](const IncrementalEchelon<ModP>& E, const SparseExactMatrix& G) {
        std::uint32_t t = 0;
        for (auto k : E.free_columns())
            t = F.add(t, entry(G, k, k));
        for (auto p : E.pivots())
            for (auto& [k, v] : E.row_at_pivot(p))
                t = F.sub(t, F.mul(v, entry(G, k, p)));
        return t;
    };

    std::vector<std::int64_t> out;
    for (auto& g : maps) {
        if (g.on_degree.rows() != C.rank(i) || g.on_degree_above.rows() != C.rank(i + 1))
            throw DomainError("trace input has the wrong shape for degree " + std::to_string(i));
        std::uint32_t chains_above = 0;
        for (std::size_t k = 0; k < C.rank(i + 1); ++k)
            chains_above = F.add(chains_above, entry(g.on_degree_above, k, k));
        auto t = F.add(F.sub(cycle_trace(Ei, g.on_degree), chains_above), cycle_trace(Eabove, g.on_degree_above));
        out.push_back(F.lift(t));
    }
    return out;
}

void clear_homology_cache()
{
    std::lock_guard lock(g_cache_mutex);
    g_entries.clear();
    g_ranks.clear();
}

} // namespace symhom::homology

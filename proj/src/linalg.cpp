#include "symhom/linalg.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

namespace symhom::linalg
{

ModP::value_type ModP::inv(value_type a) const
{
    if (a == 0)
        throw DomainError("inverse of zero modulo " + std::to_string(p));
    std::uint64_t result = 1, base = a, e = p - 2;
    while (e) {
        if (e & 1)
            result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<value_type>(result);
}

std::vector<std::uint32_t> large_primes(std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> dist((1u << 30) + 1, (1u << 31) - 1);
    std::vector<std::uint32_t> out;
    while (out.size() < count) {
        std::uint32_t candidate = dist(rng) | 1u;
        if (is_prime(candidate) && std::find(out.begin(), out.end(), candidate) == out.end())
            out.push_back(candidate);
    }
    return out;
}

// ------------------------------------------------------- SparseExactMatrix

SparseExactMatrix::SparseExactMatrix(std::size_t rows, std::size_t cols, RingSpec ring)
    : rows_(rows)
    , cols_(cols)
    , ring_(ring)
    , col_start_(cols + 1, 0)
{
    if (rows > 0xFFFFFFFFull)
        throw ResourceLimitError("matrix has more than 2^32 rows");
}

void SparseExactMatrix::finalize(std::vector<std::vector<std::pair<std::uint32_t, Rational>>>& columns)
{
    col_start_.assign(cols_ + 1, 0);
    row_index_.clear();
    small_.clear();
    big_.clear();
    bool all_small = true;
    const Rational lo(std::numeric_limits<std::int64_t>::min()), hi(std::numeric_limits<std::int64_t>::max());
    for (std::size_t j = 0; j < cols_; ++j) {
        auto& col = columns[j];
        std::sort(col.begin(), col.end(), [](auto& a, auto& b) { return a.first < b.first; });
        std::size_t out = 0;
        for (std::size_t k = 0; k < col.size();) {
            std::size_t run = k;
            Rational sum = 0;
            while (run < col.size() && col[run].first == col[k].first)
                sum += col[run++].second;
            if (sum != 0) {
                if (col[k].first >= rows_)
                    throw DomainError("matrix entry row index out of range");
                col[out++] = {col[k].first, sum};
                if (!symhom::is_integral(sum) || sum < lo || sum > hi)
                    all_small = false;
            }
            k = run;
        }
        col.resize(out);
        col_start_[j + 1] = col_start_[j] + out;
    }
    row_index_.reserve(col_start_[cols_]);
    for (auto& col : columns)
        for (auto& [r, v] : col) {
            row_index_.push_back(r);
            if (all_small)
                small_.push_back(numerator(v).convert_to<std::int64_t>());
            else
                big_.push_back(v);
        }
}

SparseExactMatrix SparseExactMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries,
                                                   RingSpec ring)
{
    SparseExactMatrix m(rows, cols, ring);
    std::vector<std::vector<std::pair<std::uint32_t, Rational>>> columns(cols);
    for (auto& t : entries) {
        if (t.row >= rows || t.col >= cols)
            throw DomainError("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) + ") out of range");
        columns[t.col].emplace_back(static_cast<std::uint32_t>(t.row), std::move(t.value));
    }
    m.finalize(columns);
    return m;
}

SparseExactMatrix SparseExactMatrix::from_int_columns(std::size_t rows,
                                                      const std::vector<SparseVector<std::int64_t>>& columns,
                                                      RingSpec ring)
{
    SparseExactMatrix m(rows, columns.size(), ring);
    std::size_t total = 0;
    for (auto& c : columns)
        total += c.size();
    m.row_index_.reserve(total);
    m.small_.reserve(total);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        auto col = columns[j];
        std::sort(col.begin(), col.end());
        std::size_t start = m.row_index_.size();
        for (std::size_t k = 0; k < col.size();) {
            std::size_t run = k;
            std::int64_t sum = 0;
            while (run < col.size() && col[run].first == col[k].first)
                sum += col[run++].second;
            if (sum != 0) {
                if (col[k].first >= rows)
                    throw DomainError("matrix entry row index out of range");
                m.row_index_.push_back(col[k].first);
                m.small_.push_back(sum);
            }
            k = run;
        }
        m.col_start_[j + 1] = start + (m.row_index_.size() - start);
    }
    return m;
}

SparseExactMatrix SparseExactMatrix::from_columns(std::size_t rows, const std::vector<SparseVector<Rational>>& columns,
                                                  RingSpec ring)
{
    SparseExactMatrix m(rows, columns.size(), ring);
    std::vector<std::vector<std::pair<std::uint32_t, Rational>>> cols(columns.begin(), columns.end());
    m.finalize(cols);
    return m;
}

SparseExactMatrix SparseExactMatrix::identity(std::size_t n, RingSpec ring)
{
    std::vector<SparseVector<std::int64_t>> cols(n);
    for (std::size_t j = 0; j < n; ++j)
        cols[j] = {{static_cast<std::uint32_t>(j), 1}};
    return from_int_columns(n, cols, ring);
}

bool SparseExactMatrix::is_integral() const
{
    return big_.empty() || std::all_of(big_.begin(), big_.end(), [](const Rational& v) { return symhom::is_integral(v); });
}

Rational SparseExactMatrix::at(std::size_t r, std::size_t c) const
{
    auto rows = column_rows(c);
    auto it = std::lower_bound(rows.begin(), rows.end(), static_cast<std::uint32_t>(r));
    if (it == rows.end() || *it != r)
        return 0;
    return value(col_start_[c] + static_cast<std::size_t>(it - rows.begin()));
}

std::vector<Triplet> SparseExactMatrix::triplets() const
{
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            out.push_back({row_index_[k], j, value(k)});
    return out;
}

SparseExactMatrix SparseExactMatrix::transpose() const
{
    if (is_small()) {
        std::vector<SparseVector<std::int64_t>> cols(rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
                cols[row_index_[k]].emplace_back(static_cast<std::uint32_t>(j), small_[k]);
        return from_int_columns(cols_, cols, ring_);
    }
    std::vector<SparseVector<Rational>> cols(rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            cols[row_index_[k]].emplace_back(static_cast<std::uint32_t>(j), big_[k]);
    return from_columns(cols_, cols, ring_);
}

SparseExactMatrix SparseExactMatrix::scaled_to_integers() const
{
    if (is_integral())
        return *this;
    std::vector<SparseVector<Rational>> cols(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        Integer l = 1;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            l = boost::multiprecision::lcm(l, denominator(big_[k]));
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            cols[j].emplace_back(row_index_[k], big_[k] * l);
    }
    return from_columns(rows_, cols, ring_);
}

std::vector<Rational> SparseExactMatrix::apply(const std::vector<Rational>& x) const
{
    if (x.size() != cols_)
        throw DomainError("vector length " + std::to_string(x.size()) + " does not match " + std::to_string(cols_)
                          + " columns");
    std::vector<Rational> y(rows_);
    for (std::size_t j = 0; j < cols_; ++j) {
        if (x[j] == 0)
            continue;
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            y[row_index_[k]] += value(k) * x[j];
    }
    return y;
}

SparseExactMatrix operator*(const SparseExactMatrix& a, const SparseExactMatrix& b)
{
    if (a.cols_ != b.rows_)
        throw DomainError("matrix product dimension mismatch: " + std::to_string(a.cols_) + " vs "
                          + std::to_string(b.rows_));
    if (a.is_small() && b.is_small()) {
        std::vector<SparseVector<std::int64_t>> cols(b.cols_);
        std::vector<std::int64_t> acc(a.rows_, 0);
        std::vector<std::uint32_t> touched;
        std::vector<char> mark(a.rows_, 0);
        CheckedZ z;
        try {
            for (std::size_t j = 0; j < b.cols_; ++j) {
                for (std::size_t k = b.col_start_[j]; k < b.col_start_[j + 1]; ++k) {
                    std::size_t mid = b.row_index_[k];
                    for (std::size_t l = a.col_start_[mid]; l < a.col_start_[mid + 1]; ++l) {
                        auto r = a.row_index_[l];
                        acc[r] = z.add(acc[r], z.mul(a.small_[l], b.small_[k]));
                        if (!mark[r]) {
                            mark[r] = 1;
                            touched.push_back(r);
                        }
                    }
                }
                for (auto r : touched) {
                    if (acc[r] != 0)
                        cols[j].emplace_back(r, acc[r]);
                    acc[r] = 0;
                    mark[r] = 0;
                }
                touched.clear();
            }
            return SparseExactMatrix::from_int_columns(a.rows_, cols, a.ring_);
        }
        catch (const Overflow&) {
        }
    }
    std::vector<SparseVector<Rational>> cols(b.cols_);
    for (std::size_t j = 0; j < b.cols_; ++j) {
        std::map<std::uint32_t, Rational> acc;
        for (std::size_t k = b.col_start_[j]; k < b.col_start_[j + 1]; ++k) {
            std::size_t mid = b.row_index_[k];
            for (std::size_t l = a.col_start_[mid]; l < a.col_start_[mid + 1]; ++l)
                acc[a.row_index_[l]] += a.value(l) * b.value(k);
        }
        for (auto& [r, v] : acc)
            if (v != 0)
                cols[j].emplace_back(r, v);
    }
    return SparseExactMatrix::from_columns(a.rows_, cols, a.ring_);
}

bool operator==(const SparseExactMatrix& a, const SparseExactMatrix& b)
{
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.col_start_ != b.col_start_ || a.row_index_ != b.row_index_)
        return false;
    if (a.is_small() && b.is_small())
        return a.small_ == b.small_;
    for (std::size_t k = 0; k < a.nnz(); ++k)
        if (a.value(k) != b.value(k))
            return false;
    return true;
}

template <class R>
std::vector<SparseVector<typename R::value_type>> SparseExactMatrix::columns_as(const R& ring) const
{
    using T = typename R::value_type;
    std::vector<SparseVector<T>> out(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        out[j].reserve(col_start_[j + 1] - col_start_[j]);
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
            T v;
            if constexpr (std::is_same_v<R, CheckedZ>) {
                if (!big_.empty()) {
                    if (!symhom::is_integral(big_[k]))
                        throw DomainError("integer elimination on a non-integral matrix");
                    auto num = numerator(big_[k]);
                    if (num > std::numeric_limits<std::int64_t>::max() || num < std::numeric_limits<std::int64_t>::min())
                        throw Overflow{};
                    v = num.convert_to<std::int64_t>();
                }
                else {
                    v = small_[k];
                }
            }
            else if constexpr (std::is_same_v<R, BigZ>) {
                if (!big_.empty() && !symhom::is_integral(big_[k]))
                    throw DomainError("integer elimination on a non-integral matrix");
                v = big_.empty() ? Integer(small_[k]) : Integer(numerator(big_[k]));
            }
            else {
                v = big_.empty() ? ring.from_int(small_[k]) : ring.from_rational(big_[k]);
            }
            if (!ring.is_zero(v))
                out[j].emplace_back(row_index_[k], std::move(v));
        }
    }
    return out;
}

template std::vector<SparseVector<ModP::value_type>> SparseExactMatrix::columns_as(const ModP&) const;
template std::vector<SparseVector<CheckedZ::value_type>> SparseExactMatrix::columns_as(const CheckedZ&) const;
template std::vector<SparseVector<BigZ::value_type>> SparseExactMatrix::columns_as(const BigZ&) const;
template std::vector<SparseVector<QField::value_type>> SparseExactMatrix::columns_as(const QField&) const;

std::uint64_t SparseExactMatrix::hash() const
{
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&](std::uint64_t x) {
        for (int b = 0; b < 8; ++b) {
            h = (h ^ (x & 0xFF)) * 1099511628211ull;
            x >>= 8;
        }
    };
    mix(rows_);
    mix(cols_);
    for (auto s : col_start_)
        mix(s);
    for (auto r : row_index_)
        mix(r);
    if (is_small()) {
        for (auto v : small_)
            mix(static_cast<std::uint64_t>(v));
    }
    else {
        for (auto& v : big_)
            for (char c : to_string(v))
                mix(static_cast<unsigned char>(c));
    }
    return h;
}

void SparseExactMatrix::write_coordinate(std::ostream& out) const
{
    out << rows_ << ' ' << cols_ << ' ' << nnz() << '\n';
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k)
            out << row_index_[k] + 1 << ' ' << j + 1 << ' ' << to_string(value(k)) << '\n';
}

SparseExactMatrix SparseExactMatrix::read_coordinate(std::istream& in, RingSpec ring)
{
    std::string line;
    auto next_line = [&]() {
        while (std::getline(in, line)) {
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '%' || line[first] == '#')
                continue;
            return true;
        }
        return false;
    };
    if (!next_line())
        throw ValidationError("matrix file is empty");
    std::size_t rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream header(line);
        if (!(header >> rows >> cols >> nnz))
            throw ValidationError("matrix header must be 'rows cols nnz'");
    }
    std::vector<Triplet> entries;
    entries.reserve(nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
        if (!next_line())
            throw ValidationError("matrix file ends after " + std::to_string(k) + " of " + std::to_string(nnz)
                                  + " entries");
        std::istringstream entry(line);
        std::size_t r = 0, c = 0;
        std::string v;
        if (!(entry >> r >> c >> v) || r == 0 || c == 0 || r > rows || c > cols)
            throw ValidationError("bad matrix entry line: '" + line + "'");
        Rational value;
        try {
            auto slash = v.find('/');
            value = slash == std::string::npos ? Rational(Integer(v))
                                               : Rational(Integer(v.substr(0, slash)), Integer(v.substr(slash + 1)));
        }
        catch (const std::exception&) {
            throw ValidationError("bad matrix value '" + v + "'");
        }
        entries.push_back({r - 1, c - 1, value});
    }
    return from_triplets(rows, cols, std::move(entries), ring);
}

// ------------------------------------------------------- sparse elimination

namespace
{

template <class R>
struct EliminationResult
{
    std::size_t pivots = 0;
    std::vector<SparseVector<typename R::value_type>> residual;
    std::size_t dense_rank = 0;
};

template <class T>
bool find_entry(const SparseVector<T>& v, std::uint32_t idx, std::size_t& pos)
{
    auto it = std::lower_bound(v.begin(), v.end(), idx, [](const auto& e, std::uint32_t x) { return e.first < x; });
    if (it == v.end() || it->first != idx)
        return false;
    pos = static_cast<std::size_t>(it - v.begin());
    return true;
}

std::size_t dense_rank_mod_p(std::vector<SparseVector<std::uint32_t>>& vecs, std::size_t dim, const ModP& F)
{
    std::vector<std::uint32_t> col_map(dim, UINT32_MAX);
    std::uint32_t next = 0;
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        if (vecs[i].empty())
            continue;
        live.push_back(i);
        for (auto& [c, v] : vecs[i])
            if (col_map[c] == UINT32_MAX)
                col_map[c] = next++;
    }
    const std::size_t R = live.size(), C = next;
    std::vector<std::uint32_t> a(R * C, 0);
    for (std::size_t r = 0; r < R; ++r) {
        for (auto& [c, v] : vecs[live[r]])
            a[r * C + col_map[c]] = v;
        SparseVector<std::uint32_t>().swap(vecs[live[r]]);
    }
    std::size_t rank = 0;
    const std::uint64_t p = F.p;
    for (std::size_t c = 0; c < C && rank < R; ++c) {
        std::size_t piv = rank;
        while (piv < R && a[piv * C + c] == 0)
            ++piv;
        if (piv == R)
            continue;
        if (piv != rank)
            std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(piv * C),
                             a.begin() + static_cast<std::ptrdiff_t>(piv * C + C),
                             a.begin() + static_cast<std::ptrdiff_t>(rank * C));
        std::uint32_t* prow = &a[rank * C];
        std::uint64_t inv = F.inv(prow[c]);
        for (std::size_t k = c; k < C; ++k)
            prow[k] = static_cast<std::uint32_t>(prow[k] * inv % p);
        for (std::size_t r = rank + 1; r < R; ++r) {
            std::uint32_t* row = &a[r * C];
            std::uint64_t f = row[c];
            if (f == 0)
                continue;
            f = p - f;
            for (std::size_t k = c; k < C; ++k)
                if (prow[k])
                    row[k] = static_cast<std::uint32_t>((row[k] + f * prow[k]) % p);
        }
        ++rank;
    }
    return rank;
}

// Markowitz-style elimination on a list of sparse vectors over indices [0, dim).
// Only unit pivots are used; vectors without a unit entry are left in the residual.
template <class R>
EliminationResult<R> eliminate(std::vector<SparseVector<typename R::value_type>> vecs, std::size_t dim, const R& ring)
{
    using T = typename R::value_type;
    constexpr bool is_mod_p = std::is_same_v<R, ModP>;
    const std::size_t n = vecs.size();
    std::vector<std::uint32_t> count(dim, 0);
    std::vector<std::vector<std::uint32_t>> occ(dim);
    std::vector<char> alive(n, 0);
    using Key = std::pair<std::size_t, std::uint32_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
    std::size_t active_nnz = 0, alive_count = 0, active_indices = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (vecs[i].empty())
            continue;
        alive[i] = 1;
        ++alive_count;
        active_nnz += vecs[i].size();
        for (auto& [c, v] : vecs[i]) {
            if (count[c]++ == 0)
                ++active_indices;
            occ[c].push_back(static_cast<std::uint32_t>(i));
        }
        heap.emplace(vecs[i].size(), static_cast<std::uint32_t>(i));
    }

    EliminationResult<R> result;
    SparseVector<T> merged;
    std::size_t since_check = 0;
    while (!heap.empty()) {
        auto [len, id] = heap.top();
        heap.pop();
        if (!alive[id] || vecs[id].size() != len)
            continue;
        auto& v = vecs[id];
        std::size_t best = SIZE_MAX;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!ring.is_unit(v[k].second))
                continue;
            if (best == SIZE_MAX || count[v[k].first] < count[v[best].first]
                || (count[v[k].first] == count[v[best].first] && R::magnitude(v[k].second) < R::magnitude(v[best].second)))
                best = k;
        }
        if (best == SIZE_MAX)
            continue;
        const std::uint32_t pivot = v[best].first;
        const T inv = ring.inv(v[best].second);
        auto users = std::move(occ[pivot]);
        occ[pivot] = {};
        for (auto w : users) {
            if (w == id || !alive[w])
                continue;
            auto& x = vecs[w];
            std::size_t pos;
            if (!find_entry(x, pivot, pos))
                continue;
            const T factor = ring.mul(x[pos].second, inv);
            merged.clear();
            merged.reserve(x.size() + v.size());
            std::size_t a = 0, b = 0;
            while (a < x.size() || b < v.size()) {
                if (b == v.size() || (a < x.size() && x[a].first < v[b].first)) {
                    merged.push_back(std::move(x[a++]));
                }
                else if (a == x.size() || v[b].first < x[a].first) {
                    auto c = v[b].first;
                    merged.emplace_back(c, ring.neg(ring.mul(factor, v[b].second)));
                    if (count[c]++ == 0)
                        ++active_indices;
                    occ[c].push_back(w);
                    ++b;
                }
                else {
                    auto c = x[a].first;
                    T s = ring.sub(x[a].second, ring.mul(factor, v[b].second));
                    if (ring.is_zero(s)) {
                        if (--count[c] == 0)
                            --active_indices;
                    }
                    else {
                        merged.emplace_back(c, std::move(s));
                    }
                    ++a;
                    ++b;
                }
            }
            active_nnz = active_nnz - x.size() + merged.size();
            x.swap(merged);
            if (x.empty()) {
                alive[w] = 0;
                --alive_count;
                SparseVector<T>().swap(x);
            }
            else {
                heap.emplace(x.size(), w);
            }
        }
        for (auto& [c, val] : v)
            if (--count[c] == 0)
                --active_indices;
        active_nnz -= v.size();
        SparseVector<T>().swap(v);
        alive[id] = 0;
        --alive_count;
        ++result.pivots;

        if constexpr (is_mod_p) {
            if (++since_check >= 64) {
                since_check = 0;
                double cells = static_cast<double>(alive_count) * static_cast<double>(active_indices);
                if (alive_count > 0 && cells < 2.5e8 && static_cast<double>(active_nnz) > 0.15 * cells) {
                    result.dense_rank = dense_rank_mod_p(vecs, dim, ring);
                    return result;
                }
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (alive[i] && !vecs[i].empty())
            result.residual.push_back(std::move(vecs[i]));
    return result;
}

template <class T>
DenseIntMatrix residual_to_dense(const std::vector<SparseVector<T>>& residual, std::size_t max_entries)
{
    std::map<std::uint32_t, std::size_t> rows;
    for (auto& v : residual)
        for (auto& [r, x] : v)
            rows.emplace(r, 0);
    std::size_t next = 0;
    for (auto& [r, slot] : rows)
        slot = next++;
    if (rows.size() * residual.size() > max_entries)
        throw ResourceLimitError("Smith form residual block " + std::to_string(rows.size()) + "x"
                                 + std::to_string(residual.size()) + " exceeds the dense limit");
    DenseIntMatrix d(rows.size(), residual.size());
    for (std::size_t j = 0; j < residual.size(); ++j)
        for (auto& [r, x] : residual[j])
            d(rows[r], j) = Integer(x);
    return d;
}

} // namespace

// -------------------------------------------------------------- dense Smith

DenseIntMatrix DenseIntMatrix::identity(std::size_t n)
{
    DenseIntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

DenseIntMatrix operator*(const DenseIntMatrix& x, const DenseIntMatrix& y)
{
    if (x.cols != y.rows)
        throw DomainError("dense product dimension mismatch");
    DenseIntMatrix z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                if (y(k, j) != 0)
                    z(i, j) += x(i, k) * y(k, j);
        }
    return z;
}

DenseIntMatrix to_dense(const SparseExactMatrix& m)
{
    if (!m.is_integral())
        throw DomainError("dense integer conversion of a non-integral matrix");
    DenseIntMatrix d(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t k = m.column_begin(j); k < m.column_end(j); ++k)
            d(m.row_of(k), j) = numerator(m.value(k));
    return d;
}

namespace
{

// Fraction-free elimination: rank and the determinant of a nonsingular maximal minor.
std::pair<std::size_t, Integer> bareiss_rank_minor(DenseIntMatrix M)
{
    std::size_t k = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < M.cols && k < M.rows; ++c) {
        std::size_t p = k;
        while (p < M.rows && M(p, c) == 0)
            ++p;
        if (p == M.rows)
            continue;
        if (p != k)
            for (std::size_t j = 0; j < M.cols; ++j)
                std::swap(M(p, j), M(k, j));
        for (std::size_t i = k + 1; i < M.rows; ++i) {
            for (std::size_t j = c + 1; j < M.cols; ++j)
                M(i, j) = (M(k, c) * M(i, j) - M(i, c) * M(k, j)) / prev;
            M(i, c) = 0;
        }
        prev = M(k, c);
        ++k;
    }
    return {k, abs(prev)};
}

Integer mod_n(const Integer& x, const Integer& n)
{
    Integer r = x % n;
    return r < 0 ? r + n : r;
}

void extended_gcd(const Integer& a, const Integer& b, Integer& g, Integer& x, Integer& y)
{
    Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    g = old_r;
    x = old_s;
    y = old_t;
}

// A residual much wider than tall is first replaced by an echelon basis of
// its column lattice, which has the same invariant factors.
template <class T>
DenseIntMatrix residual_block(const std::vector<SparseVector<T>>& residual, std::size_t max_entries)
{
    std::map<std::uint32_t, std::size_t> rows;
    for (auto& v : residual)
        for (auto& [r, x] : v)
            rows.emplace(r, 0);
    if (rows.size() * residual.size() <= max_entries || residual.size() <= rows.size())
        return residual_to_dense(residual, max_entries);
    const std::size_t R = rows.size();
    if (R * R > max_entries)
        throw ResourceLimitError("Smith form residual block " + std::to_string(R) + "x"
                                 + std::to_string(residual.size()) + " exceeds the dense limit");
    std::size_t next = 0;
    for (auto& [r, slot] : rows)
        slot = next++;

    std::vector<std::vector<Integer>> basis(R);
    std::vector<Integer> v(R);
    Integer g, x, y;
    for (auto& column : residual) {
        std::fill(v.begin(), v.end(), Integer(0));
        for (auto& [r, value] : column)
            v[rows[r]] = Integer(value);
        for (std::size_t r = 0; r < R; ++r) {
            if (v[r] == 0)
                continue;
            auto& b = basis[r];
            if (b.empty()) {
                if (v[r] < 0)
                    for (auto& e : v)
                        e = -e;
                b = v;
                for (std::size_t s = 0; s < r; ++s)
                    if (!basis[s].empty() && basis[s][r] != 0) {
                        Integer q = basis[s][r] / b[r];
                        if (basis[s][r] - q * b[r] < 0)
                            --q;
                        if (q != 0)
                            for (std::size_t k = r; k < R; ++k)
                                basis[s][k] -= q * b[k];
                    }
                break;
            }
            if (v[r] % b[r] == 0) {
                Integer q = v[r] / b[r];
                for (std::size_t k = r; k < R; ++k)
                    v[k] -= q * b[k];
                continue;
            }
            extended_gcd(b[r], v[r], g, x, y);
            Integer bq = b[r] / g, vq = v[r] / g;
            for (std::size_t k = r; k < R; ++k) {
                Integer nb = x * b[k] + y * v[k];
                v[k] = bq * v[k] - vq * b[k];
                b[k] = std::move(nb);
            }
            if (b[r] < 0)
                for (std::size_t k = r; k < R; ++k)
                    b[k] = -b[k];
        }
        // keep entries above each pivot reduced so coefficients stay bounded
        for (std::size_t r = 0; r < R; ++r) {
            if (basis[r].empty())
                continue;
            for (std::size_t s = 0; s < r; ++s)
                if (!basis[s].empty() && (basis[s][r] < 0 || basis[s][r] >= basis[r][r])) {
                    Integer q = basis[s][r] / basis[r][r];
                    if (basis[s][r] - q * basis[r][r] < 0)
                        --q;
                    for (std::size_t k = r; k < R; ++k)
                        basis[s][k] -= q * basis[r][k];
                }
        }
    }
    std::size_t count = 0;
    for (auto& b : basis)
        count += !b.empty();
    DenseIntMatrix d(R, count);
    std::size_t j = 0;
    for (auto& b : basis)
        if (!b.empty()) {
            for (std::size_t r = 0; r < R; ++r)
                d(r, j) = b[r];
            ++j;
        }
    return d;
}

// Invariant factors computed over Z/N with N = 2 |minor|. Every invariant
// divides the minor, so it is recovered as gcd(pivot, N); entries stay below N.
std::vector<Integer> smith_modular(DenseIntMatrix A)
{
    auto [k, minor] = bareiss_rank_minor(A);
    if (k == 0)
        return {};
    const Integer N = 2 * minor;
    const std::size_t r = A.rows, c = A.cols;
    for (auto& x : A.a)
        x = mod_n(x, N);

    // rows (dst, src) <- (x dst + y src, u dst + v src)
    auto combine_rows = [&](std::size_t i1, std::size_t i2, const Integer& x, const Integer& y, const Integer& u,
                            const Integer& v, std::size_t from) {
        for (std::size_t j = from; j < c; ++j) {
            const Integer a = A(i1, j), b = A(i2, j);
            if (a == 0 && b == 0)
                continue;
            A(i1, j) = mod_n(x * a + y * b, N);
            A(i2, j) = mod_n(u * a + v * b, N);
        }
    };
    auto combine_cols = [&](std::size_t j1, std::size_t j2, const Integer& x, const Integer& y, const Integer& u,
                            const Integer& v, std::size_t from) {
        for (std::size_t i = from; i < r; ++i) {
            const Integer a = A(i, j1), b = A(i, j2);
            if (a == 0 && b == 0)
                continue;
            A(i, j1) = mod_n(x * a + y * b, N);
            A(i, j2) = mod_n(u * a + v * b, N);
        }
    };

    std::vector<Integer> diag;
    for (std::size_t t = 0; t < std::min(r, c); ++t) {
        std::size_t pi = r, pj = c;
        Integer best = 0;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j)
                if (A(i, j) != 0) {
                    Integer g = gcd(A(i, j), N);
                    if (best == 0 || g < best) {
                        best = g;
                        pi = i;
                        pj = j;
                    }
                }
        if (pi == r)
            break;
        if (pi != t)
            for (std::size_t j = 0; j < c; ++j)
                std::swap(A(pi, j), A(t, j));
        if (pj != t)
            for (std::size_t i = 0; i < r; ++i)
                std::swap(A(i, pj), A(i, t));

        while (true) {
            for (std::size_t i = t + 1; i < r; ++i) {
                if (A(i, t) == 0)
                    continue;
                const Integer a = A(t, t), b = A(i, t);
                if (b % a == 0) {
                    combine_rows(t, i, 1, 0, -(b / a), 1, t);
                    continue;
                }
                Integer g, x, y;
                extended_gcd(a, b, g, x, y);
                combine_rows(t, i, x, y, -(b / g), a / g, t);
            }
            bool row_dirty = false;
            for (std::size_t j = t + 1; j < c; ++j) {
                if (A(t, j) == 0)
                    continue;
                const Integer a = A(t, t), b = A(t, j);
                if (b % a == 0) {
                    combine_cols(t, j, 1, 0, -(b / a), 1, t);
                    continue;
                }
                Integer g, x, y;
                extended_gcd(a, b, g, x, y);
                combine_cols(t, j, x, y, -(b / g), a / g, t);
                row_dirty = true;
            }
            if (row_dirty) {
                bool dirty = false;
                for (std::size_t i = t + 1; i < r && !dirty; ++i)
                    dirty = A(i, t) != 0;
                if (dirty)
                    continue;
            }
            const Integer g = gcd(A(t, t), N);
            std::size_t bad = r;
            for (std::size_t i = t + 1; i < r && bad == r; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (A(i, j) % g != 0) {
                        bad = i;
                        break;
                    }
            if (bad == r)
                break;
            combine_rows(t, bad, 1, 1, 0, 1, t);
        }
        Integer g = gcd(A(t, t), N);
        if (g == N)
            break;
        diag.push_back(g);
    }
    if (diag.size() != k)
        throw std::logic_error("modular Smith form found " + std::to_string(diag.size()) + " invariants for rank "
                               + std::to_string(k));
    return diag;
}

} // namespace

std::vector<Integer> smith_dense(DenseIntMatrix A, DenseIntMatrix* U, DenseIntMatrix* V)
{
    if (!U && !V)
        return smith_modular(std::move(A));
    const std::size_t r = A.rows, c = A.cols;
    if (U)
        *U = DenseIntMatrix::identity(r);
    if (V)
        *V = DenseIntMatrix::identity(c);
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        if (i == j)
            return;
        for (std::size_t k = 0; k < c; ++k)
            std::swap(A(i, k), A(j, k));
        if (U)
            for (std::size_t k = 0; k < r; ++k)
                std::swap((*U)(i, k), (*U)(j, k));
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        if (i == j)
            return;
        for (std::size_t k = 0; k < r; ++k)
            std::swap(A(k, i), A(k, j));
        if (V)
            for (std::size_t k = 0; k < c; ++k)
                std::swap((*V)(k, i), (*V)(k, j));
    };
    // row_dst -= q * row_src
    auto row_op = [&](std::size_t dst, std::size_t src, const Integer& q, std::size_t from) {
        for (std::size_t k = from; k < c; ++k)
            if (A(src, k) != 0)
                A(dst, k) -= q * A(src, k);
        if (U)
            for (std::size_t k = 0; k < r; ++k)
                if ((*U)(src, k) != 0)
                    (*U)(dst, k) -= q * (*U)(src, k);
    };
    auto col_op = [&](std::size_t dst, std::size_t src, const Integer& q, std::size_t from) {
        for (std::size_t k = from; k < r; ++k)
            if (A(k, src) != 0)
                A(k, dst) -= q * A(k, src);
        if (V)
            for (std::size_t k = 0; k < c; ++k)
                if ((*V)(k, src) != 0)
                    (*V)(k, dst) -= q * (*V)(k, src);
    };

    std::vector<Integer> diag;
    for (std::size_t t = 0; t < std::min(r, c); ++t) {
        std::size_t pi = r, pj = c;
        Integer best = 0;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j)
                if (A(i, j) != 0 && (best == 0 || abs(A(i, j)) < best)) {
                    best = abs(A(i, j));
                    pi = i;
                    pj = j;
                }
        if (pi == r)
            break;
        swap_rows(t, pi);
        swap_cols(t, pj);
        while (true) {
            bool moved = false;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (A(i, t) == 0)
                    continue;
                Integer q = A(i, t) / A(t, t);
                row_op(i, t, q, t);
                if (A(i, t) != 0) {
                    swap_rows(t, i);
                    moved = true;
                }
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (A(t, j) == 0)
                    continue;
                Integer q = A(t, j) / A(t, t);
                col_op(j, t, q, t);
                if (A(t, j) != 0) {
                    swap_cols(t, j);
                    moved = true;
                }
            }
            if (moved)
                continue;
            bool clean = true;
            for (std::size_t i = t + 1; i < r && clean; ++i)
                if (A(i, t) != 0)
                    clean = false;
            for (std::size_t j = t + 1; j < c && clean; ++j)
                if (A(t, j) != 0)
                    clean = false;
            if (!clean)
                continue;
            std::size_t bad = r;
            for (std::size_t i = t + 1; i < r && bad == r; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (A(i, j) % A(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == r)
                break;
            row_op(t, bad, Integer(-1), t);
        }
        if (A(t, t) < 0) {
            for (std::size_t k = t; k < c; ++k)
                A(t, k) = -A(t, k);
            if (U)
                for (std::size_t k = 0; k < r; ++k)
                    (*U)(t, k) = -(*U)(t, k);
        }
        diag.push_back(A(t, t));
    }
    return diag;
}

std::vector<Integer> SmithForm::torsion() const
{
    std::vector<Integer> out;
    for (auto& d : diagonal)
        if (d > 1)
            out.push_back(d);
    return out;
}

SmithForm smith_normal_form(const SparseExactMatrix& m, bool witnesses, EliminationLimits limits)
{
    if (!m.is_integral())
        throw DomainError("Smith normal form needs an integer matrix");
    SmithForm form;
    if (witnesses) {
        if (m.rows() * m.cols() > limits.max_dense_entries)
            throw ResourceLimitError("Smith form with witnesses on a " + std::to_string(m.rows()) + "x"
                                     + std::to_string(m.cols()) + " matrix exceeds the dense limit");
        DenseIntMatrix U, V;
        form.diagonal = smith_dense(to_dense(m), &U, &V);
        form.U = std::move(U);
        form.V = std::move(V);
        return form;
    }
    std::size_t ones = 0;
    DenseIntMatrix residual;
    try {
        auto r = eliminate(m.columns_as(CheckedZ{}), m.rows(), CheckedZ{});
        ones = r.pivots;
        residual = residual_block(r.residual, limits.max_dense_entries);
    }
    catch (const Overflow&) {
        auto r = eliminate(m.columns_as(BigZ{}), m.rows(), BigZ{});
        ones = r.pivots;
        residual = residual_block(r.residual, limits.max_dense_entries);
    }
    form.diagonal.assign(ones, Integer(1));
    for (auto& d : smith_dense(std::move(residual)))
        form.diagonal.push_back(d);
    return form;
}

// --------------------------------------------------------------------- rank

std::size_t rank_mod_p(const SparseExactMatrix& m, std::uint32_t p)
{
    ModP F(p);
    auto r = eliminate(m.columns_as(F), m.rows(), F);
    return r.pivots + r.dense_rank;
}

std::size_t rank_exact(const SparseExactMatrix& m) { return smith_normal_form(m.scaled_to_integers()).rank(); }

RankReport rank_report(const SparseExactMatrix& m, const RingSpec& ring)
{
    RankReport report;
    if (ring.kind == RingKind::PrimeField) {
        report.rank = rank_mod_p(m, ring.characteristic);
        report.method = "exact";
        report.primes = {ring.characteristic};
        report.modular_ranks = {report.rank};
        report.certified = true;
        return report;
    }
    if (m.nnz() <= 20000) {
        report.rank = rank_exact(m);
        report.method = "exact";
        report.certified = true;
        return report;
    }
    for (auto p : large_primes(2)) {
        std::size_t r;
        try {
            r = rank_mod_p(m, p);
        }
        catch (const DomainError&) {
            continue; // p divides a denominator
        }
        report.primes.push_back(p);
        report.modular_ranks.push_back(r);
    }
    if (report.modular_ranks.size() == 2 && report.modular_ranks[0] == report.modular_ranks[1]) {
        report.rank = report.modular_ranks[0];
        report.method = "multimodular";
        report.certified = true;
        return report;
    }
    report.rank = rank_exact(m);
    report.method = "exact";
    report.certified = true;
    return report;
}

std::size_t rank(const SparseExactMatrix& m, const RingSpec& ring) { return rank_report(m, ring).rank; }

// -------------------------------------------------------------------- solve

namespace
{

template <class F>
std::optional<std::vector<typename F::value_type>> solve_dense_field(const SparseExactMatrix& m,
                                                                     std::vector<typename F::value_type> b, const F& f)
{
    using T = typename F::value_type;
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<T> a(R * C, f.from_int(0));
    auto cols = m.columns_as(f);
    for (std::size_t j = 0; j < C; ++j)
        for (auto& [r, v] : cols[j])
            a[r * C + j] = v;
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < C && row < R; ++c) {
        std::size_t p = row;
        while (p < R && f.is_zero(a[p * C + c]))
            ++p;
        if (p == R)
            continue;
        if (p != row) {
            for (std::size_t k = 0; k < C; ++k)
                std::swap(a[p * C + k], a[row * C + k]);
            std::swap(b[p], b[row]);
        }
        T inv = f.inv(a[row * C + c]);
        for (std::size_t k = c; k < C; ++k)
            a[row * C + k] = f.mul(a[row * C + k], inv);
        b[row] = f.mul(b[row], inv);
        for (std::size_t i = 0; i < R; ++i) {
            if (i == row || f.is_zero(a[i * C + c]))
                continue;
            T factor = a[i * C + c];
            for (std::size_t k = c; k < C; ++k)
                if (!f.is_zero(a[row * C + k]))
                    a[i * C + k] = f.sub(a[i * C + k], f.mul(factor, a[row * C + k]));
            b[i] = f.sub(b[i], f.mul(factor, b[row]));
        }
        pivot_col.push_back(c);
        ++row;
    }
    for (std::size_t i = row; i < R; ++i)
        if (!f.is_zero(b[i]))
            return std::nullopt;
    std::vector<T> x(C, f.from_int(0));
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
        x[pivot_col[i]] = b[i];
    return x;
}

} // namespace

std::optional<std::vector<Rational>> solve_in_span(const SparseExactMatrix& m, const std::vector<Rational>& b,
                                                   const RingSpec& ring)
{
    if (b.size() != m.rows())
        throw DomainError("right-hand side has length " + std::to_string(b.size()) + " but the matrix has "
                          + std::to_string(m.rows()) + " rows");
    if (std::all_of(b.begin(), b.end(), [](const Rational& x) { return x == 0; }))
        return std::vector<Rational>(m.cols(), Rational(0));
    if (m.rows() * m.cols() > 4'000'000)
        throw ResourceLimitError("solve_in_span on a " + std::to_string(m.rows()) + "x" + std::to_string(m.cols())
                                 + " matrix exceeds the dense limit");
    if (ring.kind == RingKind::Rationals)
        return solve_dense_field(m, b, QField{});
    if (ring.kind == RingKind::PrimeField) {
        ModP f(ring.characteristic);
        std::vector<std::uint32_t> bp;
        for (auto& x : b)
            bp.push_back(f.from_rational(x));
        auto x = solve_dense_field(m, bp, f);
        if (!x)
            return std::nullopt;
        return std::vector<Rational>(x->begin(), x->end());
    }
    if (!m.is_integral())
        throw DomainError("solve_in_span over Z needs an integer matrix");
    if (!std::all_of(b.begin(), b.end(), [](const Rational& x) { return symhom::is_integral(x); }))
        return std::nullopt;
    auto form = smith_normal_form(m, true);
    const auto& U = *form.U;
    const auto& V = *form.V;
    std::vector<Integer> ub(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.rows(); ++k)
            if (U(i, k) != 0 && b[k] != 0)
                ub[i] += U(i, k) * numerator(b[k]);
    std::vector<Integer> y(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i < form.rank()) {
            if (ub[i] % form.diagonal[i] != 0)
                return std::nullopt;
            y[i] = ub[i] / form.diagonal[i];
        }
        else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    std::vector<Rational> x(m.cols());
    for (std::size_t i = 0; i < m.cols(); ++i)
        for (std::size_t k = 0; k < form.rank(); ++k)
            if (V(i, k) != 0)
                x[i] += Rational(V(i, k) * y[k]);
    return x;
}

// ------------------------------------------------------ IncrementalEchelon

template <class F>
IncrementalEchelon<F>::IncrementalEchelon(std::size_t dimension, F field)
    : field_(std::move(field))
    , pivot_row_(dimension, -1)
    , column_rows_(dimension)
    , dense_(dimension, field_.from_int(0))
    , mark_(dimension, 0)
{
}

template <class F>
void IncrementalEchelon<F>::load(const SparseVector<T>& v) const
{
    support_.clear();
    for (auto& [c, x] : v) {
        if (c >= dense_.size())
            throw DomainError("vector index out of range for the echelon dimension");
        if (!mark_[c]) {
            mark_[c] = 1;
            support_.push_back(c);
            dense_[c] = x;
        }
        else {
            dense_[c] = field_.add(dense_[c], x);
        }
    }
}

template <class F>
void IncrementalEchelon<F>::reduce_loaded() const
{
    const std::size_t initial = support_.size();
    for (std::size_t s = 0; s < initial; ++s) {
        auto c = support_[s];
        if (pivot_row_[c] < 0 || field_.is_zero(dense_[c]))
            continue;
        T factor = dense_[c];
        dense_[c] = field_.from_int(0);
        for (auto& [k, x] : rows_[static_cast<std::size_t>(pivot_row_[c])]) {
            if (!mark_[k]) {
                mark_[k] = 1;
                support_.push_back(k);
                dense_[k] = field_.neg(field_.mul(factor, x));
            }
            else {
                dense_[k] = field_.sub(dense_[k], field_.mul(factor, x));
            }
        }
    }
}

template <class F>
SparseVector<typename F::value_type> IncrementalEchelon<F>::unload() const
{
    SparseVector<T> out;
    std::sort(support_.begin(), support_.end());
    for (auto c : support_) {
        if (!field_.is_zero(dense_[c]))
            out.emplace_back(c, dense_[c]);
        dense_[c] = field_.from_int(0);
        mark_[c] = 0;
    }
    support_.clear();
    return out;
}

template <class F>
SparseVector<typename F::value_type> IncrementalEchelon<F>::reduce(const SparseVector<T>& v) const
{
    load(v);
    reduce_loaded();
    return unload();
}

template <class F>
bool IncrementalEchelon<F>::add(const SparseVector<T>& v)
{
    auto r = reduce(v);
    if (r.empty())
        return false;
    const std::uint32_t pivot = r.front().first;
    T inv = field_.inv(r.front().second);
    SparseVector<T> row;
    row.reserve(r.size() - 1);
    for (std::size_t k = 1; k < r.size(); ++k)
        row.emplace_back(r[k].first, field_.mul(r[k].second, inv));

    // Clear the new pivot column from existing rows.
    auto users = std::move(column_rows_[pivot]);
    column_rows_[pivot] = {};
    SparseVector<T> merged;
    for (auto rid : users) {
        auto& x = rows_[rid];
        std::size_t pos;
        if (!find_entry(x, pivot, pos))
            continue;
        T factor = x[pos].second;
        merged.clear();
        std::size_t a = 0, b = 0;
        while (a < x.size() || b < row.size()) {
            if (a < x.size() && x[a].first == pivot) {
                ++a;
                continue;
            }
            if (b == row.size() || (a < x.size() && x[a].first < row[b].first)) {
                merged.push_back(x[a++]);
            }
            else if (a == x.size() || row[b].first < x[a].first) {
                merged.emplace_back(row[b].first, field_.neg(field_.mul(factor, row[b].second)));
                column_rows_[row[b].first].push_back(rid);
                ++b;
            }
            else {
                T s = field_.sub(x[a].second, field_.mul(factor, row[b].second));
                if (!field_.is_zero(s))
                    merged.emplace_back(x[a].first, s);
                ++a;
                ++b;
            }
        }
        x.swap(merged);
    }
    const auto id = static_cast<std::uint32_t>(rows_.size());
    for (auto& [c, x] : row)
        column_rows_[c].push_back(id);
    rows_.push_back(std::move(row));
    row_pivot_.push_back(pivot);
    pivot_row_[pivot] = id;
    return true;
}

template <class F>
std::vector<std::uint32_t> IncrementalEchelon<F>::pivots() const
{
    std::vector<std::uint32_t> out(row_pivot_);
    std::sort(out.begin(), out.end());
    return out;
}

template <class F>
std::vector<std::uint32_t> IncrementalEchelon<F>::free_columns() const
{
    std::vector<std::uint32_t> out;
    for (std::size_t c = 0; c < pivot_row_.size(); ++c)
        if (pivot_row_[c] < 0)
            out.push_back(static_cast<std::uint32_t>(c));
    return out;
}

template class IncrementalEchelon<ModP>;
template class IncrementalEchelon<QField>;

} // namespace symhom::linalg

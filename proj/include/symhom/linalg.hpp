#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symhom/common.hpp"

namespace symhom::linalg
{

// ------------------------------------------------------------------ scalars

// Arithmetic modulo a prime below 2^31.
struct ModP
{
    using value_type = std::uint32_t;
    std::uint32_t p;

    explicit ModP(std::uint32_t prime)
        : p(prime)
    {
    }

    bool is_zero(value_type a) const { return a == 0; }
    bool is_unit(value_type a) const { return a != 0; }
    value_type add(value_type a, value_type b) const
    {
        std::uint32_t s = a + b;
        return s >= p ? s - p : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p - b; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type mul(value_type a, value_type b) const
    {
        return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p);
    }
    value_type inv(value_type a) const;
    value_type from_int(std::int64_t v) const
    {
        std::int64_t r = v % static_cast<std::int64_t>(p);
        return static_cast<value_type>(r < 0 ? r + p : r);
    }
    value_type from_rational(const Rational& v) const { return reduce_mod(v, p); }
    // Symmetric lift to (-p/2, p/2].
    std::int64_t lift(value_type a) const { return a > p / 2 ? static_cast<std::int64_t>(a) - p : a; }
    // Tie-break for pivot choice; all nonzero residues are equally good.
    static int magnitude(value_type) { return 0; }
};

// Signals that a checked 64-bit computation overflowed; callers retry with big integers.
struct Overflow
{
};

// Integers in int64 with overflow detection. Units are +-1.
struct CheckedZ
{
    using value_type = std::int64_t;

    bool is_zero(value_type a) const { return a == 0; }
    bool is_unit(value_type a) const { return a == 1 || a == -1; }
    value_type add(value_type a, value_type b) const
    {
        value_type r;
        if (__builtin_add_overflow(a, b, &r))
            throw Overflow{};
        return r;
    }
    value_type sub(value_type a, value_type b) const
    {
        value_type r;
        if (__builtin_sub_overflow(a, b, &r))
            throw Overflow{};
        return r;
    }
    value_type neg(value_type a) const { return sub(0, a); }
    value_type mul(value_type a, value_type b) const
    {
        value_type r;
        if (__builtin_mul_overflow(a, b, &r))
            throw Overflow{};
        return r;
    }
    value_type inv(value_type a) const { return a; }
    static int magnitude(value_type a) { return a < 0 ? (a < -1000000 ? 1000000 : static_cast<int>(-a)) : (a > 1000000 ? 1000000 : static_cast<int>(a)); }
};

// Arbitrary-precision integers. Units are +-1.
struct BigZ
{
    using value_type = Integer;

    bool is_zero(const value_type& a) const { return a == 0; }
    bool is_unit(const value_type& a) const { return a == 1 || a == -1; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const { return a; }
    static int magnitude(const value_type& a)
    {
        auto bits = a == 0 ? 0u : boost::multiprecision::msb(abs(a));
        return static_cast<int>(bits > 1000000 ? 1000000 : bits);
    }
};

// The rational field.
struct QField
{
    using value_type = Rational;

    bool is_zero(const value_type& a) const { return a == 0; }
    bool is_unit(const value_type& a) const { return a != 0; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const { return 1 / a; }
    value_type from_int(std::int64_t v) const { return Rational(v); }
    value_type from_rational(const Rational& v) const { return v; }
    static int magnitude(const value_type& a)
    {
        if (a == 0)
            return 0;
        auto bits = boost::multiprecision::msb(abs(numerator(a))) + boost::multiprecision::msb(denominator(a));
        return static_cast<int>(bits > 1000000 ? 1000000 : bits);
    }
};

// Deterministic primes in (2^30, 2^31), drawn from a seeded generator.
std::vector<std::uint32_t> large_primes(std::size_t count, std::uint64_t seed = 0x5eed5eedull);

// ------------------------------------------------------------ sparse matrix

template <class T>
using SparseVector = std::vector<std::pair<std::uint32_t, T>>;

struct Triplet
{
    std::size_t row;
    std::size_t col;
    Rational value;
};

// Column-compressed exact matrix. Entries that fit in int64 are stored as such.
class SparseExactMatrix
{
public:
    SparseExactMatrix() = default;
    SparseExactMatrix(std::size_t rows, std::size_t cols, RingSpec ring = RingSpec::integers());

    // Duplicates are summed; zeros dropped.
    static SparseExactMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries,
                                           RingSpec ring = RingSpec::integers());
    static SparseExactMatrix from_int_columns(std::size_t rows,
                                              const std::vector<SparseVector<std::int64_t>>& columns,
                                              RingSpec ring = RingSpec::integers());
    static SparseExactMatrix from_columns(std::size_t rows, const std::vector<SparseVector<Rational>>& columns,
                                          RingSpec ring = RingSpec::integers());
    static SparseExactMatrix identity(std::size_t n, RingSpec ring = RingSpec::integers());

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return row_index_.size(); }
    const RingSpec& ring() const { return ring_; }
    void set_ring(RingSpec ring) { ring_ = ring; }

    bool is_small() const { return big_.empty(); }
    bool is_integral() const;

    std::span<const std::uint32_t> column_rows(std::size_t j) const
    {
        return {row_index_.data() + col_start_[j], row_index_.data() + col_start_[j + 1]};
    }
    std::span<const std::int64_t> column_small(std::size_t j) const
    {
        return {small_.data() + col_start_[j], small_.data() + col_start_[j + 1]};
    }
    Rational value(std::size_t k) const { return big_.empty() ? Rational(small_[k]) : big_[k]; }
    std::size_t column_begin(std::size_t j) const { return col_start_[j]; }
    std::size_t column_end(std::size_t j) const { return col_start_[j + 1]; }
    std::uint32_t row_of(std::size_t k) const { return row_index_[k]; }

    Rational at(std::size_t r, std::size_t c) const;
    std::vector<Triplet> triplets() const;
    SparseExactMatrix transpose() const;
    SparseExactMatrix scaled_to_integers() const;
    bool is_zero() const { return nnz() == 0; }
    std::vector<Rational> apply(const std::vector<Rational>& x) const;

    friend SparseExactMatrix operator*(const SparseExactMatrix& a, const SparseExactMatrix& b);
    friend bool operator==(const SparseExactMatrix& a, const SparseExactMatrix& b);

    // Columns converted to the given scalar type.
    template <class R>
    std::vector<SparseVector<typename R::value_type>> columns_as(const R& ring) const;

    std::uint64_t hash() const;

    // Coordinate text format: "rows cols nnz" then one "r c v" line per entry, 1-indexed.
    void write_coordinate(std::ostream& out) const;
    static SparseExactMatrix read_coordinate(std::istream& in, RingSpec ring = RingSpec::integers());

private:
    void finalize(std::vector<std::vector<std::pair<std::uint32_t, Rational>>>& columns);

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    RingSpec ring_ = RingSpec::integers();
    std::vector<std::size_t> col_start_{0};
    std::vector<std::uint32_t> row_index_;
    std::vector<std::int64_t> small_;
    std::vector<Rational> big_;
};

// ------------------------------------------------------------ dense helper

struct DenseIntMatrix
{
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Integer> a;

    DenseIntMatrix() = default;
    DenseIntMatrix(std::size_t r, std::size_t c)
        : rows(r)
        , cols(c)
        , a(r * c)
    {
    }
    static DenseIntMatrix identity(std::size_t n);
    Integer& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    friend DenseIntMatrix operator*(const DenseIntMatrix& x, const DenseIntMatrix& y);
    friend bool operator==(const DenseIntMatrix&, const DenseIntMatrix&) = default;
};

DenseIntMatrix to_dense(const SparseExactMatrix& m);

// -------------------------------------------------------------------- Smith

struct SmithForm
{
    // Nonzero invariant factors d_1 | d_2 | ... (all positive).
    std::vector<Integer> diagonal;
    std::size_t rank() const { return diagonal.size(); }
    // Invariant factors greater than one.
    std::vector<Integer> torsion() const;
    // U * M * V = D when witnesses were requested.
    std::optional<DenseIntMatrix> U;
    std::optional<DenseIntMatrix> V;
};

struct EliminationLimits
{
    // Largest dense residual block (entries) handed to the dense Smith step.
    std::size_t max_dense_entries = 4'000'000;
};

// Sparse unit-pivot elimination followed by dense Smith form of the residual.
// Witnesses force the dense algorithm on the whole matrix.
SmithForm smith_normal_form(const SparseExactMatrix& m, bool witnesses = false, EliminationLimits limits = {});

// Dense Smith form. When U/V are non-null they receive the transforms.
std::vector<Integer> smith_dense(DenseIntMatrix a, DenseIntMatrix* U = nullptr, DenseIntMatrix* V = nullptr);

// --------------------------------------------------------------------- rank

struct RankReport
{
    std::size_t rank = 0;
    // "exact" or "multimodular"
    std::string method;
    std::vector<std::uint32_t> primes;
    std::vector<std::size_t> modular_ranks;
    bool certified = false;
};

std::size_t rank_mod_p(const SparseExactMatrix& m, std::uint32_t p);
// Exact rank over Q of a rational matrix.
std::size_t rank_exact(const SparseExactMatrix& m);

// Over Z or Q: rank over Q. Two random large primes must agree (and bound the
// exact Q rank from below); disagreement falls back to exact elimination.
RankReport rank_report(const SparseExactMatrix& m, const RingSpec& ring);
std::size_t rank(const SparseExactMatrix& m, const RingSpec& ring);

// -------------------------------------------------------------------- solve

// Returns x with M x = b over the given ring, or nullopt when b is not in the
// image (over Z: not in the integral image).
std::optional<std::vector<Rational>> solve_in_span(const SparseExactMatrix& m, const std::vector<Rational>& b,
                                                   const RingSpec& ring);

// --------------------------------------------------- incremental echelon

// Fully reduced row echelon form grown one vector at a time. Each stored
// row has a 1 at its pivot and zeros at every other pivot.
template <class F>
class IncrementalEchelon
{
public:
    using T = typename F::value_type;

    IncrementalEchelon(std::size_t dimension, F field);

    std::size_t dimension() const { return dense_.size(); }
    std::size_t rank() const { return rows_.size(); }
    const F& field() const { return field_; }

    // Adds v; returns true when it was independent of the rows so far.
    bool add(const SparseVector<T>& v);
    // Residual of v after reduction (zero iff v lies in the span).
    SparseVector<T> reduce(const SparseVector<T>& v) const;

    bool is_pivot(std::size_t column) const { return pivot_row_[column] >= 0; }
    // Row with its pivot at `column` (pivot entry omitted; entries only at free columns).
    const SparseVector<T>& row_at_pivot(std::size_t column) const
    {
        return rows_[static_cast<std::size_t>(pivot_row_[column])];
    }
    std::vector<std::uint32_t> pivots() const;
    std::vector<std::uint32_t> free_columns() const;

private:
    void load(const SparseVector<T>& v) const;
    void reduce_loaded() const;
    SparseVector<T> unload() const;

    F field_;
    std::vector<SparseVector<T>> rows_;
    std::vector<std::uint32_t> row_pivot_;
    std::vector<std::int64_t> pivot_row_;
    // Column -> rows that have a nonzero there (may contain stale ids).
    std::vector<std::vector<std::uint32_t>> column_rows_;
    mutable std::vector<T> dense_;
    mutable std::vector<char> mark_;
    mutable std::vector<std::uint32_t> support_;
};

extern template class IncrementalEchelon<ModP>;
extern template class IncrementalEchelon<QField>;

} // namespace symhom::linalg

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "symhom/common.hpp"

// Combinatorial model of the category Delta-S: objects [n] = {0,...,n},
// morphisms are set maps together with a total order on every fiber.
namespace symhom::deltas
{

// The object [n].
struct FiniteOrdinal
{
    int n = 0;

    explicit FiniteOrdinal(int value);
    int size() const { return n + 1; }
    friend auto operator<=>(const FiniteOrdinal&, const FiniteOrdinal&) = default;
};

// A bijection of {0,...,n}; images[j] is the image of j.
// Products compose as functions: (a * b)(x) = a(b(x)).
class Permutation
{
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int size);
    // One-line notation [a b c ...]: 0 -> a, 1 -> b, ...
    static Permutation from_one_line(const std::string& digits);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int x) const { return images_[static_cast<std::size_t>(x)]; }
    const std::vector<int>& images() const { return images_; }

    Permutation inverse() const;
    int sign() const;
    // Cycle lengths, sorted descending.
    std::vector<int> cycle_type() const;
    bool is_identity() const;

    friend Permutation operator*(const Permutation& a, const Permutation& b);
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

    std::string to_string() const;

private:
    std::vector<int> images_;
};

// A weakly increasing map [m] -> [n].
class OrderPreservingMap
{
public:
    OrderPreservingMap(std::vector<int> values, int target);

    int source() const { return static_cast<int>(values_.size()) - 1; }
    int target() const { return target_; }
    const std::vector<int>& values() const { return values_; }
    bool is_surjective() const;

    friend bool operator==(const OrderPreservingMap&, const OrderPreservingMap&) = default;

private:
    std::vector<int> values_;
    int target_;
};

// A morphism [m] -> [n] of Delta-S. fibers()[i] lists the preimage of i in
// its specified order; every element of [m] occurs in exactly one fiber.
class Morphism
{
public:
    Morphism(int source, std::vector<std::vector<int>> fibers);

    static Morphism identity(int n);
    static Morphism from_permutation(const Permutation& sigma);
    static Morphism from_order_preserving(const OrderPreservingMap& map);
    // The collapse [n] -> [0] with fiber (0, 1, ..., n).
    static Morphism collapse(int n);

    // Parses "m->n:[f0|f1|...]".
    static Morphism parse(const std::string& text);

    int source() const { return source_; }
    int target() const { return static_cast<int>(fibers_.size()) - 1; }
    const std::vector<std::vector<int>>& fibers() const { return fibers_; }
    const std::vector<int>& fiber(int i) const { return fibers_[static_cast<std::size_t>(i)]; }

    // Underlying set function value at j.
    int operator()(int j) const;

    bool is_epi() const;
    bool is_automorphism() const;

    std::string to_string() const;

    friend auto operator<=>(const Morphism&, const Morphism&) = default;

private:
    int source_;
    std::vector<std::vector<int>> fibers_;
};

// g o f for f: [m] -> [n], g: [n] -> [p]. The fiber of i under g o f is the
// concatenation of f's fibers over g's fiber of i, in g's order.
Morphism compose(const Morphism& f, const Morphism& g);

// f = order-preserving o permutation, the permutation sending the k-th entry
// of the concatenated fibers to k.
std::pair<Permutation, OrderPreservingMap> factorize(const Morphism& f);

// Underlying bijection of an automorphism. Anti-homomorphic in the argument
// order of compose(): to_permutation(compose(f, g)) == to_permutation(g) * to_permutation(f).
Permutation to_permutation(const Morphism& f);

// All epimorphisms [m] -> [n] (every fiber nonempty). Ordered by fiber-size
// vector (lexicographic), then by flattened fiber contents (lexicographic).
std::vector<Morphism> enumerate_epis(int m, int n);

// All morphisms [m] -> [n], same ordering convention with empty fibers allowed.
std::vector<Morphism> enumerate_morphisms(int m, int n);

// (m+1)! * C(m, n)
Integer epi_count(int m, int n);
// (m+n+1)! / n!
Integer morphism_count(int m, int n);

struct MorphismHash
{
    std::size_t operator()(const Morphism& f) const noexcept;
};

} // namespace symhom::deltas

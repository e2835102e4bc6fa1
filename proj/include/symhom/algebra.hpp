#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symhom/common.hpp"
#include "symhom/deltas.hpp"

namespace symhom::algebra
{

// Sparse linear combination over local basis indices, sorted by index, no zero coefficients.
using LinComb = std::vector<std::pair<int, Rational>>;

enum class AlgebraKind
{
    FiniteDim,
    FreeMonoid,
    FreeCommMonoid
};

class InternTable;

// An element of A: basis id -> coefficient. For finite-dimensional algebras the
// ids are structure-constant indices; for monoid algebras they are interned
// monoid elements with id 0 the identity.
struct Element
{
    std::uint64_t algebra = 0;
    std::map<int, Rational> terms;

    friend bool operator==(const Element&, const Element&) = default;
};

// A linear combination of basis tensors a_0 (x) ... (x) a_m.
struct Tensor
{
    std::uint64_t algebra = 0;
    int arity = 0;
    std::map<std::vector<int>, Rational> terms;

    friend bool operator==(const Tensor&, const Tensor&) = default;
};

class FiniteBasis;

class Algebra
{
public:
    // Throws ValidationError naming the violated axiom.
    static Algebra from_json(const nlohmann::json& spec, std::string name = {});
    static Algebra load(const std::string& path);

    static Algebra ground_field();
    static Algebra free_monoid(std::vector<std::string> generators);
    static Algebra free_comm_monoid(std::vector<std::string> generators);

    AlgebraKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    // Stable content hash; two algebras built from equal data share it.
    std::uint64_t fingerprint() const { return fingerprint_; }
    nlohmann::json to_json() const;

    bool is_monoid() const { return kind_ != AlgebraKind::FiniteDim; }
    bool is_commutative() const;
    bool has_augmentation() const { return is_monoid() || !aug_.empty(); }
    bool is_graded() const { return is_monoid() || !grading_.empty(); }
    // Dimension of a finite-dimensional algebra; throws for monoid algebras.
    int dimension() const;
    const std::vector<std::string>& generators() const { return gens_; }

    int weight(int id) const;
    std::string label(int id) const;
    Rational augmentation(int id) const;

    Element zero() const;
    Element unit() const;
    Element basis_element(int id) const;
    // Monoid algebras only: the element named by a word over generator indices
    // (an exponent vector for the commutative variant).
    Element monoid_element(const std::vector<int>& word) const;

    Element multiply(const Element& a, const Element& b) const;
    Element add(const Element& a, const Element& b, const Rational& scale = 1) const;

    // Product of two basis ids as a combination of basis ids.
    std::vector<std::pair<int, Rational>> multiply_basis(int a, int b) const;

    Tensor tensor(const std::vector<Element>& factors) const;

    // Basis of A restricted to weight <= max_weight (whole algebra if finite dimensional
    // and max_weight is empty).
    FiniteBasis window(std::optional<int> max_weight) const;
    // Basis of the augmentation ideal I with the same restriction.
    FiniteBasis ideal_window(std::optional<int> max_weight) const;

private:
    friend class FiniteBasis;

    void validate() const;
    void compute_fingerprint();
    int intern(const std::vector<int>& word) const;
    const std::vector<int>& word(int id) const;

    AlgebraKind kind_ = AlgebraKind::FiniteDim;
    std::string name_;
    std::uint64_t fingerprint_ = 0;

    std::vector<std::string> labels_;
    // table_[i * dim + j] = e_i * e_j
    std::vector<std::vector<std::pair<int, Rational>>> table_;
    std::vector<Rational> unit_;
    std::vector<Rational> aug_;
    std::vector<int> grading_;

    std::vector<std::string> gens_;
    std::shared_ptr<InternTable> interned_;
};

// A finite basis b_0, ..., b_{n-1} of a subspace of A closed under products as
// used (either all of A inside a weight window, or the augmentation ideal).
class FiniteBasis
{
public:
    int size() const { return static_cast<int>(weights_.size()); }
    int weight(int k) const { return weights_[static_cast<std::size_t>(k)]; }
    const std::string& label(int k) const { return labels_[static_cast<std::size_t>(k)]; }
    bool has_unit() const { return unit_.has_value(); }
    const LinComb& unit() const;
    // b_a * b_b in local coordinates. Products leaving the weight window are dropped.
    const LinComb& multiply(int a, int b) const;
    // As an element of A.
    Element element(int k) const;
    // Local coordinates of an element of A; throws when it is not in the span.
    LinComb coordinates(const Element& x) const;
    // Image of b_k in the coordinates of `ambient` (a window of the same algebra).
    LinComb include_into(const FiniteBasis& ambient, int k) const;

private:
    friend class Algebra;

    std::shared_ptr<const Algebra> algebra_;
    std::vector<Element> elements_;
    std::vector<int> weights_;
    std::vector<std::string> labels_;
    std::optional<LinComb> unit_;
    std::vector<LinComb> products_;
    // For finite-dimensional ideals: coordinate extraction data.
    int pivot_ = -1;
    std::vector<int> ambient_ids_;
    std::map<int, int> id_to_local_;
};

Element multiply(const Algebra& A, const Element& a, const Element& b);

// B^sym(f) on a tensor of arity f.source()+1. An empty fiber contributes 1.
Tensor bsym_apply(const Algebra& A, const deltas::Morphism& f, const Tensor& t);

// Basis of B^sym_m I: A itself for m = 0, I^{(x) m+1} for m > 0, optionally
// restricted to total weight w.
std::vector<Tensor> ideal_component_basis(const Algebra& A, int m, std::optional<int> w = std::nullopt);

} // namespace symhom::algebra

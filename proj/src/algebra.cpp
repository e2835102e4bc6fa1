#include "symhom/algebra.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace symhom::algebra
{

using nlohmann::json;

// Append-only table of monoid elements. Reads take a shared lock.
class InternTable
{
public:
    InternTable() { intern({}); }

    int intern(const std::vector<int>& word)
    {
        {
            std::shared_lock lock(mutex_);
            auto it = ids_.find(word);
            if (it != ids_.end())
                return it->second;
        }
        std::unique_lock lock(mutex_);
        auto [it, inserted] = ids_.try_emplace(word, static_cast<int>(words_.size()));
        if (inserted)
            words_.push_back(std::make_unique<std::vector<int>>(word));
        return it->second;
    }

    const std::vector<int>& word(int id) const
    {
        std::shared_lock lock(mutex_);
        if (id < 0 || static_cast<std::size_t>(id) >= words_.size())
            throw DomainError("unknown monoid element id " + std::to_string(id));
        return *words_[static_cast<std::size_t>(id)];
    }

private:
    struct WordHash
    {
        std::size_t operator()(const std::vector<int>& w) const noexcept
        {
            std::size_t h = 1469598103934665603ull;
            for (int x : w)
                h = (h ^ static_cast<std::size_t>(x + 1)) * 1099511628211ull;
            return h;
        }
    };

    mutable std::shared_mutex mutex_;
    std::unordered_map<std::vector<int>, int, WordHash> ids_;
    std::vector<std::unique_ptr<std::vector<int>>> words_;
};

namespace
{

Rational parse_scalar(const json& value, const std::string& where)
{
    if (value.is_number_integer())
        return Rational(value.get<long long>());
    if (value.is_string()) {
        auto text = value.get<std::string>();
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos)
                return Rational(Integer(text));
            Integer num(text.substr(0, slash)), den(text.substr(slash + 1));
            if (den == 0)
                throw ValidationError(where + ": zero denominator in '" + text + "'");
            return Rational(num, den);
        }
        catch (const ValidationError&) {
            throw;
        }
        catch (const std::exception&) {
            throw ValidationError(where + ": cannot parse scalar '" + text + "'");
        }
    }
    throw ValidationError(where + ": scalars must be integers or strings like \"1/2\"");
}

json scalar_to_json(const Rational& r)
{
    if (is_integral(r) && abs(r) < Rational(1ll << 53))
        return numerator(r).convert_to<long long>();
    return to_string(r);
}

void accumulate(std::map<int, Rational>& into, int id, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = into.try_emplace(id, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            into.erase(it);
    }
}

std::vector<std::string> parse_names(const json& spec, const char* key)
{
    if (!spec.contains(key) || !spec[key].is_array())
        throw ValidationError(std::string("algebra spec needs an array '") + key + "'");
    std::vector<std::string> names;
    for (const auto& g : spec[key]) {
        if (!g.is_string())
            throw ValidationError(std::string("entries of '") + key + "' must be strings");
        names.push_back(g.get<std::string>());
    }
    return names;
}

} // namespace

// ------------------------------------------------------------------ Algebra

Algebra Algebra::from_json(const json& spec, std::string name)
{
    if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
        throw ValidationError("algebra spec must be an object with a string field 'kind'");
    Algebra A;
    A.name_ = spec.contains("name") && spec["name"].is_string() ? spec["name"].get<std::string>() : std::move(name);
    auto kind = spec["kind"].get<std::string>();
    if (kind == "free_monoid" || kind == "free_comm_monoid") {
        A.kind_ = kind == "free_monoid" ? AlgebraKind::FreeMonoid : AlgebraKind::FreeCommMonoid;
        A.gens_ = parse_names(spec, "gens");
        if (A.gens_.empty())
            throw ValidationError("monoid algebra needs at least one generator");
        A.interned_ = std::make_shared<InternTable>();
        A.compute_fingerprint();
        return A;
    }
    if (kind != "finite_dim")
        throw ValidationError("unknown algebra kind '" + kind + "' (expected finite_dim, free_monoid or free_comm_monoid)");

    A.kind_ = AlgebraKind::FiniteDim;
    A.labels_ = parse_names(spec, "basis");
    const int dim = static_cast<int>(A.labels_.size());
    if (dim == 0)
        throw ValidationError("finite_dim algebra needs a nonempty basis");

    std::vector<std::map<int, Rational>> table(static_cast<std::size_t>(dim * dim));
    if (!spec.contains("mul") || !spec["mul"].is_array())
        throw ValidationError("finite_dim algebra needs an array 'mul' of [i,j,l,c] entries");
    for (const auto& entry : spec["mul"]) {
        if (!entry.is_array() || entry.size() != 4 || !entry[0].is_number_integer() || !entry[1].is_number_integer()
            || !entry[2].is_number_integer())
            throw ValidationError("structure constants must be [i,j,l,c] with integer indices");
        int i = entry[0].get<int>(), j = entry[1].get<int>(), l = entry[2].get<int>();
        if (i < 0 || j < 0 || l < 0 || i >= dim || j >= dim || l >= dim)
            throw ValidationError("structure constant index out of range in " + entry.dump());
        accumulate(table[static_cast<std::size_t>(i * dim + j)], l, parse_scalar(entry[3], "mul"));
    }
    A.table_.resize(table.size());
    for (std::size_t k = 0; k < table.size(); ++k)
        A.table_[k].assign(table[k].begin(), table[k].end());

    auto read_vector = [&](const char* key, bool required) {
        std::vector<Rational> v;
        if (!spec.contains(key)) {
            if (required)
                throw ValidationError(std::string("finite_dim algebra needs '") + key + "'");
            return v;
        }
        if (!spec[key].is_array() || static_cast<int>(spec[key].size()) != dim)
            throw ValidationError(std::string("'") + key + "' must list one coordinate per basis element");
        for (const auto& x : spec[key])
            v.push_back(parse_scalar(x, key));
        return v;
    };
    A.unit_ = read_vector("unit", true);
    A.aug_ = read_vector("aug", false);
    if (spec.contains("grading")) {
        if (!spec["grading"].is_array() || static_cast<int>(spec["grading"].size()) != dim)
            throw ValidationError("'grading' must list one non-negative weight per basis element");
        for (const auto& x : spec["grading"]) {
            if (!x.is_number_integer() || x.get<int>() < 0)
                throw ValidationError("'grading' must list one non-negative weight per basis element");
            A.grading_.push_back(x.get<int>());
        }
    }
    A.validate();
    A.compute_fingerprint();
    return A;
}

Algebra Algebra::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open algebra file '" + path + "'");
    json spec;
    try {
        in >> spec;
    }
    catch (const json::exception& e) {
        throw ValidationError("algebra file '" + path + "' is not valid JSON: " + e.what());
    }
    auto stem = path.substr(path.find_last_of('/') + 1);
    stem = stem.substr(0, stem.find('.'));
    return from_json(spec, stem);
}

Algebra Algebra::ground_field()
{
    return from_json(json{{"kind", "finite_dim"}, {"name", "k"}, {"basis", {"1"}}, {"mul", {{0, 0, 0, 1}}},
                          {"unit", {1}}, {"aug", {1}}, {"grading", {0}}});
}

Algebra Algebra::free_monoid(std::vector<std::string> generators)
{
    return from_json(json{{"kind", "free_monoid"}, {"gens", generators}}, "free_monoid");
}

Algebra Algebra::free_comm_monoid(std::vector<std::string> generators)
{
    return from_json(json{{"kind", "free_comm_monoid"}, {"gens", generators}}, "free_comm_monoid");
}

void Algebra::validate() const
{
    const int dim = dimension();
    auto mul = [&](const std::map<int, Rational>& a, const std::map<int, Rational>& b) {
        std::map<int, Rational> out;
        for (auto& [i, x] : a)
            for (auto& [j, y] : b)
                for (auto& [l, c] : table_[static_cast<std::size_t>(i * dim + j)])
                    accumulate(out, l, x * y * c);
        return out;
    };
    auto basis = [&](int i) { return std::map<int, Rational>{{i, Rational(1)}}; };
    std::map<int, Rational> one;
    for (int i = 0; i < dim; ++i)
        accumulate(one, i, unit_[static_cast<std::size_t>(i)]);

    for (int i = 0; i < dim; ++i) {
        if (mul(one, basis(i)) != basis(i) || mul(basis(i), one) != basis(i))
            throw ValidationError("unit law fails: 1*" + labels_[i] + " or " + labels_[i] + "*1 differs from "
                                  + labels_[i]);
    }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            auto ij = mul(basis(i), basis(j));
            for (int k = 0; k < dim; ++k)
                if (mul(ij, basis(k)) != mul(basis(i), mul(basis(j), basis(k))))
                    throw ValidationError("associativity fails: (" + labels_[i] + "*" + labels_[j] + ")*" + labels_[k]
                                          + " != " + labels_[i] + "*(" + labels_[j] + "*" + labels_[k] + ")");
        }
    if (!aug_.empty()) {
        auto eps = [&](const std::map<int, Rational>& x) {
            Rational s = 0;
            for (auto& [i, c] : x)
                s += c * aug_[static_cast<std::size_t>(i)];
            return s;
        };
        if (eps(one) != 1)
            throw ValidationError("augmentation is not unital: aug(1) != 1");
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (eps(mul(basis(i), basis(j))) != aug_[i] * aug_[j])
                    throw ValidationError("augmentation is not multiplicative: aug(" + labels_[i] + "*" + labels_[j]
                                          + ") != aug(" + labels_[i] + ")*aug(" + labels_[j] + ")");
    }
    if (!grading_.empty()) {
        for (int i = 0; i < dim; ++i) {
            if (unit_[i] != 0 && grading_[i] != 0)
                throw ValidationError("grading: the unit must be homogeneous of weight 0");
            if (!aug_.empty() && aug_[i] != 0 && grading_[i] != 0)
                throw ValidationError("grading: the augmentation must vanish in positive weight");
            for (int j = 0; j < dim; ++j)
                for (auto& [l, c] : table_[static_cast<std::size_t>(i * dim + j)])
                    if (grading_[l] != grading_[i] + grading_[j])
                        throw ValidationError("grading: " + labels_[i] + "*" + labels_[j] + " is not homogeneous");
        }
    }
}

json Algebra::to_json() const
{
    json out;
    if (is_monoid()) {
        out["kind"] = kind_ == AlgebraKind::FreeMonoid ? "free_monoid" : "free_comm_monoid";
        out["gens"] = gens_;
        return out;
    }
    out["kind"] = "finite_dim";
    out["basis"] = labels_;
    json mul = json::array();
    const int dim = dimension();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (auto& [l, c] : table_[static_cast<std::size_t>(i * dim + j)])
                mul.push_back({i, j, l, scalar_to_json(c)});
    out["mul"] = mul;
    out["unit"] = json::array();
    for (auto& c : unit_)
        out["unit"].push_back(scalar_to_json(c));
    if (!aug_.empty()) {
        out["aug"] = json::array();
        for (auto& c : aug_)
            out["aug"].push_back(scalar_to_json(c));
    }
    if (!grading_.empty())
        out["grading"] = grading_;
    return out;
}

void Algebra::compute_fingerprint() { fingerprint_ = fnv1a(to_json().dump()); }

bool Algebra::is_commutative() const
{
    if (kind_ == AlgebraKind::FreeCommMonoid)
        return true;
    if (kind_ == AlgebraKind::FreeMonoid)
        return gens_.size() == 1;
    const int dim = dimension();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < i; ++j)
            if (table_[static_cast<std::size_t>(i * dim + j)] != table_[static_cast<std::size_t>(j * dim + i)])
                return false;
    return true;
}

int Algebra::dimension() const
{
    if (is_monoid())
        throw UnsupportedError("monoid algebras are infinite dimensional");
    return static_cast<int>(labels_.size());
}

int Algebra::intern(const std::vector<int>& w) const { return interned_->intern(w); }

const std::vector<int>& Algebra::word(int id) const { return interned_->word(id); }

int Algebra::weight(int id) const
{
    if (kind_ == AlgebraKind::FiniteDim) {
        if (grading_.empty())
            throw UnsupportedError("algebra '" + name_ + "' carries no grading");
        return grading_.at(static_cast<std::size_t>(id));
    }
    const auto& w = word(id);
    if (kind_ == AlgebraKind::FreeMonoid)
        return static_cast<int>(w.size());
    int total = 0;
    for (int e : w)
        total += e;
    return total;
}

std::string Algebra::label(int id) const
{
    if (kind_ == AlgebraKind::FiniteDim)
        return labels_.at(static_cast<std::size_t>(id));
    const auto& w = word(id);
    std::string out;
    auto emit = [&](int g, int e) {
        if (e == 0)
            return;
        out += gens_[static_cast<std::size_t>(g)];
        if (e > 1)
            out += "^" + std::to_string(e);
    };
    if (kind_ == AlgebraKind::FreeMonoid) {
        for (std::size_t k = 0; k < w.size();) {
            std::size_t run = k;
            while (run < w.size() && w[run] == w[k])
                ++run;
            emit(w[k], static_cast<int>(run - k));
            k = run;
        }
    }
    else {
        for (std::size_t g = 0; g < w.size(); ++g)
            emit(static_cast<int>(g), w[g]);
    }
    return out.empty() ? "1" : out;
}

Rational Algebra::augmentation(int id) const
{
    if (is_monoid())
        return id == 0 ? 1 : 0;
    if (aug_.empty())
        throw UnsupportedError("algebra '" + name_ + "' has no augmentation");
    return aug_.at(static_cast<std::size_t>(id));
}

Element Algebra::zero() const { return Element{fingerprint_, {}}; }

Element Algebra::unit() const
{
    Element e = zero();
    if (is_monoid()) {
        e.terms[0] = 1;
        return e;
    }
    for (std::size_t i = 0; i < unit_.size(); ++i)
        if (unit_[i] != 0)
            e.terms[static_cast<int>(i)] = unit_[i];
    return e;
}

Element Algebra::basis_element(int id) const
{
    if (!is_monoid() && (id < 0 || id >= dimension()))
        throw DomainError("basis index out of range");
    if (is_monoid())
        word(id);
    Element e = zero();
    e.terms[id] = 1;
    return e;
}

Element Algebra::monoid_element(const std::vector<int>& w) const
{
    if (!is_monoid())
        throw UnsupportedError("monoid_element requires a monoid algebra");
    std::vector<int> canonical = w;
    if (kind_ == AlgebraKind::FreeMonoid) {
        for (int g : w)
            if (g < 0 || g >= static_cast<int>(gens_.size()))
                throw DomainError("generator index out of range");
    }
    else {
        if (w.size() != gens_.size())
            throw DomainError("exponent vector length must equal the number of generators");
        for (int e : w)
            if (e < 0)
                throw DomainError("exponents must be non-negative");
        if (std::all_of(w.begin(), w.end(), [](int e) { return e == 0; }))
            canonical.clear();
    }
    return basis_element(intern(canonical));
}

std::vector<std::pair<int, Rational>> Algebra::multiply_basis(int a, int b) const
{
    if (kind_ == AlgebraKind::FiniteDim)
        return table_.at(static_cast<std::size_t>(a * dimension() + b));
    const auto& wa = word(a);
    const auto& wb = word(b);
    if (wa.empty())
        return {{b, Rational(1)}};
    if (wb.empty())
        return {{a, Rational(1)}};
    std::vector<int> w;
    if (kind_ == AlgebraKind::FreeMonoid) {
        w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
    }
    else {
        w.resize(gens_.size());
        for (std::size_t g = 0; g < w.size(); ++g)
            w[g] = wa[g] + wb[g];
    }
    return {{intern(w), Rational(1)}};
}

Element Algebra::multiply(const Element& a, const Element& b) const
{
    if (a.algebra != fingerprint_ || b.algebra != fingerprint_)
        throw DomainError("cannot multiply elements of different algebras");
    Element out = zero();
    for (auto& [i, x] : a.terms)
        for (auto& [j, y] : b.terms)
            for (auto& [l, c] : multiply_basis(i, j))
                accumulate(out.terms, l, x * y * c);
    return out;
}

Element Algebra::add(const Element& a, const Element& b, const Rational& scale) const
{
    if (a.algebra != fingerprint_ || b.algebra != fingerprint_)
        throw DomainError("cannot add elements of different algebras");
    Element out = a;
    for (auto& [j, y] : b.terms)
        accumulate(out.terms, j, scale * y);
    return out;
}

Tensor Algebra::tensor(const std::vector<Element>& factors) const
{
    if (factors.empty())
        throw DomainError("a tensor needs at least one factor");
    Tensor t{fingerprint_, static_cast<int>(factors.size()), {}};
    std::vector<int> key(factors.size());
    std::function<void(std::size_t, Rational)> rec = [&](std::size_t k, Rational coeff) {
        if (k == factors.size()) {
            t.terms[key] += coeff;
            return;
        }
        if (factors[k].algebra != fingerprint_)
            throw DomainError("tensor factor belongs to a different algebra");
        for (auto& [id, c] : factors[k].terms) {
            key[k] = id;
            rec(k + 1, coeff * c);
        }
    };
    rec(0, Rational(1));
    std::erase_if(t.terms, [](const auto& kv) { return kv.second == 0; });
    return t;
}

namespace
{

// Monoid elements of weight <= max_weight, ordered by weight then lexicographically.
std::vector<std::vector<int>> monoid_words(AlgebraKind kind, int gens, int max_weight)
{
    std::vector<std::vector<int>> out;
    for (int w = 0; w <= max_weight; ++w) {
        if (kind == AlgebraKind::FreeMonoid) {
            std::vector<int> word(static_cast<std::size_t>(w), 0);
            while (true) {
                out.push_back(word);
                int k = w - 1;
                while (k >= 0 && ++word[static_cast<std::size_t>(k)] == gens)
                    word[static_cast<std::size_t>(k--)] = 0;
                if (k < 0)
                    break;
            }
        }
        else {
            std::vector<int> exps(static_cast<std::size_t>(gens), 0);
            std::function<void(int, int)> rec = [&](int g, int remaining) {
                if (g == gens - 1) {
                    exps[static_cast<std::size_t>(g)] = remaining;
                    out.push_back(std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; })
                                      ? std::vector<int>{}
                                      : exps);
                    return;
                }
                for (int e = remaining; e >= 0; --e) {
                    exps[static_cast<std::size_t>(g)] = e;
                    rec(g + 1, remaining - e);
                }
            };
            rec(0, w);
        }
    }
    return out;
}

} // namespace

FiniteBasis Algebra::window(std::optional<int> max_weight) const
{
    FiniteBasis B;
    B.algebra_ = std::make_shared<const Algebra>(*this);
    if (is_monoid()) {
        if (!max_weight)
            throw UnsupportedError("a monoid algebra needs a weight window");
        for (auto& w : monoid_words(kind_, static_cast<int>(gens_.size()), *max_weight))
            B.ambient_ids_.push_back(intern(w));
    }
    else {
        if (max_weight && grading_.empty())
            throw UnsupportedError("weight windows need a graded algebra; '" + name_ + "' declares no grading");
        for (int i = 0; i < dimension(); ++i)
            if (!max_weight || grading_[static_cast<std::size_t>(i)] <= *max_weight)
                B.ambient_ids_.push_back(i);
    }
    for (std::size_t k = 0; k < B.ambient_ids_.size(); ++k) {
        int id = B.ambient_ids_[k];
        B.id_to_local_[id] = static_cast<int>(k);
        B.elements_.push_back(basis_element(id));
        B.labels_.push_back(label(id));
        B.weights_.push_back(is_graded() ? weight(id) : 0);
    }
    B.unit_ = B.coordinates(unit());
    const int n = B.size();
    B.products_.resize(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            LinComb out;
            for (auto& [id, c] : multiply_basis(B.ambient_ids_[a], B.ambient_ids_[b])) {
                auto it = B.id_to_local_.find(id);
                if (it != B.id_to_local_.end())
                    out.emplace_back(it->second, c);
            }
            std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.first < y.first; });
            B.products_[static_cast<std::size_t>(a * n + b)] = std::move(out);
        }
    return B;
}

FiniteBasis Algebra::ideal_window(std::optional<int> max_weight) const
{
    if (!has_augmentation())
        throw UnsupportedError("algebra '" + name_ + "' has no augmentation, so its augmentation ideal is undefined");
    FiniteBasis A = window(max_weight);
    FiniteBasis B;
    B.algebra_ = A.algebra_;
    if (is_monoid()) {
        for (int k = 0; k < A.size(); ++k)
            if (A.ambient_ids_[static_cast<std::size_t>(k)] != 0) {
                int id = A.ambient_ids_[static_cast<std::size_t>(k)];
                B.id_to_local_[id] = static_cast<int>(B.ambient_ids_.size());
                B.ambient_ids_.push_back(id);
                B.elements_.push_back(A.elements_[static_cast<std::size_t>(k)]);
                B.labels_.push_back(A.labels_[static_cast<std::size_t>(k)]);
                B.weights_.push_back(A.weights_[static_cast<std::size_t>(k)]);
            }
    }
    else {
        // I is spanned by e_j - aug(e_j) 1 for j != u, where u has unit_u * aug_u != 0.
        const int dim = dimension();
        int u = -1;
        for (int j = 0; j < dim && u < 0; ++j)
            if (unit_[j] != 0 && aug_[j] != 0)
                u = j;
        B.pivot_ = u;
        Element one = this->unit();
        for (int j = 0; j < dim; ++j) {
            if (j == u || (max_weight && grading_[static_cast<std::size_t>(j)] > *max_weight))
                continue;
            Element x = add(basis_element(j), one, -aug_[j]);
            B.id_to_local_[j] = static_cast<int>(B.ambient_ids_.size());
            B.ambient_ids_.push_back(j);
            B.elements_.push_back(x);
            B.labels_.push_back(aug_[j] == 0 ? labels_[j] : labels_[j] + "-(" + to_string(aug_[j]) + ")");
            B.weights_.push_back(grading_.empty() ? 0 : grading_[static_cast<std::size_t>(j)]);
        }
    }
    const int n = B.size();
    B.products_.resize(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Element prod = multiply(B.elements_[static_cast<std::size_t>(a)], B.elements_[static_cast<std::size_t>(b)]);
            if (is_monoid() && max_weight) {
                std::erase_if(prod.terms, [&](const auto& kv) { return weight(kv.first) > *max_weight; });
            }
            else if (max_weight) {
                std::erase_if(prod.terms, [&](const auto& kv) { return grading_[kv.first] > *max_weight; });
            }
            B.products_[static_cast<std::size_t>(a * n + b)] = B.coordinates(prod);
        }
    return B;
}

// -------------------------------------------------------------- FiniteBasis

const LinComb& FiniteBasis::unit() const
{
    if (!unit_)
        throw DomainError("this basis does not contain the unit");
    return *unit_;
}

const LinComb& FiniteBasis::multiply(int a, int b) const
{
    return products_[static_cast<std::size_t>(a * size() + b)];
}

Element FiniteBasis::element(int k) const { return elements_.at(static_cast<std::size_t>(k)); }

LinComb FiniteBasis::coordinates(const Element& x) const
{
    LinComb out;
    if (pivot_ < 0) {
        for (auto& [id, c] : x.terms) {
            auto it = id_to_local_.find(id);
            if (it == id_to_local_.end())
                throw DomainError("element is not in the span of this basis (" + algebra_->label(id) + ")");
            out.emplace_back(it->second, c);
        }
    }
    else {
        const auto& A = *algebra_;
        Rational eps = 0;
        for (auto& [id, c] : x.terms)
            eps += c * A.aug_[static_cast<std::size_t>(id)];
        if (eps != 0)
            throw DomainError("element is not in the augmentation ideal");
        auto get = [&](int id) {
            auto it = x.terms.find(id);
            return it == x.terms.end() ? Rational(0) : it->second;
        };
        Rational s = get(pivot_) / A.unit_[static_cast<std::size_t>(pivot_)];
        for (std::size_t k = 0; k < ambient_ids_.size(); ++k) {
            int j = ambient_ids_[k];
            Rational y = get(j) - s * A.unit_[static_cast<std::size_t>(j)];
            if (y != 0)
                out.emplace_back(static_cast<int>(k), y);
        }
    }
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    return out;
}

LinComb FiniteBasis::include_into(const FiniteBasis& ambient, int k) const
{
    return ambient.coordinates(elements_.at(static_cast<std::size_t>(k)));
}

// ------------------------------------------------------------ free functions

Element multiply(const Algebra& A, const Element& a, const Element& b) { return A.multiply(a, b); }

Tensor bsym_apply(const Algebra& A, const deltas::Morphism& f, const Tensor& t)
{
    if (t.algebra != A.fingerprint())
        throw DomainError("tensor belongs to a different algebra");
    if (t.arity != f.source() + 1)
        throw DomainError("tensor arity " + std::to_string(t.arity) + " does not match source of " + f.to_string());
    Tensor out{A.fingerprint(), f.target() + 1, {}};
    for (auto& [key, coeff] : t.terms) {
        std::vector<Element> factors;
        factors.reserve(static_cast<std::size_t>(f.target()) + 1);
        for (const auto& fiber : f.fibers()) {
            Element prod = A.unit();
            for (int j : fiber)
                prod = A.multiply(prod, A.basis_element(key[static_cast<std::size_t>(j)]));
            factors.push_back(std::move(prod));
        }
        for (auto& [k2, c2] : A.tensor(factors).terms) {
            auto& slot = out.terms[k2];
            slot += coeff * c2;
        }
    }
    std::erase_if(out.terms, [](const auto& kv) { return kv.second == 0; });
    return out;
}

std::vector<Tensor> ideal_component_basis(const Algebra& A, int m, std::optional<int> w)
{
    if (m < 0)
        throw DomainError("tensor index m must be non-negative");
    if (w && !A.is_graded())
        throw UnsupportedError("weight restriction needs a graded algebra; '" + A.name() + "' declares no grading");
    if (!w && A.is_monoid())
        throw UnsupportedError("monoid algebras are infinite dimensional: give a weight");
    FiniteBasis basis = m == 0 ? A.window(w) : A.ideal_window(w);
    std::vector<Tensor> out;
    std::vector<int> pick(static_cast<std::size_t>(m) + 1, 0);
    const int n = basis.size();
    if (n == 0)
        return out;
    while (true) {
        int total = 0;
        for (int k : pick)
            total += basis.weight(k);
        if (!w || total == *w) {
            std::vector<Element> factors;
            for (int k : pick)
                factors.push_back(basis.element(k));
            out.push_back(A.tensor(factors));
        }
        int k = m;
        while (k >= 0 && ++pick[static_cast<std::size_t>(k)] == n)
            pick[static_cast<std::size_t>(k--)] = 0;
        if (k < 0)
            break;
    }
    return out;
}

} // namespace symhom::algebra

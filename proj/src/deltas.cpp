#include "symhom/deltas.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace symhom::deltas
{

FiniteOrdinal::FiniteOrdinal(int value)
    : n(value)
{
    if (value < 0)
        throw DomainError("finite ordinal [n] requires n >= 0, got " + std::to_string(value));
}

// ---------------------------------------------------------------- Permutation

Permutation::Permutation(std::vector<int> images)
    : images_(std::move(images))
{
    std::vector<char> seen(images_.size(), 0);
    for (int v : images_) {
        if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)])
            throw DomainError("permutation images are not a bijection of {0,...," + std::to_string(size() - 1) + "}");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

Permutation Permutation::identity(int size)
{
    std::vector<int> images(static_cast<std::size_t>(size));
    std::iota(images.begin(), images.end(), 0);
    return Permutation(std::move(images));
}

Permutation Permutation::from_one_line(const std::string& digits)
{
    std::vector<int> images;
    for (char c : digits) {
        if (c == '[' || c == ']' || c == ' ' || c == ',')
            continue;
        if (c < '0' || c > '9')
            throw DomainError("one-line notation accepts digits only: " + digits);
        images.push_back(c - '0');
    }
    return Permutation(std::move(images));
}

Permutation Permutation::inverse() const
{
    std::vector<int> inv(images_.size());
    for (std::size_t j = 0; j < images_.size(); ++j)
        inv[static_cast<std::size_t>(images_[j])] = static_cast<int>(j);
    return Permutation(std::move(inv));
}

int Permutation::sign() const
{
    int s = 1;
    for (int len : cycle_type())
        if (len % 2 == 0)
            s = -s;
    return s;
}

std::vector<int> Permutation::cycle_type() const
{
    std::vector<int> lengths;
    std::vector<char> seen(images_.size(), 0);
    for (std::size_t start = 0; start < images_.size(); ++start) {
        if (seen[start])
            continue;
        int len = 0;
        for (std::size_t x = start; !seen[x]; x = static_cast<std::size_t>(images_[x])) {
            seen[x] = 1;
            ++len;
        }
        lengths.push_back(len);
    }
    std::sort(lengths.rbegin(), lengths.rend());
    return lengths;
}

bool Permutation::is_identity() const
{
    for (std::size_t j = 0; j < images_.size(); ++j)
        if (images_[j] != static_cast<int>(j))
            return false;
    return true;
}

Permutation operator*(const Permutation& a, const Permutation& b)
{
    if (a.size() != b.size())
        throw DomainError("cannot multiply permutations of different sizes");
    std::vector<int> images(b.images_.size());
    for (std::size_t x = 0; x < images.size(); ++x)
        images[x] = a(b.images_[x]);
    return Permutation(std::move(images));
}

std::string Permutation::to_string() const
{
    std::string s = "[";
    for (std::size_t j = 0; j < images_.size(); ++j) {
        if (j)
            s += ' ';
        s += std::to_string(images_[j]);
    }
    return s + "]";
}

// ------------------------------------------------------- OrderPreservingMap

OrderPreservingMap::OrderPreservingMap(std::vector<int> values, int target)
    : values_(std::move(values))
    , target_(target)
{
    if (values_.empty() || target < 0)
        throw DomainError("order-preserving map needs a nonempty source and target");
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (values_[j] < 0 || values_[j] > target)
            throw DomainError("order-preserving map value out of range");
        if (j && values_[j] < values_[j - 1])
            throw DomainError("order-preserving map is not weakly increasing");
    }
}

bool OrderPreservingMap::is_surjective() const
{
    return values_.front() == 0 && values_.back() == target_
        && std::adjacent_find(values_.begin(), values_.end(), [](int a, int b) { return b > a + 1; }) == values_.end();
}

// ----------------------------------------------------------------- Morphism

Morphism::Morphism(int source, std::vector<std::vector<int>> fibers)
    : source_(source)
    , fibers_(std::move(fibers))
{
    if (source_ < 0 || fibers_.empty())
        throw DomainError("morphism needs source [m] with m >= 0 and a nonempty target");
    std::vector<char> seen(static_cast<std::size_t>(source_) + 1, 0);
    std::size_t total = 0;
    for (const auto& fiber : fibers_) {
        for (int j : fiber) {
            if (j < 0 || j > source_ || seen[static_cast<std::size_t>(j)])
                throw DomainError("fibers must contain every element of [" + std::to_string(source_) + "] exactly once");
            seen[static_cast<std::size_t>(j)] = 1;
        }
        total += fiber.size();
    }
    if (total != seen.size())
        throw DomainError("fibers must contain every element of [" + std::to_string(source_) + "] exactly once");
}

Morphism Morphism::identity(int n)
{
    std::vector<std::vector<int>> fibers(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        fibers[static_cast<std::size_t>(i)] = {i};
    return Morphism(n, std::move(fibers));
}

Morphism Morphism::from_permutation(const Permutation& sigma)
{
    std::vector<std::vector<int>> fibers(static_cast<std::size_t>(sigma.size()));
    for (int j = 0; j < sigma.size(); ++j)
        fibers[static_cast<std::size_t>(sigma(j))] = {j};
    return Morphism(sigma.size() - 1, std::move(fibers));
}

Morphism Morphism::from_order_preserving(const OrderPreservingMap& map)
{
    std::vector<std::vector<int>> fibers(static_cast<std::size_t>(map.target()) + 1);
    for (int j = 0; j <= map.source(); ++j)
        fibers[static_cast<std::size_t>(map.values()[static_cast<std::size_t>(j)])].push_back(j);
    return Morphism(map.source(), std::move(fibers));
}

Morphism Morphism::collapse(int n)
{
    std::vector<int> all(static_cast<std::size_t>(n) + 1);
    std::iota(all.begin(), all.end(), 0);
    return Morphism(n, {std::move(all)});
}

Morphism Morphism::parse(const std::string& text)
{
    auto fail = [&] { return DomainError("malformed morphism '" + text + "' (expected m->n:[f0|f1|...])"); };
    auto arrow = text.find("->");
    auto colon = text.find(':');
    if (arrow == std::string::npos || colon == std::string::npos || colon < arrow)
        throw fail();
    int m = 0, n = 0;
    try {
        m = std::stoi(text.substr(0, arrow));
        n = std::stoi(text.substr(arrow + 2, colon - arrow - 2));
    }
    catch (const std::exception&) {
        throw fail();
    }
    std::string body = text.substr(colon + 1);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw fail();
    body = body.substr(1, body.size() - 2);
    std::vector<std::vector<int>> fibers(1);
    std::string number;
    auto flush = [&] {
        if (!number.empty()) {
            fibers.back().push_back(std::stoi(number));
            number.clear();
        }
    };
    for (char c : body) {
        if (c == '|') {
            flush();
            fibers.emplace_back();
        }
        else if (c == ',') {
            flush();
        }
        else if (c >= '0' && c <= '9') {
            number += c;
        }
        else if (c != ' ') {
            throw fail();
        }
    }
    flush();
    if (static_cast<int>(fibers.size()) != n + 1)
        throw fail();
    return Morphism(m, std::move(fibers));
}

int Morphism::operator()(int j) const
{
    for (std::size_t i = 0; i < fibers_.size(); ++i)
        if (std::find(fibers_[i].begin(), fibers_[i].end(), j) != fibers_[i].end())
            return static_cast<int>(i);
    throw DomainError("element " + std::to_string(j) + " is not in the source of the morphism");
}

bool Morphism::is_epi() const
{
    return std::none_of(fibers_.begin(), fibers_.end(), [](const auto& f) { return f.empty(); });
}

bool Morphism::is_automorphism() const
{
    return source() == target()
        && std::all_of(fibers_.begin(), fibers_.end(), [](const auto& f) { return f.size() == 1; });
}

std::string Morphism::to_string() const
{
    std::ostringstream out;
    out << source_ << "->" << target() << ":[";
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
        if (i)
            out << '|';
        for (std::size_t k = 0; k < fibers_[i].size(); ++k) {
            if (k)
                out << ',';
            out << fibers_[i][k];
        }
    }
    out << ']';
    return out.str();
}

Morphism compose(const Morphism& f, const Morphism& g)
{
    if (f.target() != g.source())
        throw DomainError("cannot compose " + f.to_string() + " with " + g.to_string() + ": target/source mismatch");
    std::vector<std::vector<int>> fibers(static_cast<std::size_t>(g.target()) + 1);
    for (int i = 0; i <= g.target(); ++i) {
        auto& out = fibers[static_cast<std::size_t>(i)];
        for (int j : g.fiber(i)) {
            const auto& block = f.fiber(j);
            out.insert(out.end(), block.begin(), block.end());
        }
    }
    return Morphism(f.source(), std::move(fibers));
}

std::pair<Permutation, OrderPreservingMap> factorize(const Morphism& f)
{
    std::vector<int> images(static_cast<std::size_t>(f.source()) + 1);
    std::vector<int> values;
    values.reserve(images.size());
    int position = 0;
    for (int i = 0; i <= f.target(); ++i) {
        for (int j : f.fiber(i)) {
            images[static_cast<std::size_t>(j)] = position++;
            values.push_back(i);
        }
    }
    return {Permutation(std::move(images)), OrderPreservingMap(std::move(values), f.target())};
}

Permutation to_permutation(const Morphism& f)
{
    if (!f.is_automorphism())
        throw DomainError(f.to_string() + " is not an automorphism");
    std::vector<int> images(static_cast<std::size_t>(f.source()) + 1);
    for (int i = 0; i <= f.target(); ++i)
        images[static_cast<std::size_t>(f.fiber(i).front())] = i;
    return Permutation(std::move(images));
}

namespace
{

// Calls visit(sizes) for every vector of `parts` entries >= minimum summing to total, lexicographically.
void for_each_composition(int total, int parts, int minimum, const std::function<void(const std::vector<int>&)>& visit)
{
    std::vector<int> sizes(static_cast<std::size_t>(parts), 0);
    std::function<void(int, int)> rec = [&](int index, int remaining) {
        if (index == parts - 1) {
            if (remaining >= minimum) {
                sizes[static_cast<std::size_t>(index)] = remaining;
                visit(sizes);
            }
            return;
        }
        int reserve = minimum * (parts - index - 1);
        for (int s = minimum; s <= remaining - reserve; ++s) {
            sizes[static_cast<std::size_t>(index)] = s;
            rec(index + 1, remaining - s);
        }
    };
    rec(0, total);
}

std::vector<Morphism> enumerate_with_minimum(int m, int n, int minimum)
{
    std::vector<Morphism> result;
    if (m < 0 || n < 0)
        return result;
    if (minimum > 0 && m < n)
        return result;
    for_each_composition(m + 1, n + 1, minimum, [&](const std::vector<int>& sizes) {
        std::vector<int> word(static_cast<std::size_t>(m) + 1);
        std::iota(word.begin(), word.end(), 0);
        do {
            std::vector<std::vector<int>> fibers;
            fibers.reserve(sizes.size());
            auto it = word.begin();
            for (int s : sizes) {
                fibers.emplace_back(it, it + s);
                it += s;
            }
            result.emplace_back(m, std::move(fibers));
        } while (std::next_permutation(word.begin(), word.end()));
    });
    return result;
}

Integer factorial(int n)
{
    Integer r = 1;
    for (int k = 2; k <= n; ++k)
        r *= k;
    return r;
}

} // namespace

std::vector<Morphism> enumerate_epis(int m, int n) { return enumerate_with_minimum(m, n, 1); }

std::vector<Morphism> enumerate_morphisms(int m, int n) { return enumerate_with_minimum(m, n, 0); }

Integer epi_count(int m, int n)
{
    if (m < n || n < 0)
        return 0;
    return factorial(m + 1) * factorial(m) / (factorial(n) * factorial(m - n));
}

Integer morphism_count(int m, int n)
{
    if (m < 0 || n < 0)
        return 0;
    return factorial(m + n + 1) / factorial(n);
}

std::size_t MorphismHash::operator()(const Morphism& f) const noexcept
{
    std::size_t h = static_cast<std::size_t>(f.source()) * 0x9E3779B97F4A7C15ull;
    for (const auto& fiber : f.fibers()) {
        h = (h ^ 0xFFu) * 0x100000001B3ull;
        for (int j : fiber)
            h = (h ^ static_cast<std::size_t>(j)) * 0x100000001B3ull;
    }
    return h;
}

} // namespace symhom::deltas

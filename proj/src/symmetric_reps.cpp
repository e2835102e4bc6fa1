#include "symhom/symmetric_reps.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "symhom/sym_complex.hpp"

namespace symhom::reps
{

using deltas::Permutation;
using linalg::SparseExactMatrix;

namespace
{

void partitions_rec(int remaining, int largest, Partition& current, std::vector<Partition>& out)
{
    if (remaining == 0) {
        out.push_back(current);
        return;
    }
    for (int part = std::min(remaining, largest); part >= 1; --part) {
        current.push_back(part);
        partitions_rec(remaining - part, part, current, out);
        current.pop_back();
    }
}

Integer factorial(int n)
{
    Integer f = 1;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

void check_partition(const Partition& lambda)
{
    for (std::size_t k = 0; k < lambda.size(); ++k)
        if (lambda[k] <= 0 || (k > 0 && lambda[k] > lambda[k - 1]))
            throw DomainError("not a partition: " + partition_string(lambda));
}

int size_of(const Partition& lambda) { return std::accumulate(lambda.begin(), lambda.end(), 0); }

// beta numbers of lambda with L = lambda.size() beads
Integer mn_value(const Partition& lambda, const Partition& mu, std::size_t offset,
                 std::map<std::pair<Partition, std::size_t>, Integer>& memo)
{
    if (offset == mu.size())
        return lambda.empty() ? 1 : 0;
    auto key = std::make_pair(lambda, offset);
    if (auto it = memo.find(key); it != memo.end())
        return it->second;

    int L = static_cast<int>(lambda.size());
    std::set<int> beta;
    for (int j = 0; j < L; ++j)
        beta.insert(lambda[static_cast<std::size_t>(j)] + (L - 1 - j));
    int r = mu[offset];
    Integer total = 0;
    for (int b : beta) {
        int target = b - r;
        if (target < 0 || beta.count(target))
            continue;
        int between = 0;
        for (int c : beta)
            if (c > target && c < b)
                ++between;
        auto moved = beta;
        moved.erase(b);
        moved.insert(target);
        Partition next;
        int j = 0;
        for (auto it = moved.rbegin(); it != moved.rend(); ++it, ++j) {
            int part = *it - (L - 1 - j);
            if (part > 0)
                next.push_back(part);
        }
        Integer v = mn_value(next, mu, offset + 1, memo);
        total += (between % 2 ? -v : v);
    }
    memo.emplace(std::move(key), total);
    return total;
}

// Sigma_{p+1} reps of every class, in partitions() order.
std::vector<Permutation> class_representatives(int n)
{
    std::vector<Permutation> out;
    for (auto& lambda : partitions(n))
        out.push_back(class_representative(lambda));
    return out;
}

ClassFunction from_traces(int n, const std::vector<std::int64_t>& traces)
{
    ClassFunction chi;
    chi.n = n;
    auto parts = partitions(n);
    for (std::size_t k = 0; k < parts.size(); ++k)
        chi.values[parts[k]] = Rational(traces[k]);
    return chi;
}

} // namespace

std::vector<Partition> partitions(int n)
{
    if (n < 0)
        throw DomainError("partitions of a negative number");
    std::vector<Partition> out;
    Partition current;
    partitions_rec(n, n, current, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::string partition_string(const Partition& lambda)
{
    std::string s;
    for (std::size_t k = 0; k < lambda.size(); ++k)
        s += (k ? "+" : "") + std::to_string(lambda[k]);
    return s.empty() ? "0" : s;
}

Partition parse_partition(const std::string& text)
{
    Partition lambda;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto next = text.find('+', pos);
        auto piece = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            int part = std::stoi(piece, &used);
            if (used != piece.size())
                throw ValidationError("bad partition: " + text);
            lambda.push_back(part);
        }
        catch (const std::logic_error&) {
            throw ValidationError("bad partition: " + text);
        }
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    std::sort(lambda.rbegin(), lambda.rend());
    if (lambda.front() <= 0)
        throw ValidationError("bad partition: " + text);
    return lambda;
}

Integer centralizer_order(const Partition& lambda)
{
    check_partition(lambda);
    Integer z = 1;
    std::map<int, int> counts;
    for (int part : lambda)
        ++counts[part];
    for (auto [part, m] : counts) {
        for (int k = 0; k < m; ++k)
            z *= part;
        z *= factorial(m);
    }
    return z;
}

Integer class_size(const Partition& lambda) { return factorial(size_of(lambda)) / centralizer_order(lambda); }

Permutation class_representative(const Partition& lambda)
{
    check_partition(lambda);
    std::vector<int> images;
    int start = 0;
    for (int part : lambda) {
        for (int k = 0; k < part; ++k)
            images.push_back(start + (k + 1) % part);
        start += part;
    }
    return Permutation(images);
}

Partition cycle_type(const Permutation& g) { return g.cycle_type(); }

Rational ClassFunction::at(const Partition& lambda) const
{
    auto it = values.find(lambda);
    if (it == values.end())
        throw DomainError("class function on Sigma_" + std::to_string(n) + " has no value at "
                          + partition_string(lambda));
    return it->second;
}

nlohmann::json ClassFunction::to_json() const
{
    nlohmann::json v = nlohmann::json::object();
    for (auto& [lambda, value] : values) {
        if (is_integral(value))
            v[partition_string(lambda)] = static_cast<long long>(numerator(value));
        else
            v[partition_string(lambda)] = symhom::to_string(value);
    }
    return {{"n", n}, {"values", v}};
}

ClassFunction ClassFunction::from_json(const nlohmann::json& j)
{
    ClassFunction chi;
    chi.n = j.at("n").get<int>();
    for (auto& [key, value] : j.at("values").items()) {
        auto lambda = parse_partition(key);
        if (size_of(lambda) != chi.n)
            throw ValidationError("partition " + key + " is not of " + std::to_string(chi.n));
        chi.values[lambda] = value.is_string() ? Rational(value.get<std::string>()) : Rational(value.get<long long>());
    }
    return chi;
}

Rational inner_product(const ClassFunction& a, const ClassFunction& b)
{
    if (a.n != b.n)
        throw DomainError("class functions on different symmetric groups");
    Rational sum = 0;
    for (auto& lambda : partitions(a.n))
        sum += Rational(class_size(lambda)) * a.at(lambda) * b.at(lambda);
    return sum / Rational(factorial(a.n));
}

Integer character_value(const Partition& lambda, const Partition& mu)
{
    check_partition(lambda);
    check_partition(mu);
    if (size_of(lambda) != size_of(mu))
        throw DomainError("partitions of different sizes");
    std::map<std::pair<Partition, std::size_t>, Integer> memo;
    return mn_value(lambda, mu, 0, memo);
}

std::map<Partition, ClassFunction> irreducible_characters(int n)
{
    if (n < 1)
        throw DomainError("irreducible characters need n >= 1");
    std::map<Partition, ClassFunction> table;
    auto parts = partitions(n);
    for (auto& lambda : parts) {
        ClassFunction chi;
        chi.n = n;
        std::map<std::pair<Partition, std::size_t>, Integer> memo;
        for (auto& mu : parts) {
            memo.clear();
            chi.values[mu] = Rational(mn_value(lambda, mu, 0, memo));
        }
        table.emplace(lambda, std::move(chi));
    }
    return table;
}

Rational multiplicity(const ClassFunction& chi, const Partition& lambda)
{
    check_partition(lambda);
    if (size_of(lambda) != chi.n)
        throw DomainError("partition " + partition_string(lambda) + " is not of " + std::to_string(chi.n));
    ClassFunction irreducible;
    irreducible.n = chi.n;
    std::map<std::pair<Partition, std::size_t>, Integer> memo;
    for (auto& mu : partitions(chi.n)) {
        memo.clear();
        irreducible.values[mu] = Rational(mn_value(lambda, mu, 0, memo));
    }
    return inner_product(chi, irreducible);
}

std::vector<std::int64_t> homology_traces_at(int p, int i, const std::vector<Permutation>& g)
{
    auto C = sym::build_complex(p, RingSpec::integers());
    std::vector<homology::TraceInput> maps;
    for (auto& h : g) {
        if (h.size() != p + 1)
            throw DomainError("permutation " + h.to_string() + " does not act on Sym^(" + std::to_string(p) + ")");
        maps.push_back({sym::action_matrix(h, p, i),
                        i + 1 <= p ? sym::action_matrix(h, p, i + 1) : SparseExactMatrix(0, 0)});
    }
    return homology::homology_traces(C, i, maps);
}

ClassFunction homology_character(int p, int i, TraceMethod method)
{
    auto reps = class_representatives(p + 1);
    if (method == TraceMethod::Modular)
        return from_traces(p + 1, homology_traces_at(p, i, reps));

    auto C = sym::build_complex(p, RingSpec::integers());
    ClassFunction chi;
    chi.n = p + 1;
    auto parts = partitions(p + 1);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        auto M = homology::induced_map_on_homology(C, i, sym::action_matrix(reps[k], p, i));
        Rational t = 0;
        for (std::size_t r = 0; r < M.size(); ++r)
            t += M[r][r];
        chi.values[parts[k]] = t;
    }
    return chi;
}

ClassFunction chain_character(int p, int i)
{
    auto reps = class_representatives(p + 1);
    std::vector<std::int64_t> traces;
    for (auto& g : reps) {
        auto A = sym::action_matrix(g, p, i);
        std::int64_t t = 0;
        for (std::size_t c = 0; c < A.cols(); ++c)
            t += static_cast<std::int64_t>(numerator(A.at(c, c)));
        traces.push_back(t);
    }
    return from_traces(p + 1, traces);
}

ClassFunction induced_cyclic_character(int p)
{
    if (p < 0)
        throw DomainError("induced character needs p >= 0");
    int n = p + 1;
    auto c = class_representative(Partition{n});
    ClassFunction chi;
    chi.n = n;
    for (auto& lambda : partitions(n))
        chi.values[lambda] = 0;
    auto power = Permutation::identity(n);
    for (int k = 0; k < n; ++k) {
        chi.values[power.cycle_type()] += (p * k) % 2 ? -1 : 1;
        power = power * c;
    }
    for (auto& [lambda, value] : chi.values)
        value *= Rational(centralizer_order(lambda)) / n;
    return chi;
}

homology::HomologyEntry group_homology_small(int n, int i, RingSpec ring)
{
    if (n < 1 || n > 4 || i < 0 || i > 3)
        throw UnsupportedError("group homology of Sigma_n is offered for 1 <= n <= 4 and 0 <= i <= 3, got n="
                               + std::to_string(n) + ", i=" + std::to_string(i));
    std::vector<Permutation> elements;
    std::vector<int> images(static_cast<std::size_t>(n));
    std::iota(images.begin(), images.end(), 0);
    do
        elements.emplace_back(images);
    while (std::next_permutation(images.begin(), images.end()));
    std::size_t order = elements.size();
    // index 0 is the identity; the normalized complex uses letters 1..order-1
    std::vector<std::vector<std::size_t>> product(order, std::vector<std::size_t>(order));
    for (std::size_t a = 0; a < order; ++a)
        for (std::size_t b = 0; b < order; ++b)
            product[a][b] = static_cast<std::size_t>(
                std::lower_bound(elements.begin(), elements.end(), elements[a] * elements[b]) - elements.begin());

    std::size_t m = order - 1;
    std::vector<std::size_t> ranks{1};
    for (int k = 1; k <= i + 1; ++k)
        ranks.push_back(ranks.back() * m);

    // tuple index: base-m digits, first letter most significant, letter value digit+1
    auto fn = [product, m, ranks](int k) {
        auto K = static_cast<std::size_t>(k);
        std::vector<linalg::Triplet> entries;
        std::vector<std::size_t> word(K);
        for (std::size_t col = 0; col < ranks[K]; ++col) {
            std::size_t x = col;
            for (std::size_t j = K; j-- > 0;) {
                word[j] = x % m + 1;
                x /= m;
            }
            auto index_of = [&](const std::vector<std::size_t>& w) {
                std::size_t idx = 0;
                for (auto letter : w)
                    idx = idx * m + (letter - 1);
                return idx;
            };
            std::vector<std::size_t> face(word.begin() + 1, word.end());
            entries.push_back({static_cast<std::uint32_t>(index_of(face)), static_cast<std::uint32_t>(col), 1});
            for (std::size_t j = 0; j + 1 < K; ++j) {
                auto g = product[word[j]][word[j + 1]];
                if (g == 0)
                    continue;
                face.assign(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(j));
                face.push_back(g);
                face.insert(face.end(), word.begin() + static_cast<std::ptrdiff_t>(j + 2), word.end());
                entries.push_back({static_cast<std::uint32_t>(index_of(face)), static_cast<std::uint32_t>(col),
                                   Rational((j + 1) % 2 ? -1 : 1)});
            }
            face.assign(word.begin(), word.end() - 1);
            entries.push_back({static_cast<std::uint32_t>(index_of(face)), static_cast<std::uint32_t>(col),
                               Rational(K % 2 ? -1 : 1)});
        }
        return SparseExactMatrix::from_triplets(ranks[K - 1], ranks[K], std::move(entries));
    };
    homology::ChainComplexDesc C("bar(Sigma_" + std::to_string(n) + ")", ring, 0, ranks, fn, false);
    return homology::homology(C, i);
}

} // namespace symhom::reps

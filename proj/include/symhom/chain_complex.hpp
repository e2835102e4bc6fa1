#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "symhom/common.hpp"
#include "symhom/linalg.hpp"

namespace symhom::homology
{

// A finite window of a chain complex C_min ... C_max with boundaries
// d_i : C_i -> C_{i-1}. Boundaries are produced on demand and cached.
//
// A complex is "bounded" when it really vanishes outside the window. For a
// truncation (bounded == false), d_{max+1} is unknown and asking for it
// throws TruncationError.
class ChainComplexDesc
{
public:
    using BoundaryFn = std::function<linalg::SparseExactMatrix(int degree)>;
    using LabelFn = std::function<std::string(int degree, std::size_t index)>;

    ChainComplexDesc() = default;
    ChainComplexDesc(std::string key, RingSpec ring, int min_degree, std::vector<std::size_t> ranks, BoundaryFn fn,
                     bool bounded = true);

    // boundaries[k] is d at degree min_degree + k + 1.
    static ChainComplexDesc from_matrices(std::string key, RingSpec ring, int min_degree,
                                          std::vector<std::size_t> ranks,
                                          std::vector<linalg::SparseExactMatrix> boundaries, bool bounded = true);

    // Identifies the complex in caches and reports.
    const std::string& key() const { return key_; }
    std::uint64_t hash() const { return fnv1a(key_ + "|" + ring_.name()); }
    const RingSpec& ring() const { return ring_; }
    int min_degree() const { return min_degree_; }
    int max_degree() const { return min_degree_ + static_cast<int>(ranks_.size()) - 1; }
    bool bounded() const { return bounded_; }
    std::size_t rank(int degree) const;

    // d_i. Degrees at or below min_degree give a 0 x rank map.
    std::shared_ptr<const linalg::SparseExactMatrix> boundary(int degree) const;
    bool has_boundary(int degree) const;

    // Checks d_{i-1} d_i = 0 for every pair inside the window; throws InternalError.
    void verify() const;

    void set_labels(LabelFn labels) { labels_ = std::move(labels); }
    std::string label(int degree, std::size_t index) const;

    // {"key":..., "ring":..., "min_degree":..., "ranks":[...], "boundaries":[{"degree","rows","cols","entries"}]}
    nlohmann::json to_json() const;

private:
    struct Cache
    {
        std::mutex mutex;
        std::map<int, std::shared_ptr<const linalg::SparseExactMatrix>> matrices;
    };

    std::string key_;
    RingSpec ring_ = RingSpec::integers();
    int min_degree_ = 0;
    std::vector<std::size_t> ranks_;
    BoundaryFn fn_;
    bool bounded_ = true;
    LabelFn labels_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

} // namespace symhom::homology

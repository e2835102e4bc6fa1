#include "symhom/chain_complex.hpp"

namespace symhom::homology
{

ChainComplexDesc::ChainComplexDesc(std::string key, RingSpec ring, int min_degree, std::vector<std::size_t> ranks,
                                   BoundaryFn fn, bool bounded)
    : key_(std::move(key))
    , ring_(ring)
    , min_degree_(min_degree)
    , ranks_(std::move(ranks))
    , fn_(std::move(fn))
    , bounded_(bounded)
{
}

ChainComplexDesc ChainComplexDesc::from_matrices(std::string key, RingSpec ring, int min_degree,
                                                 std::vector<std::size_t> ranks,
                                                 std::vector<linalg::SparseExactMatrix> boundaries, bool bounded)
{
    if (!ranks.empty() && boundaries.size() + 1 != ranks.size())
        throw DomainError("complex with " + std::to_string(ranks.size()) + " groups needs "
                          + std::to_string(ranks.size() - 1) + " boundaries, got "
                          + std::to_string(boundaries.size()));
    for (std::size_t k = 0; k < boundaries.size(); ++k)
        if (boundaries[k].rows() != ranks[k] || boundaries[k].cols() != ranks[k + 1])
            throw DomainError("boundary at degree " + std::to_string(min_degree + static_cast<int>(k) + 1)
                              + " has shape " + std::to_string(boundaries[k].rows()) + "x"
                              + std::to_string(boundaries[k].cols()));
    for (auto& d : boundaries)
        key += "#" + std::to_string(d.hash());
    auto shared = std::make_shared<std::vector<linalg::SparseExactMatrix>>(std::move(boundaries));
    return ChainComplexDesc(
        std::move(key), ring, min_degree, std::move(ranks),
        [shared, min_degree](int degree) { return (*shared)[static_cast<std::size_t>(degree - min_degree - 1)]; },
        bounded);
}

std::size_t ChainComplexDesc::rank(int degree) const
{
    if (degree < min_degree_ || degree > max_degree())
        return 0;
    return ranks_[static_cast<std::size_t>(degree - min_degree_)];
}

bool ChainComplexDesc::has_boundary(int degree) const { return degree <= max_degree() || bounded_; }

std::shared_ptr<const linalg::SparseExactMatrix> ChainComplexDesc::boundary(int degree) const
{
    if (!has_boundary(degree))
        throw TruncationError("truncation too small: the boundary into degree " + std::to_string(degree - 1)
                              + " lies outside the computed window of " + key_ + " (degrees "
                              + std::to_string(min_degree_) + ".." + std::to_string(max_degree()) + ")");
    {
        std::lock_guard lock(cache_->mutex);
        if (auto it = cache_->matrices.find(degree); it != cache_->matrices.end())
            return it->second;
    }
    std::shared_ptr<const linalg::SparseExactMatrix> m;
    if (degree <= min_degree_ || degree > max_degree()) {
        m = std::make_shared<linalg::SparseExactMatrix>(rank(degree - 1), rank(degree), ring_);
    }
    else {
        auto built = fn_(degree);
        if (built.rows() != rank(degree - 1) || built.cols() != rank(degree))
            throw InternalError("boundary at degree " + std::to_string(degree) + " of " + key_ + " has shape "
                                + std::to_string(built.rows()) + "x" + std::to_string(built.cols()) + ", expected "
                                + std::to_string(rank(degree - 1)) + "x" + std::to_string(rank(degree)));
        built.set_ring(ring_);
        m = std::make_shared<linalg::SparseExactMatrix>(std::move(built));
    }
    std::lock_guard lock(cache_->mutex);
    return cache_->matrices.emplace(degree, std::move(m)).first->second;
}

void ChainComplexDesc::verify() const
{
    for (int i = min_degree_ + 2; i <= max_degree(); ++i) {
        auto product = (*boundary(i - 1)) * (*boundary(i));
        if (ring_.kind == RingKind::PrimeField) {
            for (std::size_t k = 0; k < product.nnz(); ++k)
                if (reduce_mod(product.value(k), ring_.characteristic) != 0)
                    throw InternalError("d^2 != 0 at degree " + std::to_string(i) + " of " + key_);
        }
        else if (!product.is_zero()) {
            throw InternalError("d^2 != 0 at degree " + std::to_string(i) + " of " + key_);
        }
    }
}

std::string ChainComplexDesc::label(int degree, std::size_t index) const
{
    if (labels_)
        return labels_(degree, index);
    return "e" + std::to_string(degree) + "_" + std::to_string(index);
}

nlohmann::json ChainComplexDesc::to_json() const
{
    nlohmann::json out;
    out["key"] = key_;
    out["ring"] = ring_.name();
    out["min_degree"] = min_degree_;
    out["ranks"] = ranks_;
    out["boundaries"] = nlohmann::json::array();
    for (int i = min_degree_ + 1; i <= max_degree(); ++i) {
        auto d = boundary(i);
        nlohmann::json entries = nlohmann::json::array();
        for (auto& t : d->triplets())
            entries.push_back({t.row, t.col, to_string(t.value)});
        out["boundaries"].push_back({{"degree", i}, {"rows", d->rows()}, {"cols", d->cols()}, {"entries", entries}});
    }
    return out;
}

} // namespace symhom::homology

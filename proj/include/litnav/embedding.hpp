#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace litnav {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> v);

// Scales v to unit L2 norm in place. Returns false when the norm is
// (numerically) zero and the vector is left untouched.
bool l2_normalize(Vec& v);

struct SimilarityHit {
    std::string item_id;
    double score = 0.0;  // cosine of two unit vectors, i.e. their dot product
};

// Immutable set of unit vectors addressed by string id. Rows are kept
// sorted by id so that equal-score ties resolve by id ascending and the
// result is independent of insertion order.
class VectorStore {
public:
    explicit VectorStore(std::size_t dimension);

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }

    // Throws DimensionMismatch when v.size() != dimension().
    void add(std::string id, const Vec& v);

    // Sorts rows by id. Must be called once after the last add and before
    // any search. Idempotent.
    void freeze();

    const std::vector<std::string>& ids() const { return ids_; }
    std::span<const double> row(std::size_t i) const;

private:
    std::size_t dim_;
    bool frozen_ = false;
    std::vector<std::string> ids_;
    std::vector<double> data_;  // row-major, ids_.size() x dim_
};

// Exact top-k by cosine over the store: scores every row, then selects the
// k best ordered by score descending with ties broken by id ascending.
// Serial reference implementation.
std::vector<SimilarityHit> top_k_serial(const VectorStore& store,
                                        std::span<const double> query,
                                        std::size_t k);

// Same contract and bit-identical output as top_k_serial; the row-scoring
// loop is OpenMP-parallel. Each row's dot product is computed by a single
// thread in the same order as the serial path, so scores match exactly.
std::vector<SimilarityHit> top_k_parallel(const VectorStore& store,
                                          std::span<const double> query,
                                          std::size_t k,
                                          int threads = 0);

// Dispatches to the parallel kernel (threads <= 1 runs the serial path).
std::vector<SimilarityHit> top_k_similar(const VectorStore& store,
                                         std::span<const double> query,
                                         std::size_t k,
                                         int threads = 0);

}  // namespace litnav

#include "litnav/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "litnav/errors.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace litnav {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double l2_norm(std::span<const double> v) {
    return std::sqrt(dot(v, v));
}

bool l2_normalize(Vec& v) {
    const double n = l2_norm(v);
    if (n < 1e-12) return false;
    for (double& x : v) x /= n;
    return true;
}

VectorStore::VectorStore(std::size_t dimension) : dim_(dimension) {}

void VectorStore::add(std::string id, const Vec& v) {
    if (v.size() != dim_) throw DimensionMismatch(dim_, v.size());
    if (frozen_) throw Error("VectorStore: add after freeze");
    ids_.push_back(std::move(id));
    data_.insert(data_.end(), v.begin(), v.end());
}

void VectorStore::freeze() {
    if (frozen_) return;
    std::vector<std::size_t> order(ids_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ids_[a] < ids_[b]; });
    std::vector<std::string> ids(ids_.size());
    std::vector<double> data(data_.size());
    for (std::size_t to = 0; to < order.size(); ++to) {
        const std::size_t from = order[to];
        ids[to] = std::move(ids_[from]);
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(from * dim_), dim_,
                    data.begin() + static_cast<std::ptrdiff_t>(to * dim_));
    }
    ids_ = std::move(ids);
    data_ = std::move(data);
    frozen_ = true;
}

std::span<const double> VectorStore::row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
}

namespace {

// Selection shared by both kernels: scores[] is indexed by frozen row
// order (id ascending), so index order is the tie-break order.
std::vector<SimilarityHit> select_top_k(const VectorStore& store,
                                        const std::vector<double>& scores,
                                        std::size_t k) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t take = std::min(k, n);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) return scores[a] > scores[b];
                          return a < b;
                      });
    std::vector<SimilarityHit> hits;
    hits.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        hits.push_back({store.ids()[idx[i]], scores[idx[i]]});
    }
    return hits;
}

void check_query(const VectorStore& store, std::span<const double> query) {
    if (query.size() != store.dimension()) {
        throw DimensionMismatch(store.dimension(), query.size());
    }
}

}  // namespace

std::vector<SimilarityHit> top_k_serial(const VectorStore& store,
                                        std::span<const double> query,
                                        std::size_t k) {
    check_query(store, query);
    if (k == 0) throw Error("top_k: k must be >= 1");
    std::vector<double> scores(store.size());
    for (std::size_t i = 0; i < store.size(); ++i) {
        scores[i] = dot(query, store.row(i));
    }
    return select_top_k(store, scores, k);
}

std::vector<SimilarityHit> top_k_parallel(const VectorStore& store,
                                          std::span<const double> query,
                                          std::size_t k,
                                          int threads) {
    check_query(store, query);
    if (k == 0) throw Error("top_k: k must be >= 1");
    std::vector<double> scores(store.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(store.size());
#if defined(_OPENMP)
    if (threads > 0) {
#pragma omp parallel for schedule(static) num_threads(threads)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            scores[static_cast<std::size_t>(i)] = dot(query, store.row(static_cast<std::size_t>(i)));
        }
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            scores[static_cast<std::size_t>(i)] = dot(query, store.row(static_cast<std::size_t>(i)));
        }
    }
#else
    (void)threads;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        scores[static_cast<std::size_t>(i)] = dot(query, store.row(static_cast<std::size_t>(i)));
    }
#endif
    return select_top_k(store, scores, k);
}

std::vector<SimilarityHit> top_k_similar(const VectorStore& store,
                                         std::span<const double> query,
                                         std::size_t k,
                                         int threads) {
    if (threads == 1) return top_k_serial(store, query, k);
    return top_k_parallel(store, query, k, threads);
}

}  // namespace litnav

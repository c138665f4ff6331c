#pragma once

// Short-term classifier: KNN over a sliding window of co-labeled samples.
// Score is the positive fraction among the k nearest stored samples
// (Euclidean), so it always lands in [0,1].

#include <algorithm>
#include <vector>

#include "cotrack/errors.hpp"
#include "cotrack/labeled_store.hpp"

namespace cotrack {

class KnnClassifier {
  public:
    KnnClassifier(int k, int window) : k_(k), store_(window) {
        if (k < 1) throw ConfigError("knn: k must be >= 1");
    }

    const LabeledStore& store() const { return store_; }
    LabeledStore& store() { return store_; }
    int k() const { return k_; }

    void update(int t, std::vector<std::pair<FeatureVector, int>> samples) {
        for (auto& [x, label] : samples) store_.insert(t, std::move(x), label);
        store_.evict(t);
    }

    // Positive fraction among the k' = min(k, store size) nearest entries.
    // Distance ties break toward the lower frame stamp, then insertion order.
    double score(const FeatureVector& x) const {
        if (store_.empty()) throw TrackError("knn: scoring with an empty sample store");
        const auto& entries = store_.entries();
        const std::size_t n = entries.size();
        const std::size_t kp = std::min<std::size_t>(k_, n);

        struct Hit {
            double d2;
            int t;
            std::uint64_t order;
            int label;
        };
        std::vector<Hit> hits;
        hits.reserve(n);
        for (const auto& e : entries) {
            double d2 = 0.0;
            const double* a = x.data();
            const double* b = e.x.data();
            const std::size_t dim = x.size();
            for (std::size_t i = 0; i < dim; ++i) {
                const double d = a[i] - b[i];
                d2 += d * d;
            }
            hits.push_back({d2, e.t, e.order, e.label});
        }
        auto closer = [](const Hit& l, const Hit& r) {
            if (l.d2 != r.d2) return l.d2 < r.d2;
            if (l.t != r.t) return l.t < r.t;
            return l.order < r.order;
        };
        std::partial_sort(hits.begin(), hits.begin() + kp, hits.end(), closer);
        int pos = 0;
        for (std::size_t i = 0; i < kp; ++i)
            if (hits[i].label > 0) ++pos;
        return static_cast<double>(pos) / static_cast<double>(kp);
    }

  private:
    int k_;
    LabeledStore store_;
};

}  // namespace cotrack

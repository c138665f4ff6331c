#pragma once

#include <cstdint>
#include <deque>

#include "cotrack/errors.hpp"
#include "cotrack/features.hpp"

namespace cotrack {

struct LabeledSample {
    int t = 0;  // frame stamp
    FeatureVector x;
    int label = -1;          // +1 or -1
    std::uint64_t order = 0;  // insertion id, breaks distance ties
};

// Co-labeled sample store. window > 0 keeps a sliding window of the last
// `window` frame stamps (entries with t <= current - window are dropped);
// window == 0 keeps everything.
class LabeledStore {
  public:
    explicit LabeledStore(int window = 0) : window_(window) {}

    int window() const { return window_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::deque<LabeledSample>& entries() const { return entries_; }

    void insert(int t, FeatureVector x, int label) {
        if (t < last_t_) throw TrackError("labeled store: frame stamps must be nondecreasing");
        last_t_ = t;
        entries_.push_back({t, std::move(x), label, next_order_++});
        evict(t);
    }

    // Eviction may also be driven without inserts (empty update frames).
    void evict(int current_t) {
        if (window_ <= 0) return;
        while (!entries_.empty() && entries_.front().t <= current_t - window_) entries_.pop_front();
    }

    int positives() const {
        int n = 0;
        for (const auto& e : entries_)
            if (e.label > 0) ++n;
        return n;
    }
    int negatives() const { return static_cast<int>(entries_.size()) - positives(); }

    void clear() {
        entries_.clear();
        next_order_ = 0;
        last_t_ = 0;
    }

  private:
    int window_;
    std::deque<LabeledSample> entries_;
    std::uint64_t next_order_ = 0;
    int last_t_ = 0;
};

}  // namespace cotrack

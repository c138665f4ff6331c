#pragma once

// Uncertainty state for the query policy. Per-sample uncertainty is
// u = 1 - 2|h - tau|: maximal at the decision boundary, zero at confident
// scores. A frame's scores become an n_b-bin histogram of u, summarized into
// a small discrete state (mean bin, variance bin, shape class).

#include <algorithm>
#include <cmath>
#include <compare>
#include <string>
#include <vector>

#include "cotrack/errors.hpp"

namespace cotrack {

inline double uncertainty(double h, double tau) {
    return std::clamp(1.0 - 2.0 * std::abs(h - tau), 0.0, 1.0);
}

struct UncertaintyHistogram {
    std::vector<int> bins;  // bin b covers u in [b/n_b, (b+1)/n_b), last bin closed
    int total = 0;

    int n_b() const { return static_cast<int>(bins.size()); }
};

inline UncertaintyHistogram build_histogram(const std::vector<double>& scores, double tau, int n_b) {
    if (scores.empty()) throw TrackError("uncertainty histogram: empty score list");
    if (n_b < 1) throw ConfigError("uncertainty histogram: n_b must be >= 1");
    UncertaintyHistogram h;
    h.bins.assign(n_b, 0);
    h.total = static_cast<int>(scores.size());
    for (double s : scores) {
        const double u = uncertainty(s, tau);
        int b = static_cast<int>(u * n_b);
        if (b >= n_b) b = n_b - 1;  // u == 1 falls into the last bin
        ++h.bins[b];
    }
    return h;
}

enum class HistShape { CertainSkewed, UncertainSkewed, Bimodal, Flat };

inline const char* hist_shape_name(HistShape s) {
    switch (s) {
        case HistShape::CertainSkewed: return "CERTAIN_SKEWED";
        case HistShape::UncertainSkewed: return "UNCERTAIN_SKEWED";
        case HistShape::Bimodal: return "BIMODAL";
        case HistShape::Flat: return "FLAT";
    }
    return "?";
}

inline HistShape parse_hist_shape(const std::string& s) {
    if (s == "CERTAIN_SKEWED") return HistShape::CertainSkewed;
    if (s == "UNCERTAIN_SKEWED") return HistShape::UncertainSkewed;
    if (s == "BIMODAL") return HistShape::Bimodal;
    if (s == "FLAT") return HistShape::Flat;
    throw DataError("unknown histogram shape: " + s);
}

// Shape taxonomy. Smooth with a 5-bin moving average, find peaks (plateau
// runs whose neighbors are strictly lower) carrying more than 5% of the
// mass; two peaks at least 20 bins apart read as bimodal. Otherwise classify
// by where the mass sits: >= 60% below u=0.3 is certainty-skewed, >= 60%
// above u=0.7 is uncertainty-skewed, anything else is flat.
inline HistShape classify_shape(const UncertaintyHistogram& hist) {
    const int n = hist.n_b();
    std::vector<double> smooth(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - 2);
        const int hi = std::min(n - 1, i + 2);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += hist.bins[j];
        smooth[i] = sum / (hi - lo + 1);
    }

    const double mass_threshold = 0.05 * hist.total;
    std::vector<int> peak_pos;
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && smooth[j + 1] == smooth[i]) ++j;  // plateau [i, j]
        const bool left_lower = (i == 0) || smooth[i - 1] < smooth[i];
        const bool right_lower = (j == n - 1) || smooth[j + 1] < smooth[i];
        if (left_lower && right_lower && smooth[i] > mass_threshold)
            peak_pos.push_back((i + j) / 2);
        i = j + 1;
    }
    if (peak_pos.size() >= 2 && peak_pos.back() - peak_pos.front() >= 20) return HistShape::Bimodal;

    int low_mass = 0;
    int high_mass = 0;
    const int low_edge = static_cast<int>(0.3 * n);   // bins fully below u = 0.3
    const int high_edge = static_cast<int>(0.7 * n);  // bins at or above u = 0.7
    for (int b = 0; b < n; ++b) {
        if (b < low_edge) low_mass += hist.bins[b];
        if (b >= high_edge) high_mass += hist.bins[b];
    }
    if (low_mass >= 0.6 * hist.total) return HistShape::CertainSkewed;
    if (high_mass >= 0.6 * hist.total) return HistShape::UncertainSkewed;
    return HistShape::Flat;
}

// Discrete policy state: 10 mean bins x 5 variance bins x 4 shapes = 200 keys.
struct StateKey {
    int mean_bin = 0;  // [0, 10)
    int var_bin = 0;   // [0, 5)
    HistShape shape = HistShape::Flat;

    auto operator<=>(const StateKey&) const = default;
};

inline StateKey featurize_state(const UncertaintyHistogram& hist) {
    if (hist.total <= 0) throw TrackError("featurize_state: empty histogram");
    const int n = hist.n_b();
    double mean = 0.0;
    for (int b = 0; b < n; ++b) mean += hist.bins[b] * ((b + 0.5) / n);
    mean /= hist.total;
    double var = 0.0;
    for (int b = 0; b < n; ++b) {
        const double d = (b + 0.5) / n - mean;
        var += hist.bins[b] * d * d;
    }
    var /= hist.total;

    StateKey key;
    key.mean_bin = std::min(9, static_cast<int>(mean * 10.0));
    // variance of a [0,1] variable tops out at 0.25; 5 equal bins over that
    key.var_bin = std::min(4, static_cast<int>(var * 20.0));
    key.shape = classify_shape(hist);
    return key;
}

// Four-regime reward on the overlap between estimate and ground truth.
// streak_below_half counts consecutive evaluated frames (current included)
// with overlap < 0.5.
inline double reward(double iou_value, int streak_below_half, int streak_limit = 5,
                     bool triple_flat = false) {
    if (iou_value > 0.9) return triple_flat ? 3.0 : 3.0 * iou_value;
    if (iou_value >= 0.5) return iou_value;
    return streak_below_half >= streak_limit ? -3.0 : 0.0;
}

}  // namespace cotrack

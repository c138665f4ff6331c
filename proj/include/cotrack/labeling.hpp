#pragma once

// Per-sample labeling rules of the co-tracking family. Three regimes:
//   - single:   threshold the main classifier score.
//   - cotrack:  both classifiers vote; when one is below threshold the other
//               decides alone, otherwise a weighted vote decides. The two
//               guard cases can overlap; they are evaluated in the listed
//               order, first hit wins.
//   - active:   the main classifier decides alone unless its score falls
//               within margin delta of the threshold, in which case the
//               auxiliary classifier is consulted for this sample only.
// sign(0) counts as background throughout.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "cotrack/features.hpp"
#include "cotrack/geometry.hpp"

namespace cotrack {

enum class LabelSource { Main, Aux, Vote };

struct ScoredSample {
    BoundingBox box;
    FeatureVector features;  // populated only when the config asks to keep them
    double h1 = 0.0;
    std::optional<double> h2;
    int label = -1;
    LabelSource source = LabelSource::Main;
};

inline int sign_label(double z) { return z > 0.0 ? +1 : -1; }

inline int label_single(double h, double tau) { return sign_label(h - tau); }

inline std::pair<int, LabelSource> label_cotrack(double h1, double h2, double alpha1, double alpha2,
                                                 double tau) {
    if (h2 < tau) return {sign_label(h1 - tau), LabelSource::Main};
    if (h1 < tau) return {sign_label(h2 - tau), LabelSource::Aux};
    return {sign_label(alpha1 * h1 + alpha2 * h2 - tau), LabelSource::Vote};
}

struct ActiveLabel {
    int label;
    std::optional<double> h2;
    LabelSource source;
};

// aux_scorer is invoked at most once, and only when the sample is uncertain
// (|h1 - tau| <= delta).
template <typename AuxScorer>
ActiveLabel label_active(double h1, double tau, double delta, AuxScorer&& aux_scorer) {
    if (std::abs(h1 - tau) > delta) return {sign_label(h1 - tau), std::nullopt, LabelSource::Main};
    const double h2 = aux_scorer();
    return {sign_label(h2 - tau), h2, LabelSource::Aux};
}

// Voting weights from label consistency over this frame's dual-scored
// samples. Returns the previous weights when no sample carries both scores.
inline std::pair<double, double> update_alpha(const std::vector<ScoredSample>& samples, double tau,
                                              std::pair<double, double> previous) {
    constexpr double eps = 1e-6;
    int dual = 0;
    int agree1 = 0;
    int agree2 = 0;
    for (const auto& s : samples) {
        if (!s.h2) continue;
        ++dual;
        if (label_single(s.h1, tau) == s.label) ++agree1;
        if (label_single(*s.h2, tau) == s.label) ++agree2;
    }
    if (dual == 0) return previous;
    const double c1 = static_cast<double>(agree1) / dual;
    const double c2 = static_cast<double>(agree2) / dual;
    return {(c1 + eps) / (c1 + c2 + 2 * eps), (c2 + eps) / (c1 + c2 + 2 * eps)};
}

// Long-term classifier retrains on frames t = k*delta_period.
inline bool schedule_aux_update(int t, int delta_period) { return t % delta_period == 0; }

// Target state from the positive samples, weighted by the score that decided
// each label (main -> h1, aux -> h2, vote -> the blended score). No positive
// samples means the target is lost this frame; the previous state is kept.
inline std::pair<BoundingBox, bool> estimate_target(const std::vector<ScoredSample>& samples,
                                                    const BoundingBox& previous, double alpha1,
                                                    double alpha2) {
    double wsum = 0.0, cx = 0.0, cy = 0.0, w = 0.0, h = 0.0;
    for (const auto& s : samples) {
        if (s.label <= 0) continue;
        double weight = s.h1;
        if (s.source == LabelSource::Aux)
            weight = *s.h2;
        else if (s.source == LabelSource::Vote)
            weight = alpha1 * s.h1 + alpha2 * (*s.h2);
        wsum += weight;
        cx += weight * s.box.cx();
        cy += weight * s.box.cy();
        w += weight * s.box.w;
        h += weight * s.box.h;
    }
    if (wsum <= 0.0) return {previous, true};
    return {BoundingBox::from_center(cx / wsum, cy / wsum, w / wsum, h / wsum), false};
}

}  // namespace cotrack

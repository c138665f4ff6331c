#pragma once

// The per-frame tracking loop. Each frame is processed in two phases:
//
//   score_frame(frame)   — deterministic candidate grid around the last
//                          state, feature extraction, main-classifier scores.
//   commit_frame(delta)  — label every candidate (mode-dependent), estimate
//                          the target by score-weighted vote over positives,
//                          update the short-term store every frame and
//                          retrain the long-term classifier on schedule.
//
// The split exists so a query policy can look at the score histogram before
// choosing the margin for the very frame that produced it.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cotrack/errors.hpp"
#include "cotrack/features.hpp"
#include "cotrack/frame.hpp"
#include "cotrack/geometry.hpp"
#include "cotrack/knn.hpp"
#include "cotrack/labeling.hpp"
#include "cotrack/qtable.hpp"
#include "cotrack/sampling.hpp"
#include "cotrack/sequence.hpp"
#include "cotrack/svm.hpp"
#include "cotrack/tracker_config.hpp"
#include "cotrack/uncertainty.hpp"

namespace cotrack {

struct FrameResult {
    int frame = 0;
    BoundingBox estimate;
    std::vector<ScoredSample> samples;
    double queried_fraction = 0.0;
    double delta_used = std::numeric_limits<double>::quiet_NaN();  // NaN when no margin applies
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    bool lost = false;
};

class Tracker {
  public:
    explicit Tracker(const TrackerConfig& cfg)
        : cfg_(cfg),
          extractor_(cfg.features, cfg.colorname_table.empty()
                                       ? ColorNameTable::builtin()
                                       : ColorNameTable::load(cfg.colorname_table)),
          knn_(cfg.knn_k, cfg.delta_period),
          history_(0) {
        cfg_.validate();
    }

    const TrackerConfig& config() const { return cfg_; }
    bool initialized() const { return t_ > 0; }
    int frame_index() const { return t_; }
    const BoundingBox& last_estimate() const { return last_; }
    const KnnClassifier& knn() const { return knn_; }
    const SvmModel& svm() const { return svm_; }
    std::pair<double, double> alpha() const { return {alpha1_, alpha2_}; }

    // Frame 1: seed both stores from overlap with the annotated box, train
    // the long-term classifier once so it can answer queries immediately.
    FrameResult init(const Frame& frame, const BoundingBox& init_box) {
        if (initialized()) throw TrackError("tracker: init called twice");
        if (!init_box.valid()) throw DataError("tracker: initialization box is degenerate");
        t_ = 1;
        last_ = init_box;

        const SampleGrid grid = make_grid(init_box, frame.width, frame.height, cfg_.n_s, cfg_.scales);
        std::vector<std::pair<FeatureVector, int>> seeds;
        for (const auto& cand : grid.positions) {
            const BoundingBox box = cand.box(init_box);
            const double overlap = iou(box, init_box);
            int label = 0;
            if (overlap > cfg_.init_pos_iou)
                label = +1;
            else if (overlap < cfg_.init_neg_iou)
                label = -1;
            else
                continue;  // ambiguous overlap, discarded at bootstrap
            seeds.emplace_back(extractor_.extract(frame, box), label);
        }
        for (const auto& [x, label] : seeds) history_.insert(1, x, label);
        knn_.update(1, std::move(seeds));
        svm_ = retrain_aux(1);

        FrameResult res;
        res.frame = 1;
        res.estimate = init_box;
        res.alpha1 = alpha1_;
        res.alpha2 = alpha2_;
        return res;
    }

    // Phase 1: sample, featurize, score with the main classifier.
    const std::vector<double>& score_frame(const Frame& frame) {
        if (!initialized()) throw TrackError("tracker: score_frame before init");
        if (pending_) throw TrackError("tracker: score_frame called twice without commit");
        pending_ = Pending{};
        pending_->grid = make_grid(last_, frame.width, frame.height, cfg_.n_s, cfg_.scales);
        pending_->boxes.reserve(cfg_.n_s);
        pending_->features.reserve(cfg_.n_s);
        pending_->h1.reserve(cfg_.n_s);
        for (const auto& cand : pending_->grid.positions) {
            BoundingBox box = cand.box(last_);
            pending_->features.push_back(extractor_.extract(frame, box));
            pending_->boxes.push_back(box);
        }
        for (const auto& x : pending_->features) pending_->h1.push_back(knn_.score(x));
        return pending_->h1;
    }

    // Phase 2: label, estimate, update. `delta` is honored in the active
    // modes and ignored otherwise.
    FrameResult commit_frame(double delta = std::numeric_limits<double>::quiet_NaN()) {
        if (!pending_) throw TrackError("tracker: commit_frame without score_frame");
        Pending pending = std::move(*pending_);
        pending_.reset();
        ++t_;

        FrameResult res;
        res.frame = t_;

        std::vector<ScoredSample> samples;
        samples.reserve(cfg_.n_s);
        int queried = 0;
        for (int i = 0; i < static_cast<int>(pending.boxes.size()); ++i) {
            ScoredSample s;
            s.box = pending.boxes[i];
            s.h1 = pending.h1[i];
            switch (cfg_.mode) {
                case LabelMode::Single:
                    s.label = label_single(s.h1, cfg_.tau);
                    s.source = LabelSource::Main;
                    break;
                case LabelMode::Cotrack: {
                    s.h2 = svm_score(svm_, pending.features[i]);
                    const auto [label, source] = label_cotrack(s.h1, *s.h2, alpha1_, alpha2_, cfg_.tau);
                    s.label = label;
                    s.source = source;
                    break;
                }
                case LabelMode::ActiveFixed:
                case LabelMode::ActiveQlearn: {
                    if (std::isnan(delta))
                        throw TrackError("tracker: active mode needs a margin delta");
                    const auto out = label_active(s.h1, cfg_.tau, delta, [&] {
                        return svm_score(svm_, pending.features[i]);
                    });
                    s.label = out.label;
                    s.h2 = out.h2;
                    s.source = out.source;
                    if (s.source == LabelSource::Aux) ++queried;
                    break;
                }
            }
            samples.push_back(std::move(s));
        }

        const auto [estimate, lost] = estimate_target(samples, last_, alpha1_, alpha2_);
        res.estimate = estimate;
        res.lost = lost;
        res.queried_fraction = static_cast<double>(queried) / static_cast<double>(cfg_.n_s);
        if (cfg_.mode == LabelMode::ActiveFixed || cfg_.mode == LabelMode::ActiveQlearn)
            res.delta_used = delta;
        last_ = estimate;

        if (cfg_.keep_sample_features)
            for (std::size_t i = 0; i < samples.size(); ++i)
                samples[i].features = pending.features[i];

        if (!lost) {
            std::tie(alpha1_, alpha2_) = update_alpha(samples, cfg_.tau, {alpha1_, alpha2_});
            std::vector<std::pair<FeatureVector, int>> batch;
            batch.reserve(samples.size());
            for (std::size_t i = 0; i < samples.size(); ++i) {
                history_.insert(t_, pending.features[i], samples[i].label);
                batch.emplace_back(std::move(pending.features[i]), samples[i].label);
            }
            knn_.update(t_, std::move(batch));
            if (schedule_aux_update(t_, cfg_.delta_period)) svm_ = retrain_aux(t_);
        }
        // Lost frames freeze the estimate and skip every model update, so a
        // stale estimate cannot pollute either memory.

        res.alpha1 = alpha1_;
        res.alpha2 = alpha2_;
        res.samples = std::move(samples);
        return res;
    }

    bool has_pending() const { return pending_.has_value(); }

  private:
    SvmModel retrain_aux(int t) {
        SvmTrainOptions opt = cfg_.svm;
        opt.seed = mix_seed(cfg_.seed, static_cast<std::uint64_t>(t));
        return svm_retrain(history_, opt, t);
    }

    struct Pending {
        SampleGrid grid;
        std::vector<BoundingBox> boxes;
        std::vector<FeatureVector> features;
        std::vector<double> h1;
    };

    TrackerConfig cfg_;
    FeatureExtractor extractor_;
    KnnClassifier knn_;
    LabeledStore history_;  // unbounded, feeds the long-term classifier
    SvmModel svm_;
    BoundingBox last_;
    double alpha1_ = 0.5;
    double alpha2_ = 0.5;
    int t_ = 0;
    std::optional<Pending> pending_;
};

// Whole-sequence driver. In active-qlearn mode the margin comes from a
// greedy read of the supplied Q-table, per frame, off the frame's own
// uncertainty histogram.
inline std::vector<FrameResult> track_sequence(const Sequence& seq, const TrackerConfig& cfg,
                                               const QTable* policy = nullptr) {
    if (seq.size() < 1) throw DataError("track_sequence: empty sequence");
    if (!seq.has_truth(1))
        throw DataError("track_sequence: sequence `" + seq.name() + "` has no frame-1 ground truth");
    if (cfg.mode == LabelMode::ActiveQlearn && policy == nullptr)
        throw ConfigError("track_sequence: active-qlearn mode needs a Q-table");

    Tracker tracker(cfg);
    std::vector<FrameResult> results;
    results.reserve(seq.size());
    results.push_back(tracker.init(seq.frame(1), seq.truth(1)));

    const ActionSet actions{cfg.n_a};
    for (int t = 2; t <= seq.size(); ++t) {
        const std::vector<double>& h1 = tracker.score_frame(seq.frame(t));
        double delta = std::numeric_limits<double>::quiet_NaN();
        if (cfg.mode == LabelMode::ActiveFixed) {
            delta = cfg.delta_fixed;
        } else if (cfg.mode == LabelMode::ActiveQlearn) {
            const StateKey state = featurize_state(build_histogram(h1, cfg.tau, cfg.n_b));
            delta = actions.delta(select_action_greedy(*policy, state));
        }
        results.push_back(tracker.commit_frame(delta));
    }
    return results;
}

}  // namespace cotrack

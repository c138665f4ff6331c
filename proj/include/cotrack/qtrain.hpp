#pragma once

// Policy training. The trainer is generic over an episode source so it can
// drive full tracking episodes or small constructed environments alike:
//
//   EpisodeSource::make(episode_index) -> std::optional<Episode>
//   Episode::reset()                   -> StateKey
//   Episode::step(action)              -> {next_state, reward, done}
//   Episode::stats()                   -> EpisodeStats (after done)
//
// Per transition: Boltzmann-Gumbel action selection, reward, one tabular
// backup with a polynomially decaying step size 1/(1+N)^p.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "cotrack/engine.hpp"
#include "cotrack/errors.hpp"
#include "cotrack/qtable.hpp"
#include "cotrack/rng.hpp"
#include "cotrack/synthetic.hpp"
#include "cotrack/tracker_config.hpp"
#include "cotrack/uncertainty.hpp"

namespace cotrack {

struct EpisodeStats {
    double total_reward = 0.0;
    double mean_iou = 0.0;          // over annotated frames; 0 when none
    double queried_fraction = 0.0;  // mean over processed frames
    int steps = 0;
};

struct StepOutcome {
    StateKey next;
    double reward = 0.0;
    bool done = false;
};

struct TrainLogRow {
    int episode = 0;
    double total_reward = 0.0;
    double mean_iou = 0.0;
    double queried_fraction = 0.0;
};

inline void write_train_log(const std::string& path, const std::vector<TrainLogRow>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write training log: " + path);
    f << "episode,total_reward,mean_iou,queried_fraction\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.episode, r.total_reward,
                      r.mean_iou, r.queried_fraction);
        f << buf;
    }
}

struct QTrainOptions {
    double bge_c = 0.5;
    double lr_exponent = 0.6;
    QUpdateRule rule = QUpdateRule::QLearning;
    std::uint64_t seed = 1;
};

// Runs `episodes` episodes against `source`, updating `table` in place.
// Deterministic given (source, options, table). Throws DataError when the
// source runs dry before the requested episode count.
template <typename EpisodeSource>
QTable train_policy(EpisodeSource& source, int episodes, const QTrainOptions& opt, QTable table,
                    std::vector<TrainLogRow>* log = nullptr) {
    Rng rng(mix_seed(opt.seed, 0x71bac5ULL));
    for (int ep = 0; ep < episodes; ++ep) {
        auto episode = source.make(ep);
        if (!episode) throw DataError("train_policy: episode source exhausted at episode " +
                                      std::to_string(ep));
        StateKey state = episode->reset();
        int action = select_action_bge(table, state, opt.bge_c, rng);
        bool done = false;
        while (!done) {
            const StepOutcome out = episode->step(action);
            const QRow& row = *table.find(state);
            const double alpha_lr = 1.0 / std::pow(1.0 + static_cast<double>(row.n[action]),
                                                   opt.lr_exponent);
            int next_action = -1;
            if (!out.done) {
                next_action = select_action_bge(table, out.next, opt.bge_c, rng);
            }
            q_update(table, state, action, out.reward, out.next, out.done, alpha_lr,
                     opt.rule == QUpdateRule::Sarsa ? next_action : -1);
            state = out.next;
            action = next_action;
            done = out.done;
        }
        if (log) {
            const EpisodeStats st = episode->stats();
            log->push_back({ep, st.total_reward, st.mean_iou, st.queried_fraction});
        }
    }
    return table;
}

// A full tracking run as one training episode: state is the frame's
// uncertainty histogram, the action picks the margin, reward comes from the
// overlap with ground truth at annotated frames (zero in between, matching
// the sparse-annotation regime).
class TrackingEpisode {
  public:
    TrackingEpisode(Sequence seq, const TrackerConfig& cfg)
        : seq_(std::move(seq)), cfg_(cfg), tracker_(cfg), actions_{cfg.n_a} {
        if (seq_.size() < 2) throw DataError("tracking episode needs at least 2 frames");
        if (!seq_.has_truth(1)) throw DataError("tracking episode: no frame-1 ground truth");
    }

    StateKey reset() {
        tracker_.init(seq_.frame(1), seq_.truth(1));
        t_next_ = 2;
        return score_and_featurize();
    }

    StepOutcome step(int action) {
        const int t = t_next_;
        const FrameResult res = tracker_.commit_frame(actions_.delta(action));
        stats_.queried_fraction += res.queried_fraction;
        ++stats_.steps;

        StepOutcome out;
        if (seq_.has_truth(t)) {
            const double overlap = iou(res.estimate, seq_.truth(t));
            iou_sum_ += overlap;
            ++iou_count_;
            if (overlap < 0.5)
                ++streak_;
            else
                streak_ = 0;
            out.reward = reward(overlap, streak_, cfg_.loss_streak_limit, cfg_.reward_triple_flat);
        } else {
            out.reward = 0.0;  // unannotated frame
        }
        stats_.total_reward += out.reward;

        ++t_next_;
        if (t_next_ > seq_.size()) {
            out.done = true;
        } else {
            out.next = score_and_featurize();
        }
        return out;
    }

    const EpisodeStats& stats() {
        if (!finalized_) {
            if (stats_.steps > 0) stats_.queried_fraction /= stats_.steps;
            if (iou_count_ > 0) stats_.mean_iou = iou_sum_ / iou_count_;
            finalized_ = true;
        }
        return stats_;
    }

  private:
    StateKey score_and_featurize() {
        const auto& h1 = tracker_.score_frame(seq_.frame(t_next_));
        return featurize_state(build_histogram(h1, cfg_.tau, cfg_.n_b));
    }

    Sequence seq_;
    TrackerConfig cfg_;
    Tracker tracker_;
    ActionSet actions_;
    EpisodeStats stats_;
    double iou_sum_ = 0.0;
    int iou_count_ = 0;
    int streak_ = 0;
    int t_next_ = 2;
    bool finalized_ = false;
};

// Script ranges for randomized training sequences.
struct SyntheticEnvConfig {
    int length = 60;
    int width = 128;
    int height = 96;
    int annotation_stride = 10;
    int target_w_min = 18, target_w_max = 28;
    int target_h_min = 22, target_h_max = 34;
    double speed_min = 0.5, speed_max = 2.5;
    int waypoint_count = 3;
    double occlusion_prob = 0.7;   // chance an episode contains an occlusion
    double coverage_min = 0.6, coverage_max = 1.0;
    int occlusion_len_min = 4, occlusion_len_max = 10;
    double illumination_prob = 0.3;
    double gain_min = 0.6, gain_max = 1.5;
    std::uint64_t seed = 1;

    static SyntheticEnvConfig from_kv(const KvConfig& kv) {
        SyntheticEnvConfig e;
        e.length = static_cast<int>(kv.get_int("env.length", e.length));
        e.width = static_cast<int>(kv.get_int("env.width", e.width));
        e.height = static_cast<int>(kv.get_int("env.height", e.height));
        e.annotation_stride = static_cast<int>(kv.get_int("env.annotation_stride", e.annotation_stride));
        e.target_w_min = static_cast<int>(kv.get_int("env.target_w_min", e.target_w_min));
        e.target_w_max = static_cast<int>(kv.get_int("env.target_w_max", e.target_w_max));
        e.target_h_min = static_cast<int>(kv.get_int("env.target_h_min", e.target_h_min));
        e.target_h_max = static_cast<int>(kv.get_int("env.target_h_max", e.target_h_max));
        e.speed_min = kv.get_double("env.speed_min", e.speed_min);
        e.speed_max = kv.get_double("env.speed_max", e.speed_max);
        e.waypoint_count = static_cast<int>(kv.get_int("env.waypoint_count", e.waypoint_count));
        e.occlusion_prob = kv.get_double("env.occlusion_prob", e.occlusion_prob);
        e.coverage_min = kv.get_double("env.coverage_min", e.coverage_min);
        e.coverage_max = kv.get_double("env.coverage_max", e.coverage_max);
        e.occlusion_len_min = static_cast<int>(kv.get_int("env.occlusion_len_min", e.occlusion_len_min));
        e.occlusion_len_max = static_cast<int>(kv.get_int("env.occlusion_len_max", e.occlusion_len_max));
        e.illumination_prob = kv.get_double("env.illumination_prob", e.illumination_prob);
        e.gain_min = kv.get_double("env.gain_min", e.gain_min);
        e.gain_max = kv.get_double("env.gain_max", e.gain_max);
        e.seed = static_cast<std::uint64_t>(kv.get_int("env.seed", 1));
        return e;
    }

    KvConfig to_kv() const {
        KvConfig kv;
        kv.set_int("env.length", length);
        kv.set_int("env.width", width);
        kv.set_int("env.height", height);
        kv.set_int("env.annotation_stride", annotation_stride);
        kv.set_int("env.target_w_min", target_w_min);
        kv.set_int("env.target_w_max", target_w_max);
        kv.set_int("env.target_h_min", target_h_min);
        kv.set_int("env.target_h_max", target_h_max);
        kv.set_double("env.speed_min", speed_min);
        kv.set_double("env.speed_max", speed_max);
        kv.set_int("env.waypoint_count", waypoint_count);
        kv.set_double("env.occlusion_prob", occlusion_prob);
        kv.set_double("env.coverage_min", coverage_min);
        kv.set_double("env.coverage_max", coverage_max);
        kv.set_int("env.occlusion_len_min", occlusion_len_min);
        kv.set_int("env.occlusion_len_max", occlusion_len_max);
        kv.set_double("env.illumination_prob", illumination_prob);
        kv.set_double("env.gain_min", gain_min);
        kv.set_double("env.gain_max", gain_max);
        kv.set_int("env.seed", static_cast<long long>(seed));
        return kv;
    }
};

// Builds a randomized script for one episode; same (env seed, index) gives
// the same script.
inline SyntheticScript make_episode_script(const SyntheticEnvConfig& env, int episode_index) {
    Rng rng(mix_seed(env.seed, static_cast<std::uint64_t>(episode_index) + 0x5eedULL));
    SyntheticScript s;
    s.name = "train-ep" + std::to_string(episode_index);
    s.seed = mix_seed(env.seed, static_cast<std::uint64_t>(episode_index));
    s.length = env.length;
    s.width = env.width;
    s.height = env.height;
    s.annotation_stride = env.annotation_stride;
    s.target_w = env.target_w_min + rng.index(env.target_w_max - env.target_w_min + 1);
    s.target_h = env.target_h_min + rng.index(env.target_h_max - env.target_h_min + 1);
    s.speed = rng.uniform(env.speed_min, env.speed_max);
    const double margin_x = s.target_w * 1.5;
    const double margin_y = s.target_h * 1.5;
    for (int i = 0; i < env.waypoint_count; ++i) {
        s.waypoints.push_back(rng.uniform(margin_x, env.width - margin_x));
        s.waypoints.push_back(rng.uniform(margin_y, env.height - margin_y));
    }
    if (rng.uniform01() < env.occlusion_prob && env.length >= 12) {
        OcclusionEvent e;
        e.duration = env.occlusion_len_min +
                     rng.index(env.occlusion_len_max - env.occlusion_len_min + 1);
        const int latest = std::max(2, env.length - e.duration);
        e.start = 2 + rng.index(std::max(1, latest - 1));
        e.coverage = rng.uniform(env.coverage_min, env.coverage_max);
        if (e.start + e.duration - 1 > env.length) e.duration = env.length - e.start + 1;
        s.occlusions.push_back(e);
    }
    if (rng.uniform01() < env.illumination_prob && env.length >= 8) {
        IlluminationEvent e;
        e.duration = 4 + rng.index(7);
        const int latest = std::max(2, env.length - e.duration);
        e.start = 2 + rng.index(std::max(1, latest - 1));
        e.gain = rng.uniform(env.gain_min, env.gain_max);
        if (e.start + e.duration - 1 > env.length) e.duration = env.length - e.start + 1;
        s.illuminations.push_back(e);
    }
    return s;
}

// Infinite source of randomized synthetic tracking episodes.
class SyntheticEpisodeSource {
  public:
    SyntheticEpisodeSource(SyntheticEnvConfig env, TrackerConfig tracker_cfg)
        : env_(env), cfg_(std::move(tracker_cfg)) {
        cfg_.mode = LabelMode::ActiveQlearn;
    }

    std::optional<TrackingEpisode> make(int episode_index) {
        const SyntheticScript script = make_episode_script(env_, episode_index);
        return TrackingEpisode(generate_synthetic(script), cfg_);
    }

    const SyntheticEnvConfig& env() const { return env_; }

  private:
    SyntheticEnvConfig env_;
    TrackerConfig cfg_;
};

// Cycles over pre-loaded sequences (user-supplied clips).
class SequenceListEpisodeSource {
  public:
    SequenceListEpisodeSource(std::vector<Sequence> seqs, TrackerConfig tracker_cfg)
        : seqs_(std::move(seqs)), cfg_(std::move(tracker_cfg)) {
        cfg_.mode = LabelMode::ActiveQlearn;
    }

    std::optional<TrackingEpisode> make(int episode_index) {
        if (seqs_.empty()) return std::nullopt;
        return TrackingEpisode(seqs_[episode_index % seqs_.size()], cfg_);
    }

  private:
    std::vector<Sequence> seqs_;
    TrackerConfig cfg_;
};

}  // namespace cotrack

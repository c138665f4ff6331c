#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cotrack/errors.hpp"
#include "cotrack/features.hpp"
#include "cotrack/kvconfig.hpp"
#include "cotrack/svm.hpp"

namespace cotrack {

enum class LabelMode { Single, Cotrack, ActiveFixed, ActiveQlearn };

inline const char* label_mode_name(LabelMode m) {
    switch (m) {
        case LabelMode::Single: return "single";
        case LabelMode::Cotrack: return "cotrack";
        case LabelMode::ActiveFixed: return "active-fixed";
        case LabelMode::ActiveQlearn: return "active-qlearn";
    }
    return "?";
}

inline LabelMode parse_label_mode(const std::string& s) {
    if (s == "single") return LabelMode::Single;
    if (s == "cotrack") return LabelMode::Cotrack;
    if (s == "active-fixed") return LabelMode::ActiveFixed;
    if (s == "active-qlearn") return LabelMode::ActiveQlearn;
    throw ConfigError("unknown labeling mode: " + s +
                      " (expected single|cotrack|active-fixed|active-qlearn)");
}

enum class QUpdateRule { QLearning, Sarsa };

struct TrackerConfig {
    // labeling
    double tau = 0.5;
    LabelMode mode = LabelMode::ActiveFixed;
    double delta_fixed = 0.25;  // margin for active-fixed

    // sampling
    int n_s = 147;
    std::vector<double> scales = {0.95, 1.0, 1.05};

    // classifiers
    int knn_k = 5;
    int delta_period = 10;  // short-term window span and aux retrain period, frames
    SvmTrainOptions svm;

    // initialization labels (frame 1)
    double init_pos_iou = 0.7;
    double init_neg_iou = 0.3;

    // query policy
    int n_b = 100;
    int n_a = 25;
    double gamma = 0.99;
    double bge_c = 0.5;
    double lr_exponent = 0.6;
    QUpdateRule q_rule = QUpdateRule::QLearning;
    bool reward_triple_flat = false;  // false: 3*iou above 0.9; true: flat 3
    int loss_streak_limit = 5;

    FeatureConfig features;
    std::uint64_t seed = 1;
    bool keep_sample_features = false;
    std::string colorname_table;  // optional path; empty = built-in table

    void validate() const {
        if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tracker.tau must be in (0,1)");
        if (delta_fixed < 0.0 || delta_fixed > 0.5)
            throw ConfigError("tracker.delta must be in [0, 0.5]");
        if (delta_period < 1) throw ConfigError("tracker.delta_period must be >= 1");
        if (knn_k < 1) throw ConfigError("tracker.knn_k must be >= 1");
        if (scales.empty()) throw ConfigError("tracker.scales must be non-empty");
        if (n_s <= 0 || n_s % static_cast<int>(scales.size()) != 0)
            throw ConfigError("tracker.n_s must split evenly across scales");
        const int per_scale = n_s / static_cast<int>(scales.size());
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(per_scale))));
        if (side * side != per_scale)
            throw ConfigError("tracker.n_s per scale must be a perfect square");
        if (!(init_neg_iou <= init_pos_iou))
            throw ConfigError("tracker.init_neg_iou must not exceed tracker.init_pos_iou");
        if (n_b < 1) throw ConfigError("qlearn.n_b must be >= 1");
        if (n_a < 2) throw ConfigError("qlearn.n_a must be >= 2");
        if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("qlearn.gamma must be in (0,1]");
        if (bge_c < 0.0) throw ConfigError("qlearn.bge_c must be >= 0");
        if (loss_streak_limit < 1) throw ConfigError("qlearn.loss_streak_limit must be >= 1");
        if (svm.epochs < 1) throw ConfigError("svm.epochs must be >= 1");
        if (!(svm.lambda > 0.0)) throw ConfigError("svm.lambda must be > 0");
        if (!(svm.eta0 > 0.0)) throw ConfigError("svm.eta0 must be > 0");
        features.validate();
    }

    static TrackerConfig from_kv(const KvConfig& kv) {
        TrackerConfig c;
        c.tau = kv.get_double("tracker.tau", c.tau);
        if (kv.has("tracker.mode")) c.mode = parse_label_mode(kv.get_string("tracker.mode"));
        c.delta_fixed = kv.get_double("tracker.delta", c.delta_fixed);
        c.n_s = static_cast<int>(kv.get_int("tracker.n_s", c.n_s));
        c.scales = kv.get_double_list("tracker.scales", c.scales);
        c.knn_k = static_cast<int>(kv.get_int("tracker.knn_k", c.knn_k));
        c.delta_period = static_cast<int>(kv.get_int("tracker.delta_period", c.delta_period));
        c.init_pos_iou = kv.get_double("tracker.init_pos_iou", c.init_pos_iou);
        c.init_neg_iou = kv.get_double("tracker.init_neg_iou", c.init_neg_iou);
        c.seed = static_cast<std::uint64_t>(kv.get_int("tracker.seed", static_cast<long long>(c.seed)));
        c.keep_sample_features = kv.get_bool("tracker.keep_sample_features", false);

        c.svm.lambda = kv.get_double("svm.lambda", c.svm.lambda);
        c.svm.epochs = static_cast<int>(kv.get_int("svm.epochs", c.svm.epochs));
        c.svm.eta0 = kv.get_double("svm.eta0", c.svm.eta0);

        c.n_b = static_cast<int>(kv.get_int("qlearn.n_b", c.n_b));
        c.n_a = static_cast<int>(kv.get_int("qlearn.n_a", c.n_a));
        c.gamma = kv.get_double("qlearn.gamma", c.gamma);
        c.bge_c = kv.get_double("qlearn.bge_c", c.bge_c);
        c.lr_exponent = kv.get_double("qlearn.lr_exponent", c.lr_exponent);
        c.reward_triple_flat = kv.get_bool("qlearn.reward_triple_flat", c.reward_triple_flat);
        c.loss_streak_limit = static_cast<int>(kv.get_int("qlearn.loss_streak_limit", c.loss_streak_limit));
        const std::string rule = kv.get_string("qlearn.update_rule", "qlearning");
        if (rule == "qlearning")
            c.q_rule = QUpdateRule::QLearning;
        else if (rule == "sarsa")
            c.q_rule = QUpdateRule::Sarsa;
        else
            throw ConfigError("qlearn.update_rule must be qlearning or sarsa, got: " + rule);

        c.features.patch_size = static_cast<int>(kv.get_int("features.patch_size", c.features.patch_size));
        c.features.cell_size = static_cast<int>(kv.get_int("features.cell_size", c.features.cell_size));
        c.features.block_cells = static_cast<int>(kv.get_int("features.block_cells", c.features.block_cells));
        c.features.orient_bins = static_cast<int>(kv.get_int("features.orient_bins", c.features.orient_bins));
        c.colorname_table = kv.get_string("features.colorname_table", "");

        c.validate();
        return c;
    }

    KvConfig to_kv() const {
        KvConfig kv;
        kv.set_double("tracker.tau", tau);
        kv.set_string("tracker.mode", label_mode_name(mode));
        kv.set_double("tracker.delta", delta_fixed);
        kv.set_int("tracker.n_s", n_s);
        kv.set_double_list("tracker.scales", scales);
        kv.set_int("tracker.knn_k", knn_k);
        kv.set_int("tracker.delta_period", delta_period);
        kv.set_double("tracker.init_pos_iou", init_pos_iou);
        kv.set_double("tracker.init_neg_iou", init_neg_iou);
        kv.set_int("tracker.seed", static_cast<long long>(seed));
        kv.set_bool("tracker.keep_sample_features", keep_sample_features);
        kv.set_double("svm.lambda", svm.lambda);
        kv.set_int("svm.epochs", svm.epochs);
        kv.set_double("svm.eta0", svm.eta0);
        kv.set_int("qlearn.n_b", n_b);
        kv.set_int("qlearn.n_a", n_a);
        kv.set_double("qlearn.gamma", gamma);
        kv.set_double("qlearn.bge_c", bge_c);
        kv.set_double("qlearn.lr_exponent", lr_exponent);
        kv.set_string("qlearn.update_rule", q_rule == QUpdateRule::QLearning ? "qlearning" : "sarsa");
        kv.set_bool("qlearn.reward_triple_flat", reward_triple_flat);
        kv.set_int("qlearn.loss_streak_limit", loss_streak_limit);
        kv.set_int("features.patch_size", features.patch_size);
        kv.set_int("features.cell_size", features.cell_size);
        kv.set_int("features.block_cells", features.block_cells);
        kv.set_int("features.orient_bins", features.orient_bins);
        kv.set_string("features.colorname_table", colorname_table);
        return kv;
    }
};

}  // namespace cotrack

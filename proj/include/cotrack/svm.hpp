#pragma once

// Long-term classifier: linear SVM trained by seeded stochastic subgradient
// descent on a weighted hinge loss (inverse class frequency weights, L2
// regularization, unregularized bias). The raw margin is squashed through a
// logistic so scores line up with the [0,1] range the labeling rules expect.
// After each epoch the objective is evaluated and the best iterate kept,
// which makes the epoch-boundary objective trace non-increasing.

#include <cmath>
#include <numeric>
#include <vector>

#include "cotrack/errors.hpp"
#include "cotrack/labeled_store.hpp"
#include "cotrack/rng.hpp"

namespace cotrack {

struct SvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    double lambda = 1e-4;
    int trained_at = 0;  // frame stamp of the last retrain
    bool trained = false;

    double raw_margin(const FeatureVector& x) const {
        double z = bias;
        const std::size_t dim = weights.size();
        for (std::size_t i = 0; i < dim; ++i) z += weights[i] * x[i];
        return z;
    }
};

inline double svm_score(const SvmModel& model, const FeatureVector& x) {
    if (!model.trained) throw TrackError("svm: scoring an untrained model");
    return 1.0 / (1.0 + std::exp(-model.raw_margin(x)));
}

struct SvmTrainOptions {
    double lambda = 1e-4;
    int epochs = 20;
    double eta0 = 0.1;
    std::uint64_t seed = 1;
};

// Weighted hinge objective: lambda*|w|^2 + mean_i c_i * max(0, 1 - y_i f(x_i)).
inline double svm_objective(const SvmModel& m, const std::deque<LabeledSample>& data,
                            double pos_weight, double neg_weight) {
    double loss = 0.0;
    for (const auto& e : data) {
        const double margin = e.label * m.raw_margin(e.x);
        const double c = e.label > 0 ? pos_weight : neg_weight;
        loss += c * std::max(0.0, 1.0 - margin);
    }
    loss /= static_cast<double>(data.size());
    double reg = 0.0;
    for (double w : m.weights) reg += w * w;
    return m.lambda * reg + loss;
}

// Retrains from scratch over the full store. Deterministic given the store
// order and seed. Throws DataError when the store lacks one of the classes.
inline SvmModel svm_retrain(const LabeledStore& store, const SvmTrainOptions& opt, int trained_at,
                            std::vector<double>* objective_trace = nullptr) {
    const auto& data = store.entries();
    if (data.empty()) throw DataError("svm: empty training store");
    const std::size_t dim = data.front().x.size();
    const int n_pos = store.positives();
    const int n_neg = store.negatives();
    if (n_pos == 0 || n_neg == 0)
        throw DataError("svm: degenerate training set (needs both classes, got " +
                        std::to_string(n_pos) + " positive / " + std::to_string(n_neg) + " negative)");

    const double n = static_cast<double>(data.size());
    const double pos_weight = n / (2.0 * n_pos);
    const double neg_weight = n / (2.0 * n_neg);

    SvmModel m;
    m.weights.assign(dim, 0.0);
    m.lambda = opt.lambda;
    m.trained_at = trained_at;
    m.trained = true;

    SvmModel best = m;
    double best_obj = svm_objective(m, data, pos_weight, neg_weight);
    if (objective_trace) objective_trace->push_back(best_obj);

    Rng rng(opt.seed);
    std::vector<std::size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), 0);

    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
        // Fisher-Yates with our own rng, deterministic across platforms
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.below(i)]);

        const double eta = opt.eta0 / (1.0 + epoch);
        for (std::size_t j : idx) {
            const auto& e = data[j];
            const double c = e.label > 0 ? pos_weight : neg_weight;
            const double margin = e.label * m.raw_margin(e.x);
            const double shrink = 1.0 - eta * 2.0 * m.lambda;
            for (double& w : m.weights) w *= shrink;
            if (margin < 1.0) {
                const double step = eta * c * e.label;
                for (std::size_t i = 0; i < dim; ++i) m.weights[i] += step * e.x[i];
                m.bias += step;
            }
        }

        const double obj = svm_objective(m, data, pos_weight, neg_weight);
        if (obj < best_obj) {
            best_obj = obj;
            best = m;
        }
        if (objective_trace) objective_trace->push_back(best_obj);
    }
    best.trained_at = trained_at;
    return best;
}

}  // namespace cotrack

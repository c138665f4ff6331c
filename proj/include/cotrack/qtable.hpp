#pragma once

// Tabular action values over the discrete uncertainty states. Rows are
// materialized lazily; a fresh row is |N(0, 0.01^2)| noise drawn from a
// stream seeded by (table seed, state key), so row contents do not depend on
// visit order — resumed training and replays stay consistent.

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cotrack/errors.hpp"
#include "cotrack/rng.hpp"
#include "cotrack/uncertainty.hpp"

namespace cotrack {

// n_a margins spread evenly over [0, 1/2].
struct ActionSet {
    int n_a = 25;

    double delta(int action) const { return 0.5 * action / (n_a - 1); }
    int middle() const { return n_a / 2; }
};

struct QRow {
    std::vector<double> q;
    std::vector<std::int64_t> n;  // visit counts

    bool operator==(const QRow&) const = default;
};

class QTable {
  public:
    QTable(int n_a, double gamma, std::uint64_t seed) : n_a_(n_a), gamma_(gamma), seed_(seed) {
        if (n_a < 2) throw ConfigError("qtable: n_a must be >= 2");
        if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("qtable: gamma must be in (0,1]");
    }

    int n_a() const { return n_a_; }
    double gamma() const { return gamma_; }
    std::uint64_t seed() const { return seed_; }
    const std::map<StateKey, QRow>& rows() const { return rows_; }

    QRow& row(const StateKey& s) {
        auto it = rows_.find(s);
        if (it != rows_.end()) return it->second;
        QRow fresh;
        fresh.q.resize(n_a_);
        fresh.n.assign(n_a_, 0);
        Rng rng(row_seed(s));
        for (auto& q : fresh.q) q = std::abs(rng.normal()) * 0.01;
        return rows_.emplace(s, std::move(fresh)).first->second;
    }

    const QRow* find(const StateKey& s) const {
        auto it = rows_.find(s);
        return it == rows_.end() ? nullptr : &it->second;
    }

    bool operator==(const QTable& o) const {
        return n_a_ == o.n_a_ && gamma_ == o.gamma_ && seed_ == o.seed_ && rows_ == o.rows_;
    }

    // --- persistence (versioned JSON, bit-exact round trip) ---

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& [key, row] : rows_) {
            rows.push_back({{"state", {key.mean_bin, key.var_bin, hist_shape_name(key.shape)}},
                            {"q", row.q},
                            {"n", row.n}});
        }
        return {{"version", 1},
                {"n_a", n_a_},
                {"gamma", gamma_},
                {"seed", seed_},
                {"rows", rows}};
    }

    static QTable from_json(const nlohmann::json& j) {
        if (!j.contains("version") || j["version"].get<int>() != 1)
            throw DataError("qtable: unsupported or missing version");
        QTable t(j.at("n_a").get<int>(), j.at("gamma").get<double>(),
                 j.at("seed").get<std::uint64_t>());
        for (const auto& r : j.at("rows")) {
            const auto& s = r.at("state");
            StateKey key{s.at(0).get<int>(), s.at(1).get<int>(),
                         parse_hist_shape(s.at(2).get<std::string>())};
            QRow row;
            row.q = r.at("q").get<std::vector<double>>();
            row.n = r.at("n").get<std::vector<std::int64_t>>();
            if (row.q.size() != static_cast<std::size_t>(t.n_a_) ||
                row.n.size() != static_cast<std::size_t>(t.n_a_))
                throw DataError("qtable: row length does not match n_a");
            t.rows_[key] = std::move(row);
        }
        return t;
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw DataError("cannot write qtable: " + path);
        f << to_json().dump(1) << "\n";
    }

    static QTable load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw DataError("cannot open qtable: " + path);
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw DataError("qtable " + path + ": " + e.what());
        }
        return from_json(j);
    }

  private:
    std::uint64_t row_seed(const StateKey& s) const {
        const std::uint64_t tag = static_cast<std::uint64_t>(s.mean_bin) * 1000003ULL +
                                  static_cast<std::uint64_t>(s.var_bin) * 101ULL +
                                  static_cast<std::uint64_t>(s.shape);
        return mix_seed(seed_, tag);
    }

    int n_a_;
    double gamma_;
    std::uint64_t seed_;
    std::map<StateKey, QRow> rows_;
};

// Greedy action: argmax with lowest-index tie-break. Unseen states (no row)
// and degenerate all-equal rows fall back to the middle action. Read-only.
inline int select_action_greedy(const QTable& table, const StateKey& s) {
    const QRow* row = table.find(s);
    const ActionSet actions{table.n_a()};
    if (!row) return actions.middle();
    int best = 0;
    bool all_equal = true;
    for (int a = 1; a < table.n_a(); ++a) {
        if (row->q[a] != row->q[0]) all_equal = false;
        if (row->q[a] > row->q[best]) best = a;
    }
    return all_equal ? actions.middle() : best;
}

// Boltzmann-Gumbel exploration: argmax of Q + beta*G with independent
// standard Gumbel draws and beta = C / sqrt(N+1). The perturbation anneals
// as visit counts grow; C = 0 degenerates to the greedy choice.
inline int select_action_bge(QTable& table, const StateKey& s, double c, Rng& rng) {
    QRow& row = table.row(s);
    int best = 0;
    double best_val = 0.0;
    for (int a = 0; a < table.n_a(); ++a) {
        const double beta = c / std::sqrt(static_cast<double>(row.n[a]) + 1.0);
        const double val = row.q[a] + beta * (c > 0.0 ? rng.gumbel() : 0.0);
        if (a == 0 || val > best_val) {
            best_val = val;
            best = a;
        }
    }
    return best;
}

// One tabular backup toward r + gamma * bootstrap(S'). Q-learning bootstraps
// with the row maximum; SARSA (next_action >= 0) with the chosen action.
// Terminal transitions bootstrap with zero. Increments the visit count.
inline void q_update(QTable& table, const StateKey& s, int action, double r, const StateKey& s_next,
                     bool terminal, double alpha_lr, int next_action = -1) {
    double bootstrap = 0.0;
    if (!terminal) {
        QRow& next = table.row(s_next);
        if (next_action >= 0) {
            bootstrap = next.q[next_action];
        } else {
            bootstrap = next.q[0];
            for (int a = 1; a < table.n_a(); ++a) bootstrap = std::max(bootstrap, next.q[a]);
        }
    }
    const double target = r + table.gamma() * bootstrap;
    QRow& row = table.row(s);
    row.q[action] += alpha_lr * (target - row.q[action]);
    ++row.n[action];
}

}  // namespace cotrack

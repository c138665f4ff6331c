#pragma once

// FrameResult stream as JSON-lines: one object per frame with
// frame / estimate / delta / queried_fraction / lost. This is the contract
// between the tracker, the evaluation harness, and the policy trainer.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cotrack/engine.hpp"
#include "cotrack/errors.hpp"

namespace cotrack {

inline nlohmann::json frame_result_to_json(const FrameResult& r) {
    nlohmann::json j;
    j["frame"] = r.frame;
    j["estimate"] = {r.estimate.x, r.estimate.y, r.estimate.w, r.estimate.h};
    if (std::isnan(r.delta_used))
        j["delta"] = nullptr;
    else
        j["delta"] = r.delta_used;
    j["queried_fraction"] = r.queried_fraction;
    j["lost"] = r.lost;
    return j;
}

inline std::string results_to_jsonl(const std::vector<FrameResult>& results) {
    std::ostringstream out;
    for (const auto& r : results) out << frame_result_to_json(r).dump() << "\n";
    return out.str();
}

inline void write_results_jsonl(const std::string& path, const std::vector<FrameResult>& results) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write results: " + path);
    f << results_to_jsonl(results);
}

inline std::vector<FrameResult> read_results_jsonl(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open results: " + path);
    std::vector<FrameResult> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        FrameResult r;
        r.frame = j.at("frame").get<int>();
        const auto& e = j.at("estimate");
        r.estimate = {e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>(),
                      e.at(3).get<double>()};
        r.delta_used = j.at("delta").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                               : j.at("delta").get<double>();
        r.queried_fraction = j.at("queried_fraction").get<double>();
        r.lost = j.at("lost").get<bool>();
        out.push_back(r);
    }
    if (out.empty()) throw DataError("results file has no rows: " + path);
    return out;
}

}  // namespace cotrack

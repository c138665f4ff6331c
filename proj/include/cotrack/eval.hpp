#pragma once

// One-pass evaluation against ground truth: success curve (fraction of
// frames with IOU strictly above each overlap threshold, grid 0:0.01:1),
// precision curve (fraction with center error within each pixel threshold,
// grid 0:1:50), AUC by trapezoid, per-attribute aggregates, FPS.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cotrack/engine.hpp"
#include "cotrack/errors.hpp"
#include "cotrack/geometry.hpp"
#include "cotrack/sequence.hpp"

namespace cotrack {

inline constexpr int kSuccessPoints = 101;   // thresholds 0.00 .. 1.00
inline constexpr int kPrecisionPoints = 51;  // thresholds 0 .. 50 px

inline std::vector<double> success_curve(const std::vector<double>& ious) {
    if (ious.empty()) throw DataError("success_curve: no overlap values");
    std::vector<double> curve(kSuccessPoints, 0.0);
    for (int i = 0; i < kSuccessPoints; ++i) {
        const double threshold = i * 0.01;
        int hits = 0;
        for (double v : ious)
            if (v > threshold) ++hits;
        curve[i] = static_cast<double>(hits) / ious.size();
    }
    return curve;
}

inline std::vector<double> precision_curve(const std::vector<double>& errors) {
    if (errors.empty()) throw DataError("precision_curve: no center-error values");
    std::vector<double> curve(kPrecisionPoints, 0.0);
    for (int i = 0; i < kPrecisionPoints; ++i) {
        const double threshold = i;
        int hits = 0;
        for (double v : errors)
            if (v <= threshold) ++hits;
        curve[i] = static_cast<double>(hits) / errors.size();
    }
    return curve;
}

// Trapezoidal integral over the curve's domain, normalized to unit width.
inline double auc(const std::vector<double>& curve) {
    if (curve.size() < 2) throw DataError("auc: curve needs at least two points");
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) area += 0.5 * (curve[i] + curve[i + 1]);
    return area / (curve.size() - 1);
}

inline double measure_fps(double seconds, int frames) {
    if (frames < 1) throw DataError("measure_fps: no frames");
    if (seconds <= 0.0) throw DataError("measure_fps: non-positive duration");
    return frames / seconds;
}

struct SequenceEval {
    std::string name;
    std::set<Attribute> attributes;
    std::vector<double> success;
    std::vector<double> precision;
    double auc_value = 0.0;
    double precision_at_20 = 0.0;
    double mean_iou = 0.0;
    int evaluated_frames = 0;
    std::optional<double> fps;
};

// Scores a result stream against its sequence's ground truth. Frames
// without annotation are skipped; lost frames are scored like any other
// (the frozen estimate counts).
inline SequenceEval evaluate_sequence(const std::vector<FrameResult>& results, const Sequence& seq,
                                      std::optional<double> fps = std::nullopt) {
    if (static_cast<int>(results.size()) != seq.size())
        throw DataError("evaluate: result count (" + std::to_string(results.size()) +
                        ") does not match sequence length (" + std::to_string(seq.size()) +
                        ") for " + seq.name());
    std::vector<double> ious;
    std::vector<double> errors;
    double iou_sum = 0.0;
    for (const auto& r : results) {
        if (!seq.has_truth(r.frame)) continue;
        const BoundingBox& gt = seq.truth(r.frame);
        ious.push_back(iou(r.estimate, gt));
        errors.push_back(center_error(r.estimate, gt));
        iou_sum += ious.back();
    }
    if (ious.empty()) throw DataError("evaluate: sequence " + seq.name() + " has no annotated frames");

    SequenceEval ev;
    ev.name = seq.name();
    ev.attributes = seq.attributes();
    ev.success = success_curve(ious);
    ev.precision = precision_curve(errors);
    ev.auc_value = auc(ev.success);
    ev.precision_at_20 = ev.precision[20];
    ev.mean_iou = iou_sum / ious.size();
    ev.evaluated_frames = static_cast<int>(ious.size());
    ev.fps = fps;
    return ev;
}

struct EvalReport {
    std::vector<SequenceEval> sequences;          // sorted by name
    std::vector<double> overall_success;          // mean of per-sequence curves
    std::vector<double> overall_precision;
    double overall_auc = 0.0;                     // mean of per-sequence AUCs
    double overall_precision_at_20 = 0.0;
    std::map<std::string, std::pair<double, int>> attribute_auc;  // tag -> (mean AUC, count)
};

inline EvalReport aggregate_report(std::vector<SequenceEval> evals) {
    if (evals.empty()) throw DataError("aggregate_report: no sequences evaluated");
    std::sort(evals.begin(), evals.end(),
              [](const SequenceEval& a, const SequenceEval& b) { return a.name < b.name; });

    EvalReport rep;
    rep.overall_success.assign(kSuccessPoints, 0.0);
    rep.overall_precision.assign(kPrecisionPoints, 0.0);
    std::map<std::string, std::pair<double, int>> attr;
    for (const auto& ev : evals) {
        for (int i = 0; i < kSuccessPoints; ++i) rep.overall_success[i] += ev.success[i];
        for (int i = 0; i < kPrecisionPoints; ++i) rep.overall_precision[i] += ev.precision[i];
        rep.overall_auc += ev.auc_value;
        rep.overall_precision_at_20 += ev.precision_at_20;
        for (Attribute a : ev.attributes) {
            auto& slot = attr[attribute_name(a)];
            slot.first += ev.auc_value;
            slot.second += 1;
        }
    }
    const double n = static_cast<double>(evals.size());
    for (auto& v : rep.overall_success) v /= n;
    for (auto& v : rep.overall_precision) v /= n;
    rep.overall_auc /= n;
    rep.overall_precision_at_20 /= n;
    for (auto& [tag, slot] : attr) slot.first /= slot.second;
    rep.attribute_auc = std::move(attr);
    rep.sequences = std::move(evals);
    return rep;
}

// --- report artifacts ---

inline nlohmann::json report_to_json(const EvalReport& rep) {
    nlohmann::json seqs = nlohmann::json::array();
    for (const auto& ev : rep.sequences) {
        nlohmann::json tags = nlohmann::json::array();
        for (Attribute a : ev.attributes) tags.push_back(attribute_name(a));
        nlohmann::json j = {{"name", ev.name},
                            {"attributes", tags},
                            {"auc", ev.auc_value},
                            {"precision_at_20", ev.precision_at_20},
                            {"mean_iou", ev.mean_iou},
                            {"evaluated_frames", ev.evaluated_frames},
                            {"success", ev.success},
                            {"precision", ev.precision}};
        if (ev.fps) j["fps"] = *ev.fps;
        seqs.push_back(j);
    }
    nlohmann::json attrs = nlohmann::json::object();
    for (const auto& [tag, slot] : rep.attribute_auc)
        attrs[tag] = {{"mean_auc", slot.first}, {"sequences", slot.second}};
    return {{"sequences", seqs},
            {"overall",
             {{"auc", rep.overall_auc},
              {"precision_at_20", rep.overall_precision_at_20},
              {"success", rep.overall_success},
              {"precision", rep.overall_precision}}},
            {"attributes", attrs}};
}

inline void write_curve_csv(const std::string& path, const std::string& x_name, double x_step,
                            const std::vector<std::pair<std::string, std::vector<double>>>& curves) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write csv: " + path);
    f << x_name;
    for (const auto& [label, curve] : curves) f << "," << label;
    f << "\n";
    const std::size_t points = curves.front().second.size();
    char buf[64];
    for (std::size_t i = 0; i < points; ++i) {
        std::snprintf(buf, sizeof(buf), "%.4g", i * x_step);
        f << buf;
        for (const auto& [label, curve] : curves) {
            std::snprintf(buf, sizeof(buf), ",%.17g", curve[i]);
            f << buf;
        }
        f << "\n";
    }
}

inline void write_attributes_csv(const std::string& path,
                                 const std::vector<std::pair<std::string, const EvalReport*>>& reports) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write csv: " + path);
    f << "attribute";
    for (const auto& [label, rep] : reports) f << "," << label << "_auc," << label << "_sequences";
    f << "\n";
    for (Attribute a : all_attributes()) {
        const char* tag = attribute_name(a);
        bool any = false;
        for (const auto& [label, rep] : reports)
            if (rep->attribute_auc.count(tag)) any = true;
        if (!any) continue;  // tags with no sequences are omitted
        f << tag;
        char buf[64];
        for (const auto& [label, rep] : reports) {
            auto it = rep->attribute_auc.find(tag);
            if (it == rep->attribute_auc.end()) {
                f << ",,0";
            } else {
                std::snprintf(buf, sizeof(buf), ",%.17g,%d", it->second.first, it->second.second);
                f << buf;
            }
        }
        f << "\n";
    }
    f << "ALL";
    char buf[64];
    for (const auto& [label, rep] : reports) {
        std::snprintf(buf, sizeof(buf), ",%.17g,%d", rep->overall_auc,
                      static_cast<int>(rep->sequences.size()));
        f << buf;
    }
    f << "\n";
}

// Standalone SVG line chart; no plotting dependency.
inline void write_curve_svg(const std::string& path, const std::string& title,
                            const std::string& x_label, double x_max,
                            const std::vector<std::pair<std::string, std::vector<double>>>& curves) {
    const int w = 520, h = 420, ml = 56, mr = 16, mt = 40, mb = 48;
    const double pw = w - ml - mr, ph = h - mt - mb;
    static const char* palette[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#f39c12"};

    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write svg: " + path);
    char buf[256];
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  w / 2, title.c_str());
    f << buf;
    // axes and gridlines at 0, 0.25, ..., 1.0 of each range
    for (int i = 0; i <= 4; ++i) {
        const double fx = ml + pw * i / 4.0;
        const double fy = mt + ph - ph * i / 4.0;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%d\" stroke=\"#ddd\"/>\n", fx, mt,
                      fx, mt + static_cast<int>(ph));
        f << buf;
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" stroke=\"#ddd\"/>\n", ml, fy,
                      ml + static_cast<int>(pw), fy);
        f << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                      "text-anchor=\"middle\">%.3g</text>\n",
                      fx, h - mb + 16, x_max * i / 4.0);
        f << buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"11\" "
                      "text-anchor=\"end\">%.2f</text>\n",
                      ml - 6, fy + 4, i / 4.0);
        f << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                  "stroke=\"#444\"/>\n",
                  ml, mt, static_cast<int>(pw), static_cast<int>(ph));
    f << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  ml + static_cast<int>(pw) / 2, h - 12, x_label.c_str());
    f << buf;

    int color = 0;
    int legend_y = mt + 16;
    for (const auto& [label, curve] : curves) {
        const char* stroke = palette[color % 5];
        f << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < curve.size(); ++i) {
            const double fx = ml + pw * i / (curve.size() - 1);
            const double fy = mt + ph - ph * std::clamp(curve[i], 0.0, 1.0);
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", fx, fy);
            f << buf;
        }
        f << "\"/>\n";
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                      "fill=\"%s\">%s</text>\n",
                      ml + 10, legend_y, stroke, label.c_str());
        f << buf;
        legend_y += 16;
        ++color;
    }
    f << "</svg>\n";
}

}  // namespace cotrack

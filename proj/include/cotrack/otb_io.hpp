#pragma once

// OTB disk layout: `<seq>/img/<number>.jpg|png` plus
// `<seq>/groundtruth_rect.txt` with one `x,y,w,h` row per frame (comma, tab,
// or space separated; NaN rows mark unannotated frames). An optional
// `attributes.txt` carries challenge tags. Box coordinates are passed
// through verbatim in both directions so that write -> load round-trips
// exactly.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cotrack/errors.hpp"
#include "cotrack/image_io.hpp"
#include "cotrack/sequence.hpp"

namespace cotrack {

namespace detail {

inline std::optional<long> filename_number(const std::string& stem) {
    std::string digits;
    for (char c : stem)
        if (std::isdigit(static_cast<unsigned char>(c))) digits += c;
    if (digits.empty()) return std::nullopt;
    try {
        return std::stol(digits);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// One ground-truth row; separators may be commas, tabs, or spaces.
inline std::optional<BoundingBox> parse_truth_row(std::string line, const std::string& file, int lineno) {
    for (char& c : line)
        if (c == ',' || c == '\t') c = ' ';
    std::istringstream in(line);
    std::vector<std::string> tok;
    std::string t;
    while (in >> t) tok.push_back(t);
    if (tok.size() != 4)
        throw DataError(file + ":" + std::to_string(lineno) + ": expected 4 ground-truth fields, got " +
                        std::to_string(tok.size()));
    double v[4];
    for (int i = 0; i < 4; ++i) {
        try {
            v[i] = std::stod(tok[i]);
        } catch (const std::exception&) {
            throw DataError(file + ":" + std::to_string(lineno) + ": bad ground-truth value: " + tok[i]);
        }
    }
    if (std::isnan(v[0]) || std::isnan(v[1]) || std::isnan(v[2]) || std::isnan(v[3]))
        return std::nullopt;  // unannotated frame
    return BoundingBox{v[0], v[1], v[2], v[3]};
}

}  // namespace detail

inline Sequence load_otb_sequence(const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    if (!fs::is_directory(root)) throw DataError("not a sequence directory: " + dir);

    fs::path img_dir = root / "img";
    if (!fs::is_directory(img_dir)) throw DataError("no img/ subfolder under " + dir);

    std::vector<std::pair<long, std::string>> numbered;
    for (const auto& e : fs::directory_iterator(img_dir)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext != ".jpg" && ext != ".jpeg" && ext != ".png") continue;
        const auto num = detail::filename_number(e.path().stem().string());
        if (!num) continue;
        numbered.emplace_back(*num, e.path().string());
    }
    if (numbered.empty()) throw DataError("no numbered images under " + img_dir.string());
    std::sort(numbered.begin(), numbered.end());

    std::vector<std::string> paths;
    paths.reserve(numbered.size());
    for (auto& [n, p] : numbered) paths.push_back(std::move(p));

    std::vector<std::optional<BoundingBox>> truth;
    const fs::path gt_path = root / "groundtruth_rect.txt";
    if (fs::exists(gt_path)) {
        std::ifstream f(gt_path);
        if (!f) throw DataError("cannot open " + gt_path.string());
        std::string line;
        int lineno = 0;
        while (std::getline(f, line)) {
            ++lineno;
            std::string stripped = line;
            stripped.erase(std::remove(stripped.begin(), stripped.end(), '\r'), stripped.end());
            if (stripped.find_first_not_of(" \t") == std::string::npos) continue;
            truth.push_back(detail::parse_truth_row(stripped, gt_path.string(), lineno));
        }
        if (truth.size() != paths.size())
            throw DataError(dir + ": ground-truth row count (" + std::to_string(truth.size()) +
                            ") does not match frame count (" + std::to_string(paths.size()) + ")");
        if (!truth.empty() && !truth[0].has_value())
            throw DataError(dir + ": first frame carries no ground truth (tracker initialization)");
    }
    truth.resize(paths.size());

    std::set<Attribute> attrs;
    const fs::path attr_path = root / "attributes.txt";
    if (fs::exists(attr_path)) {
        std::ifstream f(attr_path);
        std::string tok;
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        for (char& c : text)
            if (c == ',' || c == '\n' || c == '\r' || c == '\t') c = ' ';
        std::istringstream in(text);
        while (in >> tok) {
            const auto a = parse_attribute(tok);
            if (!a) throw DataError(attr_path.string() + ": unknown attribute tag: " + tok);
            attrs.insert(*a);
        }
    }

    // First frame is decoded eagerly to pin the sequence dimensions.
    Frame first = decode_image(paths[0], 1);
    return Sequence::from_files(root.filename().string(), std::move(paths), std::move(truth),
                                std::move(attrs), &decode_image, first.width, first.height);
}

// Materializes a sequence in OTB layout (PNG frames). Boxes are written with
// full precision so reloading reproduces them bit-exactly.
inline void write_otb_sequence(const Sequence& seq, const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root / "img");

    for (int t = 1; t <= seq.size(); ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "%04d.png", t);
        encode_png((root / "img" / name).string(), seq.frame(t));
    }

    std::ofstream gt(root / "groundtruth_rect.txt", std::ios::binary);
    if (!gt) throw DataError("cannot write ground truth under " + dir);
    char buf[160];
    for (int t = 1; t <= seq.size(); ++t) {
        if (seq.has_truth(t)) {
            const BoundingBox& b = seq.truth(t);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", b.x, b.y, b.w, b.h);
        } else {
            std::snprintf(buf, sizeof(buf), "NaN,NaN,NaN,NaN\n");
        }
        gt << buf;
    }

    if (!seq.attributes().empty()) {
        std::ofstream af(root / "attributes.txt", std::ios::binary);
        bool first = true;
        for (Attribute a : seq.attributes()) {
            if (!first) af << ",";
            af << attribute_name(a);
            first = false;
        }
        af << "\n";
    }
}

}  // namespace cotrack

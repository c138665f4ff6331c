#pragma once

#include <array>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cotrack/errors.hpp"
#include "cotrack/frame.hpp"
#include "cotrack/geometry.hpp"

namespace cotrack {

// The eleven OTB challenge attributes.
enum class Attribute { IV, SV, IPR, OPR, DEF, OCC, OV, LR, BC, FM, MB };

inline const std::array<Attribute, 11>& all_attributes() {
    static const std::array<Attribute, 11> a = {Attribute::IV,  Attribute::SV, Attribute::IPR,
                                                Attribute::OPR, Attribute::DEF, Attribute::OCC,
                                                Attribute::OV,  Attribute::LR, Attribute::BC,
                                                Attribute::FM,  Attribute::MB};
    return a;
}

inline const char* attribute_name(Attribute a) {
    switch (a) {
        case Attribute::IV: return "IV";
        case Attribute::SV: return "SV";
        case Attribute::IPR: return "IPR";
        case Attribute::OPR: return "OPR";
        case Attribute::DEF: return "DEF";
        case Attribute::OCC: return "OCC";
        case Attribute::OV: return "OV";
        case Attribute::LR: return "LR";
        case Attribute::BC: return "BC";
        case Attribute::FM: return "FM";
        case Attribute::MB: return "MB";
    }
    return "?";
}

inline std::optional<Attribute> parse_attribute(const std::string& s) {
    for (Attribute a : all_attributes())
        if (s == attribute_name(a)) return a;
    return std::nullopt;
}

// A named frame source with optional per-frame ground truth. Frames either
// live in memory (synthetic sequences) or are decoded on demand from disk
// (OTB layout); on-demand decoding is stateless, so a const Sequence is safe
// to share across threads.
class Sequence {
  public:
    Sequence() = default;

    static Sequence in_memory(std::string name, std::vector<Frame> frames,
                              std::vector<std::optional<BoundingBox>> truth,
                              std::set<Attribute> attrs = {}) {
        Sequence s;
        s.name_ = std::move(name);
        s.frames_ = std::move(frames);
        s.truth_ = std::move(truth);
        s.attributes_ = std::move(attrs);
        if (!s.frames_.empty()) {
            s.width_ = s.frames_[0].width;
            s.height_ = s.frames_[0].height;
        }
        s.truth_.resize(s.frames_.size());
        return s;
    }

    static Sequence from_files(std::string name, std::vector<std::string> paths,
                               std::vector<std::optional<BoundingBox>> truth,
                               std::set<Attribute> attrs,
                               std::function<Frame(const std::string&, int)> decoder,
                               int width, int height) {
        Sequence s;
        s.name_ = std::move(name);
        s.paths_ = std::move(paths);
        s.truth_ = std::move(truth);
        s.attributes_ = std::move(attrs);
        s.decoder_ = std::move(decoder);
        s.width_ = width;
        s.height_ = height;
        s.truth_.resize(s.paths_.size());
        return s;
    }

    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(paths_.empty() ? frames_.size() : paths_.size()); }
    int width() const { return width_; }
    int height() const { return height_; }
    const std::set<Attribute>& attributes() const { return attributes_; }
    void set_attributes(std::set<Attribute> attrs) { attributes_ = std::move(attrs); }

    // t is 1-based.
    Frame frame(int t) const {
        if (t < 1 || t > size()) throw DataError("frame index out of range: " + std::to_string(t));
        if (!paths_.empty()) {
            Frame f = decoder_(paths_[t - 1], t);
            if (f.width != width_ || f.height != height_)
                throw DataError("frame dimension mismatch at " + paths_[t - 1]);
            return f;
        }
        return frames_[t - 1];
    }

    bool has_truth(int t) const { return t >= 1 && t <= size() && truth_[t - 1].has_value(); }

    const BoundingBox& truth(int t) const {
        if (!has_truth(t)) throw DataError("no ground truth at frame " + std::to_string(t));
        return *truth_[t - 1];
    }

    const std::vector<std::optional<BoundingBox>>& truth_list() const { return truth_; }

    int annotated_count() const {
        int n = 0;
        for (const auto& t : truth_)
            if (t) ++n;
        return n;
    }

  private:
    std::string name_;
    std::vector<Frame> frames_;
    std::vector<std::string> paths_;
    std::function<Frame(const std::string&, int)> decoder_;
    std::vector<std::optional<BoundingBox>> truth_;
    std::set<Attribute> attributes_;
    int width_ = 0;
    int height_ = 0;
};

}  // namespace cotrack

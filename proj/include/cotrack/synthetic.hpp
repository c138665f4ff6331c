#pragma once

// Seeded synthetic sequences: a textured rectangular target moving along a
// waypoint path over a static textured background, with optional occlusion
// and illumination events. Same script, same pixels — the generator draws
// everything from one seeded stream. The target palette (reds/yellows) is
// deliberately disjoint from the background palette (blues/greens) so the
// color-name features carry signal.

#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "cotrack/errors.hpp"
#include "cotrack/kvconfig.hpp"
#include "cotrack/rng.hpp"
#include "cotrack/sequence.hpp"

namespace cotrack {

struct OcclusionEvent {
    int start = 1;       // first affected frame, 1-based
    int duration = 1;    // frames
    double coverage = 1.0;  // fraction of the target hidden, in [0,1]
};

struct IlluminationEvent {
    int start = 1;
    int duration = 1;
    double gain = 1.0;  // multiplicative, > 0
};

struct SyntheticScript {
    std::string name = "synthetic";
    std::uint64_t seed = 1;
    int length = 50;
    int width = 160;
    int height = 120;
    int annotation_stride = 1;  // ground truth at frame 1 and every stride-th frame

    int target_w = 24;
    int target_h = 30;
    std::vector<double> waypoints;  // flat cx,cy pairs; empty = frame center
    double speed = 0.0;             // pixels per frame along the waypoint path

    std::string background_style = "noise";  // "noise" or "checker"
    int background_cell = 16;

    std::vector<OcclusionEvent> occlusions;
    std::vector<IlluminationEvent> illuminations;

    void validate() const {
        if (length < 1) throw ConfigError("synthetic script: length must be >= 1");
        if (width < 8 || height < 8) throw ConfigError("synthetic script: frame too small");
        if (target_w < 2 || target_h < 2 || target_w > width || target_h > height)
            throw ConfigError("synthetic script: bad target size");
        if (annotation_stride < 1) throw ConfigError("synthetic script: annotation_stride must be >= 1");
        if (waypoints.size() % 2 != 0) throw ConfigError("synthetic script: waypoints must be cx,cy pairs");
        if (background_style != "noise" && background_style != "checker")
            throw ConfigError("synthetic script: unknown background style: " + background_style);
        for (const auto& e : occlusions) {
            if (e.start < 1 || e.duration < 1 || e.start + e.duration - 1 > length)
                throw ConfigError("synthetic script: occlusion event outside [1, length]");
            if (e.coverage < 0.0 || e.coverage > 1.0)
                throw ConfigError("synthetic script: occlusion coverage must be in [0,1]");
        }
        for (const auto& e : illuminations) {
            if (e.start < 1 || e.duration < 1 || e.start + e.duration - 1 > length)
                throw ConfigError("synthetic script: illumination event outside [1, length]");
            if (e.gain <= 0.0) throw ConfigError("synthetic script: illumination gain must be > 0");
        }
    }

    static SyntheticScript from_kv(const KvConfig& kv) {
        SyntheticScript s;
        s.name = kv.get_string("sequence.name", s.name);
        s.seed = static_cast<std::uint64_t>(kv.get_int("sequence.seed", 1));
        s.length = static_cast<int>(kv.get_int("sequence.length", s.length));
        s.width = static_cast<int>(kv.get_int("sequence.width", s.width));
        s.height = static_cast<int>(kv.get_int("sequence.height", s.height));
        s.annotation_stride = static_cast<int>(kv.get_int("sequence.annotation_stride", 1));
        s.target_w = static_cast<int>(kv.get_int("target.width", s.target_w));
        s.target_h = static_cast<int>(kv.get_int("target.height", s.target_h));
        s.waypoints = kv.get_double_list("target.waypoints", {});
        s.speed = kv.get_double("target.speed", 0.0);
        s.background_style = kv.get_string("background.style", s.background_style);
        s.background_cell = static_cast<int>(kv.get_int("background.cell", s.background_cell));
        for (const char* key : {"occlusion.events", "illumination.events"}) {
            if (!kv.has(key)) continue;
            const auto flat = kv.get_double_list(key);
            if (flat.size() % 3 != 0)
                throw ConfigError(std::string("synthetic script: `") + key +
                                  "` must hold start,duration,value triples");
            for (std::size_t i = 0; i + 2 < flat.size(); i += 3) {
                if (std::string(key) == "occlusion.events")
                    s.occlusions.push_back({static_cast<int>(flat[i]), static_cast<int>(flat[i + 1]), flat[i + 2]});
                else
                    s.illuminations.push_back({static_cast<int>(flat[i]), static_cast<int>(flat[i + 1]), flat[i + 2]});
            }
        }
        s.validate();
        return s;
    }

    static SyntheticScript from_file(const std::string& path) {
        return from_kv(KvConfig::parse_file(path));
    }

    KvConfig to_kv() const {
        KvConfig kv;
        kv.set_string("sequence.name", name);
        kv.set_int("sequence.seed", static_cast<long long>(seed));
        kv.set_int("sequence.length", length);
        kv.set_int("sequence.width", width);
        kv.set_int("sequence.height", height);
        kv.set_int("sequence.annotation_stride", annotation_stride);
        kv.set_int("target.width", target_w);
        kv.set_int("target.height", target_h);
        kv.set_double_list("target.waypoints", waypoints);
        kv.set_double("target.speed", speed);
        kv.set_string("background.style", background_style);
        kv.set_int("background.cell", background_cell);
        std::vector<double> occ, ill;
        for (const auto& e : occlusions) {
            occ.push_back(e.start);
            occ.push_back(e.duration);
            occ.push_back(e.coverage);
        }
        for (const auto& e : illuminations) {
            ill.push_back(e.start);
            ill.push_back(e.duration);
            ill.push_back(e.gain);
        }
        if (!occ.empty()) kv.set_double_list("occlusion.events", occ);
        if (!ill.empty()) kv.set_double_list("illumination.events", ill);
        return kv;
    }
};

namespace detail {

struct Tile {
    int w = 0, h = 0;
    std::vector<std::uint8_t> rgb;
    std::uint8_t at(int x, int y, int c) const { return rgb[(y * w + x) * 3 + c]; }
};

inline Tile make_tile(int w, int h, Rng& rng, const std::vector<std::array<int, 3>>& palette, int cell) {
    Tile t;
    t.w = w;
    t.h = h;
    t.rgb.resize(static_cast<std::size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto& base = palette[((x / cell) + (y / cell)) % palette.size()];
            for (int c = 0; c < 3; ++c) {
                const int jitter = static_cast<int>(rng.below(31)) - 15;
                const int v = std::clamp(base[c] + jitter, 0, 255);
                t.rgb[(static_cast<std::size_t>(y) * w + x) * 3 + c] = static_cast<std::uint8_t>(v);
            }
        }
    }
    return t;
}

// Center positions along the waypoint polyline at constant speed, one per
// frame, holding the final waypoint once the path is exhausted.
inline std::vector<std::pair<double, double>> walk_path(const SyntheticScript& s) {
    std::vector<std::pair<double, double>> pts;
    double cx = s.width / 2.0;
    double cy = s.height / 2.0;
    std::size_t leg = 0;
    if (s.waypoints.size() >= 2) {
        cx = s.waypoints[0];
        cy = s.waypoints[1];
        leg = 1;
    }
    pts.reserve(s.length);
    for (int t = 0; t < s.length; ++t) {
        pts.emplace_back(cx, cy);
        double remaining = s.speed;
        while (remaining > 0.0 && 2 * leg + 1 < s.waypoints.size()) {
            const double tx = s.waypoints[2 * leg];
            const double ty = s.waypoints[2 * leg + 1];
            const double dx = tx - cx;
            const double dy = ty - cy;
            const double dist = std::sqrt(dx * dx + dy * dy);
            if (dist <= remaining) {
                cx = tx;
                cy = ty;
                remaining -= dist;
                ++leg;
            } else {
                cx += dx / dist * remaining;
                cy += dy / dist * remaining;
                remaining = 0.0;
            }
        }
    }
    return pts;
}

}  // namespace detail

inline Sequence generate_synthetic(const SyntheticScript& script) {
    script.validate();
    Rng rng(script.seed);

    // palettes: target warm, background cold, occluder neutral
    const std::vector<std::array<int, 3>> target_palette = {{220, 40, 30}, {235, 200, 40}, {230, 120, 30}};
    const std::vector<std::array<int, 3>> bg_palette = script.background_style == "checker"
        ? std::vector<std::array<int, 3>>{{40, 70, 140}, {40, 120, 70}}
        : std::vector<std::array<int, 3>>{{45, 80, 130}};
    const std::vector<std::array<int, 3>> occ_palette = {{170, 170, 180}, {120, 120, 130}};

    detail::Tile target_tile = detail::make_tile(script.target_w, script.target_h, rng, target_palette, 4);
    detail::Tile occ_tile = detail::make_tile(script.target_w, script.target_h, rng, occ_palette, 5);
    detail::Tile background = detail::make_tile(script.width, script.height, rng,
                                                bg_palette, script.background_cell);

    const auto path = detail::walk_path(script);

    std::vector<Frame> frames;
    std::vector<std::optional<BoundingBox>> truth;
    frames.reserve(script.length);
    truth.resize(script.length);

    for (int t = 1; t <= script.length; ++t) {
        Frame f(t, script.width, script.height);
        f.rgb = background.rgb;

        // target position this frame, kept fully inside the frame
        const auto [pcx, pcy] = path[t - 1];
        int bx = static_cast<int>(std::lround(pcx - script.target_w / 2.0));
        int by = static_cast<int>(std::lround(pcy - script.target_h / 2.0));
        bx = std::clamp(bx, 0, script.width - script.target_w);
        by = std::clamp(by, 0, script.height - script.target_h);

        for (int y = 0; y < script.target_h; ++y)
            for (int x = 0; x < script.target_w; ++x)
                for (int c = 0; c < 3; ++c) f.at(bx + x, by + y, c) = target_tile.at(x, y, c);

        for (const auto& e : script.occlusions) {
            if (t < e.start || t >= e.start + e.duration) continue;
            const int occ_h = static_cast<int>(std::lround(e.coverage * script.target_h));
            for (int y = 0; y < occ_h; ++y)
                for (int x = 0; x < script.target_w; ++x)
                    for (int c = 0; c < 3; ++c) f.at(bx + x, by + y, c) = occ_tile.at(x, y, c);
        }

        for (const auto& e : script.illuminations) {
            if (t < e.start || t >= e.start + e.duration) continue;
            for (auto& v : f.rgb)
                v = static_cast<std::uint8_t>(std::clamp(std::lround(v * e.gain), 0L, 255L));
        }

        frames.push_back(std::move(f));

        if (t == 1 || t % script.annotation_stride == 0)
            truth[t - 1] = BoundingBox{static_cast<double>(bx), static_cast<double>(by),
                                       static_cast<double>(script.target_w),
                                       static_cast<double>(script.target_h)};
    }

    std::set<Attribute> attrs;
    if (!script.occlusions.empty()) attrs.insert(Attribute::OCC);
    if (!script.illuminations.empty()) attrs.insert(Attribute::IV);

    return Sequence::in_memory(script.name, std::move(frames), std::move(truth), std::move(attrs));
}

}  // namespace cotrack

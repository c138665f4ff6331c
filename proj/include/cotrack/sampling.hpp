#pragma once

// Deterministic candidate sampling: an equi-spaced grid of centers covering
// a search region 3x the target extent (per axis), repeated per scale. The
// grid is a pure function of the last target state and the config, so the
// uncertainty histogram downstream is free of sampling noise.

#include <cmath>
#include <vector>

#include "cotrack/errors.hpp"
#include "cotrack/geometry.hpp"

namespace cotrack {

struct Candidate {
    double cx;
    double cy;
    double scale;

    BoundingBox box(const BoundingBox& last) const {
        return BoundingBox::from_center(cx, cy, scale * last.w, scale * last.h);
    }
};

struct SampleGrid {
    int n_s = 0;
    std::vector<double> scales;
    BoundingBox region;  // search region, clipped to the frame
    std::vector<Candidate> positions;
};

// Throws ConfigError when n_s does not split into per-scale square grids;
// throws TrackError when the search region degenerates (target outside frame).
inline SampleGrid make_grid(const BoundingBox& last, int frame_w, int frame_h, int n_s,
                            const std::vector<double>& scales) {
    if (scales.empty()) throw ConfigError("sampling: scale list is empty");
    if (n_s <= 0 || n_s % static_cast<int>(scales.size()) != 0)
        throw ConfigError("sampling: n_s must split evenly across scales");
    const int per_scale = n_s / static_cast<int>(scales.size());
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(per_scale))));
    if (side * side != per_scale)
        throw ConfigError("sampling: per-scale sample count must be a perfect square");

    SampleGrid grid;
    grid.n_s = n_s;
    grid.scales = scales;
    const BoundingBox search = BoundingBox::from_center(last.cx(), last.cy(), 3.0 * last.w, 3.0 * last.h);
    grid.region = clip_to_frame(search, frame_w, frame_h);
    if (!grid.region.valid()) throw TrackError("sampling: target lost (search region left the frame)");

    grid.positions.reserve(n_s);
    for (const double s : scales) {
        for (int i = 0; i < side; ++i) {
            const double cy = grid.region.y + (i + 0.5) * grid.region.h / side;
            for (int j = 0; j < side; ++j) {
                const double cx = grid.region.x + (j + 0.5) * grid.region.w / side;
                grid.positions.push_back({cx, cy, s});
            }
        }
    }
    return grid;
}

}  // namespace cotrack

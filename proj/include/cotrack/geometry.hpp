#pragma once

#include <algorithm>
#include <cmath>

#include "cotrack/errors.hpp"

namespace cotrack {

// Axis-aligned box, continuous pixel coordinates, top-left origin.
// Boxes must have strictly positive extent.
struct BoundingBox {
    double x = 0.0;  // left edge
    double y = 0.0;  // top edge
    double w = 0.0;
    double h = 0.0;

    double area() const { return w * h; }
    double cx() const { return x + 0.5 * w; }
    double cy() const { return y + 0.5 * h; }
    double right() const { return x + w; }
    double bottom() const { return y + h; }
    bool valid() const { return w > 0.0 && h > 0.0; }

    static BoundingBox from_center(double cx, double cy, double w, double h) {
        return {cx - 0.5 * w, cy - 0.5 * h, w, h};
    }

    bool operator==(const BoundingBox& o) const {
        return x == o.x && y == o.y && w == o.w && h == o.h;
    }
};

// Intersection-over-union. Zero-area (touching) overlap counts as disjoint.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
    const double inter = ix * iy;
    if (inter <= 0.0) return 0.0;
    return inter / (a.area() + b.area() - inter);
}

// Euclidean distance between box centers.
inline double center_error(const BoundingBox& a, const BoundingBox& b) {
    const double dx = a.cx() - b.cx();
    const double dy = a.cy() - b.cy();
    return std::sqrt(dx * dx + dy * dy);
}

// Intersect with the frame rectangle [0,w]x[0,h]. Degenerate results keep
// w/h <= 0; callers decide whether that is an error.
inline BoundingBox clip_to_frame(const BoundingBox& b, double frame_w, double frame_h) {
    const double x0 = std::max(0.0, b.x);
    const double y0 = std::max(0.0, b.y);
    const double x1 = std::min(frame_w, b.right());
    const double y1 = std::min(frame_h, b.bottom());
    return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace cotrack

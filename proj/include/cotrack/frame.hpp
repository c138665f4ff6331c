#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cotrack/errors.hpp"
#include "cotrack/geometry.hpp"

namespace cotrack {

// One video frame: row-major, tightly packed RGB bytes.
// Pixel (px, py) covers the continuous square [px, px+1) x [py, py+1).
struct Frame {
    int index = 0;  // 1-based position in its sequence
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Frame() = default;
    Frame(int idx, int w, int h) : index(idx), width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t at(int x, int y, int c) const {
        return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t& at(int x, int y, int c) {
        return rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    std::uint8_t at_clamped(int x, int y, int c) const {
        x = std::clamp(x, 0, width - 1);
        y = std::clamp(y, 0, height - 1);
        return at(x, y, c);
    }

    // Bilinear sample of channel c at a continuous point, clamp-to-edge.
    double sample(double x, double y, int c) const {
        const double u = x - 0.5;  // pixel centers sit at integer + 0.5
        const double v = y - 0.5;
        const int x0 = static_cast<int>(std::floor(u));
        const int y0 = static_cast<int>(std::floor(v));
        const double fx = u - x0;
        const double fy = v - y0;
        const double p00 = at_clamped(x0, y0, c);
        const double p10 = at_clamped(x0 + 1, y0, c);
        const double p01 = at_clamped(x0, y0 + 1, c);
        const double p11 = at_clamped(x0 + 1, y0 + 1, c);
        const double top = p00 + fx * (p10 - p00);
        const double bot = p01 + fx * (p11 - p01);
        return top + fy * (bot - top);
    }

    void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        for (std::size_t i = 0; i + 2 < rgb.size(); i += 3) {
            rgb[i] = r;
            rgb[i + 1] = g;
            rgb[i + 2] = b;
        }
    }

    bool same_pixels(const Frame& o) const {
        return width == o.width && height == o.height && rgb == o.rgb;
    }
};

// Draw an axis-aligned rectangle outline (used by the CLI overlay writer).
inline void draw_box(Frame& f, const BoundingBox& b, std::uint8_t r, std::uint8_t g, std::uint8_t bl) {
    const int x0 = std::clamp(static_cast<int>(std::lround(b.x)), 0, f.width - 1);
    const int y0 = std::clamp(static_cast<int>(std::lround(b.y)), 0, f.height - 1);
    const int x1 = std::clamp(static_cast<int>(std::lround(b.right())) - 1, 0, f.width - 1);
    const int y1 = std::clamp(static_cast<int>(std::lround(b.bottom())) - 1, 0, f.height - 1);
    for (int x = x0; x <= x1; ++x) {
        f.at(x, y0, 0) = r; f.at(x, y0, 1) = g; f.at(x, y0, 2) = bl;
        f.at(x, y1, 0) = r; f.at(x, y1, 1) = g; f.at(x, y1, 2) = bl;
    }
    for (int y = y0; y <= y1; ++y) {
        f.at(x0, y, 0) = r; f.at(x0, y, 1) = g; f.at(x0, y, 2) = bl;
        f.at(x1, y, 0) = r; f.at(x1, y, 1) = g; f.at(x1, y, 2) = bl;
    }
}

}  // namespace cotrack

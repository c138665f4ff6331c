#pragma once

// Patch descriptor: HOG over a fixed-size canonical patch, concatenated with
// a normalized 11-bin color-name histogram (HOG first). The candidate region
// is resampled to patch_size x patch_size with bilinear, clamp-to-edge
// lookups, so candidates may partially leave the frame.

#include <cmath>
#include <cstdint>
#include <vector>

#include "cotrack/colornames.hpp"
#include "cotrack/errors.hpp"
#include "cotrack/frame.hpp"
#include "cotrack/geometry.hpp"

namespace cotrack {

using FeatureVector = std::vector<double>;

struct FeatureConfig {
    int patch_size = 32;   // canonical patch edge, pixels
    int cell_size = 8;     // HOG cell edge, pixels
    int block_cells = 2;   // block edge, cells
    int orient_bins = 9;   // unsigned orientation bins over [0, pi)

    int cells_per_side() const { return patch_size / cell_size; }
    int blocks_per_side() const { return cells_per_side() - block_cells + 1; }
    int hog_length() const {
        const int bs = blocks_per_side();
        return bs * bs * block_cells * block_cells * orient_bins;
    }
    int length() const { return hog_length() + kColorNameCount; }

    void validate() const {
        if (patch_size <= 0 || cell_size <= 0 || block_cells <= 0 || orient_bins <= 0)
            throw ConfigError("feature config: all sizes must be positive");
        if (patch_size % cell_size != 0)
            throw ConfigError("feature config: patch_size must be a multiple of cell_size");
        if (blocks_per_side() < 1)
            throw ConfigError("feature config: block_cells exceeds cells per side");
    }
};

class FeatureExtractor {
  public:
    explicit FeatureExtractor(FeatureConfig cfg = {}, ColorNameTable table = ColorNameTable::builtin())
        : cfg_(cfg), colors_(std::move(table)) {
        cfg_.validate();
    }

    const FeatureConfig& config() const { return cfg_; }
    int length() const { return cfg_.length(); }

    FeatureVector extract(const Frame& frame, const BoundingBox& candidate) const {
        if (!candidate.valid()) throw TrackError("feature extraction: degenerate candidate box");
        const BoundingBox inside = clip_to_frame(candidate, frame.width, frame.height);
        if (!inside.valid()) throw TrackError("feature extraction: candidate fully outside frame");

        const int n = cfg_.patch_size;
        // canonical patch, bilinear resample; kept as doubles for the gradient
        std::vector<double> red(n * n), green(n * n), blue(n * n), gray(n * n);
        for (int i = 0; i < n; ++i) {
            const double py = candidate.y + (i + 0.5) * candidate.h / n;
            for (int j = 0; j < n; ++j) {
                const double px = candidate.x + (j + 0.5) * candidate.w / n;
                const double r = frame.sample(px, py, 0);
                const double g = frame.sample(px, py, 1);
                const double b = frame.sample(px, py, 2);
                const int k = i * n + j;
                red[k] = r;
                green[k] = g;
                blue[k] = b;
                gray[k] = 0.299 * r + 0.587 * g + 0.114 * b;
            }
        }

        FeatureVector out;
        out.reserve(cfg_.length());
        append_hog(gray, out);
        append_color_histogram(red, green, blue, out);
        return out;
    }

  private:
    void append_hog(const std::vector<double>& gray, FeatureVector& out) const {
        const int n = cfg_.patch_size;
        const int cells = cfg_.cells_per_side();
        const int bins = cfg_.orient_bins;
        const double pi = 3.14159265358979323846;

        // per-cell magnitude-weighted orientation histograms, hard binning
        std::vector<double> cell_hist(cells * cells * bins, 0.0);
        auto g_at = [&](int x, int y) {
            x = std::clamp(x, 0, n - 1);
            y = std::clamp(y, 0, n - 1);
            return gray[y * n + x];
        };
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                const double gx = g_at(x + 1, y) - g_at(x - 1, y);
                const double gy = g_at(x, y + 1) - g_at(x, y - 1);
                const double mag = std::sqrt(gx * gx + gy * gy);
                if (mag == 0.0) continue;
                double theta = std::atan2(gy, gx);  // (-pi, pi]
                if (theta < 0.0) theta += pi;       // fold to [0, pi)
                if (theta >= pi) theta = 0.0;
                int bin = static_cast<int>(theta / pi * bins);
                if (bin >= bins) bin = bins - 1;
                const int cx = x / cfg_.cell_size;
                const int cy = y / cfg_.cell_size;
                cell_hist[(cy * cells + cx) * bins + bin] += mag;
            }
        }

        // overlapping blocks, stride one cell, L2 normalization per block
        const int bc = cfg_.block_cells;
        const int bside = cfg_.blocks_per_side();
        for (int by = 0; by < bside; ++by) {
            for (int bx = 0; bx < bside; ++bx) {
                const std::size_t start = out.size();
                double norm2 = 0.0;
                for (int cy = by; cy < by + bc; ++cy) {
                    for (int cx = bx; cx < bx + bc; ++cx) {
                        for (int b = 0; b < bins; ++b) {
                            const double v = cell_hist[(cy * cells + cx) * bins + b];
                            out.push_back(v);
                            norm2 += v * v;
                        }
                    }
                }
                if (norm2 > 0.0) {
                    const double inv = 1.0 / std::sqrt(norm2);
                    for (std::size_t i = start; i < out.size(); ++i) out[i] *= inv;
                }
            }
        }
    }

    void append_color_histogram(const std::vector<double>& red, const std::vector<double>& green,
                                const std::vector<double>& blue, FeatureVector& out) const {
        const int n = cfg_.patch_size;
        std::vector<int> counts(kColorNameCount, 0);
        for (int k = 0; k < n * n; ++k) {
            const int r = static_cast<int>(std::lround(std::clamp(red[k], 0.0, 255.0)));
            const int g = static_cast<int>(std::lround(std::clamp(green[k], 0.0, 255.0)));
            const int b = static_cast<int>(std::lround(std::clamp(blue[k], 0.0, 255.0)));
            ++counts[colors_.lookup(r, g, b)];
        }
        const double total = static_cast<double>(n) * n;
        for (int c = 0; c < kColorNameCount; ++c) out.push_back(counts[c] / total);
    }

    FeatureConfig cfg_;
    ColorNameTable colors_;
};

}  // namespace cotrack

#pragma once

// JPG/PNG codec boundary; the only place OpenCV is touched.

#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "cotrack/errors.hpp"
#include "cotrack/frame.hpp"

namespace cotrack {

inline Frame decode_image(const std::string& path, int index) {
    cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
    if (bgr.empty()) throw DataError("unreadable image: " + path);
    Frame f(index, bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            f.at(x, y, 0) = row[x][2];
            f.at(x, y, 1) = row[x][1];
            f.at(x, y, 2) = row[x][0];
        }
    }
    return f;
}

// PNG keeps pixels bit-exact, which the synthetic round-trip relies on.
inline void encode_png(const std::string& path, const Frame& f) {
    cv::Mat bgr(f.height, f.width, CV_8UC3);
    for (int y = 0; y < f.height; ++y) {
        cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < f.width; ++x) {
            row[x][2] = f.at(x, y, 0);
            row[x][1] = f.at(x, y, 1);
            row[x][0] = f.at(x, y, 2);
        }
    }
    if (!cv::imwrite(path, bgr)) throw DataError("cannot write image: " + path);
}

}  // namespace cotrack

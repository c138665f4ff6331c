#pragma once

// Color-name assignment: each RGB pixel maps to the nearest of a small set
// of named prototype colors (11 basic color terms). The prototype table is
// also shipped as a plain-text data file (`R G B name_index` rows, see
// data/colornames.txt); the built-in table below is identical to it.

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cotrack/errors.hpp"

namespace cotrack {

inline constexpr int kColorNameCount = 11;

inline const char* color_name(int index) {
    static const char* names[kColorNameCount] = {
        "black", "blue", "brown", "gray", "green", "orange",
        "pink",  "purple", "red", "white", "yellow"};
    return names[index];
}

struct ColorPrototype {
    std::uint8_t r, g, b;
    int name;  // in [0, kColorNameCount)
};

class ColorNameTable {
  public:
    static ColorNameTable builtin() {
        ColorNameTable t;
        t.prototypes_ = {{
            {0, 0, 0, 0},        // black
            {0, 0, 255, 1},      // blue
            {150, 75, 0, 2},     // brown
            {128, 128, 128, 3},  // gray
            {0, 128, 0, 4},      // green
            {255, 165, 0, 5},    // orange
            {255, 192, 203, 6},  // pink
            {128, 0, 128, 7},    // purple
            {255, 0, 0, 8},      // red
            {255, 255, 255, 9},  // white
            {255, 255, 0, 10},   // yellow
        }};
        return t;
    }

    // Format: optional `# ...` comments, then `R G B name_index` rows.
    static ColorNameTable load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw DataError("cannot open color-name table: " + path);
        ColorNameTable t;
        std::string line;
        int lineno = 0;
        while (std::getline(f, line)) {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::istringstream in(line);
            int r, g, b, name;
            if (!(in >> r >> g >> b >> name) || r < 0 || r > 255 || g < 0 || g > 255 ||
                b < 0 || b > 255 || name < 0 || name >= kColorNameCount)
                throw DataError(path + ":" + std::to_string(lineno) + ": bad color-name row");
            t.prototypes_.push_back({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                     static_cast<std::uint8_t>(b), name});
        }
        if (t.prototypes_.empty()) throw DataError("color-name table has no rows: " + path);
        return t;
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw DataError("cannot write color-name table: " + path);
        f << "# color-name prototype table v1\n";
        f << "# columns: R G B name_index\n";
        f << "# names:";
        for (int i = 0; i < kColorNameCount; ++i) f << " " << i << "=" << color_name(i);
        f << "\n";
        for (const auto& p : prototypes_)
            f << int(p.r) << " " << int(p.g) << " " << int(p.b) << " " << p.name << "\n";
    }

    // Nearest prototype in RGB, squared Euclidean; ties go to the earliest row.
    int lookup(int r, int g, int b) const {
        int best = 0;
        long best_d = distance2(prototypes_[0], r, g, b);
        for (std::size_t i = 1; i < prototypes_.size(); ++i) {
            const long d = distance2(prototypes_[i], r, g, b);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        return prototypes_[best].name;
    }

    const std::vector<ColorPrototype>& prototypes() const { return prototypes_; }

    bool operator==(const ColorNameTable& o) const {
        if (prototypes_.size() != o.prototypes_.size()) return false;
        for (std::size_t i = 0; i < prototypes_.size(); ++i) {
            const auto& a = prototypes_[i];
            const auto& b = o.prototypes_[i];
            if (a.r != b.r || a.g != b.g || a.b != b.b || a.name != b.name) return false;
        }
        return true;
    }

  private:
    static long distance2(const ColorPrototype& p, int r, int g, int b) {
        const long dr = static_cast<long>(p.r) - r;
        const long dg = static_cast<long>(p.g) - g;
        const long db = static_cast<long>(p.b) - b;
        return dr * dr + dg * dg + db * db;
    }

    std::vector<ColorPrototype> prototypes_;
};

}  // namespace cotrack

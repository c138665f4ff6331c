#pragma once

// Binary model snapshots for debugging and test fixtures.
// Layout: magic (4 bytes), version u32, feature length u32, payload.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "cotrack/errors.hpp"
#include "cotrack/knn.hpp"
#include "cotrack/svm.hpp"

namespace cotrack {

namespace detail {

inline constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void put(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& f, const std::string& path) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw DataError("truncated model snapshot: " + path);
    return v;
}

inline void check_header(std::ifstream& f, const char magic[4], const std::string& path,
                         std::uint32_t* feature_len) {
    char got[4];
    f.read(got, 4);
    if (!f || std::memcmp(got, magic, 4) != 0)
        throw DataError("bad model snapshot magic: " + path);
    const auto version = take<std::uint32_t>(f, path);
    if (version != kSnapshotVersion)
        throw DataError("unsupported model snapshot version " + std::to_string(version) + ": " + path);
    *feature_len = take<std::uint32_t>(f, path);
}

}  // namespace detail

inline void save_svm(const SvmModel& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write model snapshot: " + path);
    f.write("CTSV", 4);
    detail::put(f, detail::kSnapshotVersion);
    detail::put(f, static_cast<std::uint32_t>(m.weights.size()));
    detail::put(f, static_cast<std::uint8_t>(m.trained ? 1 : 0));
    detail::put(f, m.bias);
    detail::put(f, m.lambda);
    detail::put(f, static_cast<std::int32_t>(m.trained_at));
    for (double w : m.weights) detail::put(f, w);
}

inline SvmModel load_svm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open model snapshot: " + path);
    std::uint32_t dim = 0;
    detail::check_header(f, "CTSV", path, &dim);
    SvmModel m;
    m.trained = detail::take<std::uint8_t>(f, path) != 0;
    m.bias = detail::take<double>(f, path);
    m.lambda = detail::take<double>(f, path);
    m.trained_at = detail::take<std::int32_t>(f, path);
    m.weights.resize(dim);
    for (auto& w : m.weights) w = detail::take<double>(f, path);
    return m;
}

inline void save_knn(const KnnClassifier& knn, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write model snapshot: " + path);
    const auto& entries = knn.store().entries();
    const std::uint32_t dim = entries.empty() ? 0 : static_cast<std::uint32_t>(entries.front().x.size());
    f.write("CTKN", 4);
    detail::put(f, detail::kSnapshotVersion);
    detail::put(f, dim);
    detail::put(f, static_cast<std::int32_t>(knn.k()));
    detail::put(f, static_cast<std::int32_t>(knn.store().window()));
    detail::put(f, static_cast<std::uint64_t>(entries.size()));
    for (const auto& e : entries) {
        detail::put(f, static_cast<std::int32_t>(e.t));
        detail::put(f, static_cast<std::int8_t>(e.label));
        for (double v : e.x) detail::put(f, v);
    }
}

inline KnnClassifier load_knn(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open model snapshot: " + path);
    std::uint32_t dim = 0;
    detail::check_header(f, "CTKN", path, &dim);
    const auto k = detail::take<std::int32_t>(f, path);
    const auto window = detail::take<std::int32_t>(f, path);
    const auto count = detail::take<std::uint64_t>(f, path);
    KnnClassifier knn(k, window);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto t = detail::take<std::int32_t>(f, path);
        const auto label = detail::take<std::int8_t>(f, path);
        FeatureVector x(dim);
        for (auto& v : x) v = detail::take<double>(f, path);
        knn.store().insert(t, std::move(x), label);
    }
    return knn;
}

}  // namespace cotrack

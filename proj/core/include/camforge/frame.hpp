#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace camforge {

/// Gamma-encoded (display-referred) RGB raster. Channel values live in
/// [0,1], stored row-major with interleaved channels.
struct Frame {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;  // height * width * 3

    Frame() = default;
    Frame(int w, int h, float fill = 0.0f)
        : width(w), height(h),
          pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

    float& at(int y, int x, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    float at(int y, int x, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * height;
    }
    bool same_shape(const Frame& o) const {
        return width == o.width && height == o.height;
    }
};

/// Single- or multi-channel float raster (depth, optical flow, perspective
/// field, ...). Row-major, interleaved channels.
struct ProxyMap {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<float> data;  // height * width * channels

    ProxyMap() = default;
    ProxyMap(int w, int h, int c, float fill = 0.0f)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {}

    float& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool same_shape(const ProxyMap& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

/// Per-frame feature vectors ingested from files, one row per frame.
struct EmbeddingSequence {
    int frames = 0;
    int dim = 0;
    std::vector<float> data;  // frames * dim

    EmbeddingSequence() = default;
    EmbeddingSequence(int t, int d, float fill = 0.0f)
        : frames(t), dim(d), data(static_cast<std::size_t>(t) * d, fill) {}

    const float* row(int t) const {
        return data.data() + static_cast<std::size_t>(t) * dim;
    }
    float* row(int t) {
        return data.data() + static_cast<std::size_t>(t) * dim;
    }
};

inline constexpr double kGamma = 2.2;

/// Encoded [0,1] -> linear light.
inline double linearize(double encoded) { return std::pow(encoded, kGamma); }

/// Linear light -> encoded [0,1].
inline double gamma_encode(double linear) { return std::pow(linear, 1.0 / kGamma); }

/// ITU-R BT.601 luma.
inline double luma601(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

}  // namespace camforge

#include "camforge/pixel_effects.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace camforge {

namespace {

inline float clip01(double v) {
    return static_cast<float>(std::clamp(v, 0.0, 1.0));
}

// Catmull-Rom kernel (bicubic a = -0.5).
inline double cubic_weight(double t) {
    t = std::fabs(t);
    if (t <= 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
    if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
    return 0.0;
}

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// Samples one pixel with a 4x4 Catmull-Rom footprint, edge-clamped.
inline void sample_bicubic(const Frame& src, double px, double py, double out[3]) {
    const int x0 = static_cast<int>(std::floor(px));
    const int y0 = static_cast<int>(std::floor(py));
    const double fx = px - x0;
    const double fy = py - y0;
    double wx[4], wy[4];
    for (int i = 0; i < 4; ++i) {
        wx[i] = cubic_weight(fx - (i - 1));
        wy[i] = cubic_weight(fy - (i - 1));
    }
    out[0] = out[1] = out[2] = 0.0;
    for (int j = 0; j < 4; ++j) {
        const int yy = clamp_index(y0 + j - 1, src.height);
        const double wyj = wy[j];
        if (wyj == 0.0) continue;
        double row[3] = {0.0, 0.0, 0.0};
        for (int i = 0; i < 4; ++i) {
            const double wxi = wx[i];
            if (wxi == 0.0) continue;
            const int xx = clamp_index(x0 + i - 1, src.width);
            row[0] += wxi * src.at(yy, xx, 0);
            row[1] += wxi * src.at(yy, xx, 1);
            row[2] += wxi * src.at(yy, xx, 2);
        }
        out[0] += wyj * row[0];
        out[1] += wyj * row[1];
        out[2] += wyj * row[2];
    }
}

// [-1,1] normalized coordinate of pixel center i; the endpoints land on
// the first/last centers (align-corners convention).
inline double center_coord(int i, int n) {
    return n > 1 ? 2.0 * i / (n - 1) - 1.0 : 0.0;
}

}  // namespace

Frame apply_exposure(const Frame& frame, double delta_ev) {
    if (!(delta_ev >= -3.0 && delta_ev <= 3.0)) {
        throw std::invalid_argument("apply_exposure: delta_ev must be in [-3,3]");
    }
    if (delta_ev == 0.0) return frame;  // contract: bit-exact identity
    const double gain = std::exp2(delta_ev);
    Frame out(frame.width, frame.height);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        const double lin = std::min(linearize(frame.pixels[i]) * gain, 1.0);
        out.pixels[i] = static_cast<float>(gamma_encode(lin));
    }
    return out;
}

RgbGains kelvin_gains(double kelvin) {
    if (!(kelvin >= 3000.0 && kelvin <= 9000.0)) {
        throw std::invalid_argument("kelvin_gains: temperature must be in [3000,9000] K");
    }
    const double t = kelvin / 100.0;
    double r, g, b;
    if (t <= 66.0) {
        r = 255.0;
        g = 99.4708025861 * std::log(t) - 161.1195681661;
    } else {
        r = 329.698727446 * std::pow(t - 60.0, -0.1332047592);
        g = 288.1221695283 * std::pow(t - 60.0, -0.0755148492);
    }
    if (t >= 66.0) {
        b = 255.0;
    } else if (t <= 19.0) {
        b = 0.0;
    } else {
        b = 138.5177312231 * std::log(t - 10.0) - 305.0447927307;
    }
    RgbGains gains;
    gains.r = std::clamp(r, 0.0, 255.0) / 255.0;
    gains.g = std::clamp(g, 0.0, 255.0) / 255.0;
    gains.b = std::clamp(b, 0.0, 255.0) / 255.0;
    return gains;
}

Frame apply_temperature(const Frame& frame, double kelvin) {
    const RgbGains gains = kelvin_gains(kelvin);
    const double gc[3] = {gains.r, gains.g, gains.b};
    Frame out(frame.width, frame.height);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        out.pixels[i] = clip01(frame.pixels[i] * gc[i % 3]);
    }
    return out;
}

SampleGrid fisheye_grid(int width, int height, double xi) {
    if (!std::isfinite(xi)) {
        throw std::invalid_argument("fisheye_grid: xi must be finite");
    }
    if (xi < 0.0 || xi > 1.8) {
        throw std::invalid_argument("fisheye_grid: xi must be in [0, 1.8]");
    }
    const double zscale = 0.7 / (1.0 + xi);  // prevents black borders

    SampleGrid grid(width, height);
    std::vector<double> gx(grid.coords.size() / 2), gy(grid.coords.size() / 2);
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = std::numeric_limits<double>::infinity(), max_y = -min_y;
    std::size_t idx = 0;
    for (int row = 0; row < height; ++row) {
        const double v = center_coord(row, height) * zscale;
        for (int col = 0; col < width; ++col, ++idx) {
            const double u = center_coord(col, width) * zscale;
            const double r2 = u * u + v * v;
            const double alpha = (xi + std::sqrt(1.0 + (1.0 - xi * xi) * r2)) / (1.0 + r2);
            const double dz = alpha - xi;
            gx[idx] = alpha * u / dz;
            gy[idx] = alpha * v / dz;
            min_x = std::min(min_x, gx[idx]);
            max_x = std::max(max_x, gx[idx]);
            min_y = std::min(min_y, gy[idx]);
            max_y = std::max(max_y, gy[idx]);
        }
    }
    const double sx = max_x > min_x ? 2.0 / (max_x - min_x) : 0.0;
    const double sy = max_y > min_y ? 2.0 / (max_y - min_y) : 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
        grid.coords[2 * i] = sx != 0.0 ? (gx[i] - min_x) * sx - 1.0 : 0.0;
        grid.coords[2 * i + 1] = sy != 0.0 ? (gy[i] - min_y) * sy - 1.0 : 0.0;
    }
    return grid;
}

Frame grid_sample_bicubic(const Frame& frame, const SampleGrid& grid) {
    Frame out(grid.width, grid.height);
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            const double gx = std::clamp<double>(grid.x(row, col), -1.0, 1.0);
            const double gy = std::clamp<double>(grid.y(row, col), -1.0, 1.0);
            const double px = (gx + 1.0) * 0.5 * (frame.width - 1);
            const double py = (gy + 1.0) * 0.5 * (frame.height - 1);
            double rgb[3];
            sample_bicubic(frame, px, py, rgb);
            out.at(row, col, 0) = clip01(rgb[0]);
            out.at(row, col, 1) = clip01(rgb[1]);
            out.at(row, col, 2) = clip01(rgb[2]);
        }
    }
    return out;
}

Frame apply_vignette(const Frame& frame, double strength) {
    const double cx = (frame.width - 1) * 0.5;
    const double cy = (frame.height - 1) * 0.5;
    const double corner2 = cx * cx + cy * cy;
    const double inv_corner2 = corner2 > 0.0 ? 1.0 / corner2 : 0.0;
    Frame out(frame.width, frame.height);
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            const double dx = x - cx, dy = y - cy;
            const double falloff =
                std::max(0.0, 1.0 - strength * (dx * dx + dy * dy) * inv_corner2);
            for (int c = 0; c < 3; ++c) {
                out.at(y, x, c) = static_cast<float>(frame.at(y, x, c) * falloff);
            }
        }
    }
    return out;
}

double zoom_scale(double focal_mm) {
    if (!(focal_mm >= 25.0 && focal_mm <= 100.0)) {
        throw std::invalid_argument("zoom_scale: focal length must be in [25,100] mm");
    }
    return 25.0 / focal_mm;
}

RegionSize zoom_region_size(int src_width, int src_height, double focal_mm) {
    const double s = zoom_scale(focal_mm);
    return {static_cast<int>(std::floor(src_width * s)),
            static_cast<int>(std::floor(src_height * s))};
}

Frame zoom_crop(const Frame& source, double focal_mm, int out_width, int out_height) {
    const double s = zoom_scale(focal_mm);
    if (source.width < out_width || source.height < out_height) {
        throw std::invalid_argument("zoom_crop: source resolution must be >= output");
    }
    SampleGrid grid(out_width, out_height);
    std::size_t idx = 0;
    for (int row = 0; row < out_height; ++row) {
        const double gy = center_coord(row, out_height) * s;
        for (int col = 0; col < out_width; ++col) {
            grid.coords[idx++] = center_coord(col, out_width) * s;
            grid.coords[idx++] = gy;
        }
    }
    return grid_sample_bicubic(source, grid);
}

}  // namespace camforge

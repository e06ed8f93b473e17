#include "camforge/proxy_effects.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace camforge {

namespace {

constexpr int kBlurSamples = 24;
constexpr int kKernelSize = 33;
constexpr double kSigmaPerp = 1.5;
constexpr double kSigmaAlongCap = 8.0;

inline float clip01(double v) {
    return static_cast<float>(std::clamp(v, 0.0, 1.0));
}

inline void check_shutter_scalar(double s) {
    if (!(s >= 0.5 && s <= 4.0)) {
        throw std::invalid_argument("motion blur: shutter scalar must be in [0.5, 4.0]");
    }
}

// Bilinear sample with edge clamp; exact at integer coordinates.
inline void sample_bilinear(const Frame& src, double px, double py, double out[3]) {
    const int x0 = std::clamp(static_cast<int>(std::floor(px)), 0, src.width - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(py)), 0, src.height - 1);
    const int x1 = std::min(x0 + 1, src.width - 1);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double fx = std::clamp(px - x0, 0.0, 1.0);
    const double fy = std::clamp(py - y0, 0.0, 1.0);
    const double w00 = (1.0 - fx) * (1.0 - fy);
    const double w10 = fx * (1.0 - fy);
    const double w01 = (1.0 - fx) * fy;
    const double w11 = fx * fy;
    for (int c = 0; c < 3; ++c) {
        out[c] = w00 * src.at(y0, x0, c) + w10 * src.at(y0, x1, c) +
                 w01 * src.at(y1, x0, c) + w11 * src.at(y1, x1, c);
    }
}

}  // namespace

ProxyMap normalize_depth(const ProxyMap& raw) {
    if (raw.channels != 1) {
        throw std::invalid_argument("normalize_depth: expected a 1-channel map");
    }
    float lo = 0.0f, hi = 0.0f;
    bool first = true;
    for (float v : raw.data) {
        if (!std::isfinite(v)) {
            throw std::runtime_error("normalize_depth: map contains non-finite values");
        }
        if (first) {
            lo = hi = v;
            first = false;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    ProxyMap out(raw.width, raw.height, 1);
    if (hi > lo) {
        const double inv = 1.0 / (static_cast<double>(hi) - lo);
        for (std::size_t i = 0; i < raw.data.size(); ++i) {
            out.data[i] = static_cast<float>((raw.data[i] - lo) * inv);
        }
    }
    return out;  // constant maps stay all zero
}

std::vector<ProxyMap> normalize_flow_global(const std::vector<ProxyMap>& clip) {
    if (clip.empty()) {
        throw std::invalid_argument("normalize_flow_global: empty clip");
    }
    double max_mag = 0.0;
    for (const ProxyMap& flow : clip) {
        for (std::size_t i = 0; i + 1 < flow.data.size(); i += 2) {
            const double u = flow.data[i], v = flow.data[i + 1];
            max_mag = std::max(max_mag, std::sqrt(u * u + v * v));
        }
    }
    if (max_mag == 0.0) return clip;
    std::vector<ProxyMap> out = clip;
    const double inv = 1.0 / max_mag;
    for (ProxyMap& flow : out) {
        for (float& v : flow.data) v = static_cast<float>(v * inv);
    }
    return out;
}

std::array<double, 2> flow_mean(const ProxyMap& flow) {
    double mx = 0.0, my = 0.0;
    const std::size_t n = flow.data.size() / 2;
    for (std::size_t i = 0; i < n; ++i) {
        mx += flow.data[2 * i];
        my += flow.data[2 * i + 1];
    }
    return {n ? mx / n : 0.0, n ? my / n : 0.0};
}

double flow_magnitude_std(const ProxyMap& flow) {
    const std::size_t n = flow.data.size() / 2;
    if (n == 0) return 0.0;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = flow.data[2 * i], v = flow.data[2 * i + 1];
        const double mag = std::sqrt(u * u + v * v);
        sum += mag;
        sum2 += mag * mag;
    }
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, sum2 / n - mean * mean));
}

BlurMode select_blur_mode(const std::vector<ProxyMap>& clip) {
    if (clip.empty()) {
        throw std::invalid_argument("select_blur_mode: empty clip");
    }
    double acc = 0.0;
    for (const ProxyMap& flow : clip) acc += flow_magnitude_std(flow);
    const double mean_std = acc / clip.size();
    return mean_std > 5.0 ? BlurMode::ObjectMotion : BlurMode::CameraMotion;
}

Frame render_bokeh(const Frame& frame, const ProxyMap& depth, double strength_k,
                   double d_focus) {
    if (depth.width != frame.width || depth.height != frame.height ||
        depth.channels != 1) {
        throw std::invalid_argument("render_bokeh: frame/depth shape mismatch");
    }
    if (!(strength_k >= 0.0 && strength_k <= 25.0)) {
        throw std::invalid_argument("render_bokeh: K must be in [0,25]");
    }
    if (!(d_focus >= 0.0 && d_focus <= 1.0)) {
        throw std::invalid_argument("render_bokeh: d_focus must be in [0,1]");
    }

    const int w = frame.width, h = frame.height;
    std::vector<double> color(static_cast<std::size_t>(w) * h * 3, 0.0);
    std::vector<double> weight(static_cast<std::size_t>(w) * h, 0.0);

    // Row-major scatter in fixed order keeps accumulation deterministic.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double delta =
                strength_k * (depth.at(y, x, 0) - d_focus) / 10.0;
            const double radius = std::max(std::fabs(delta), 0.5);
            const int extent = static_cast<int>(std::floor(radius));
            const double r2 = radius * radius;

            // Count disk pixels first so the scatter weight is uniform.
            int count = 0;
            for (int dy = -extent; dy <= extent; ++dy) {
                for (int dx = -extent; dx <= extent; ++dx) {
                    if (dx * dx + dy * dy <= r2) ++count;
                }
            }
            const double lin[3] = {linearize(frame.at(y, x, 0)),
                                   linearize(frame.at(y, x, 1)),
                                   linearize(frame.at(y, x, 2))};
            const double wgt = 1.0 / count;
            for (int dy = -extent; dy <= extent; ++dy) {
                const int ty = y + dy;
                if (ty < 0 || ty >= h) continue;
                for (int dx = -extent; dx <= extent; ++dx) {
                    if (dx * dx + dy * dy > r2) continue;
                    const int tx = x + dx;
                    if (tx < 0 || tx >= w) continue;
                    const std::size_t ti = static_cast<std::size_t>(ty) * w + tx;
                    color[ti * 3] += wgt * lin[0];
                    color[ti * 3 + 1] += wgt * lin[1];
                    color[ti * 3 + 2] += wgt * lin[2];
                    weight[ti] += wgt;
                }
            }
        }
    }

    Frame out(w, h);
    for (std::size_t i = 0; i < weight.size(); ++i) {
        const double norm = weight[i] > 0.0 ? 1.0 / weight[i] : 0.0;
        for (int c = 0; c < 3; ++c) {
            out.pixels[i * 3 + c] = clip01(gamma_encode(color[i * 3 + c] * norm));
        }
    }
    return out;
}

double shutter_scalar(double base_fps, double target_fps) {
    if (!(base_fps > 0.0) || !(target_fps > 0.0)) {
        throw std::invalid_argument("shutter_scalar: frame rates must be positive");
    }
    return std::clamp(base_fps / target_fps, 0.5, 4.0);
}

Frame motion_blur_object(const Frame& frame, const ProxyMap& flow, double s) {
    if (flow.width != frame.width || flow.height != frame.height ||
        flow.channels != 2) {
        throw std::invalid_argument("motion_blur_object: frame/flow shape mismatch");
    }
    check_shutter_scalar(s);

    Frame out(frame.width, frame.height);
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            const double fu = flow.at(y, x, 0) * s;
            const double fv = flow.at(y, x, 1) * s;
            double acc[3] = {0.0, 0.0, 0.0};
            for (int i = 0; i < kBlurSamples; ++i) {
                const double frac = (i + 0.5) / kBlurSamples - 0.5;
                double rgb[3];
                sample_bilinear(frame, x + frac * fu, y + frac * fv, rgb);
                acc[0] += rgb[0];
                acc[1] += rgb[1];
                acc[2] += rgb[2];
            }
            for (int c = 0; c < 3; ++c) {
                out.at(y, x, c) = static_cast<float>(acc[c] / kBlurSamples);
            }
        }
    }
    return out;
}

std::vector<double> camera_blur_kernel(std::array<double, 2> mean_flow, double s) {
    const double mag = std::hypot(mean_flow[0], mean_flow[1]);
    double ux = 1.0, uy = 0.0;
    double sigma_along = kSigmaPerp;  // zero flow degenerates to isotropic
    if (mag > 1e-12) {
        ux = mean_flow[0] / mag;
        uy = mean_flow[1] / mag;
        sigma_along = std::min(s * mag / 2.0, kSigmaAlongCap);
    }
    const int half = kKernelSize / 2;
    std::vector<double> kernel(static_cast<std::size_t>(kKernelSize) * kKernelSize);
    double sum = 0.0;
    for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx) {
            const double along = dx * ux + dy * uy;
            const double perp = -dx * uy + dy * ux;
            const double v = std::exp(-0.5 * (along * along / (sigma_along * sigma_along) +
                                              perp * perp / (kSigmaPerp * kSigmaPerp)));
            kernel[static_cast<std::size_t>(dy + half) * kKernelSize + (dx + half)] = v;
            sum += v;
        }
    }
    for (double& v : kernel) v /= sum;
    return kernel;
}

Frame motion_blur_camera(const Frame& frame, std::array<double, 2> mean_flow,
                         double s) {
    check_shutter_scalar(s);
    const std::vector<double> kernel = camera_blur_kernel(mean_flow, s);
    const int half = kKernelSize / 2;

    Frame out(frame.width, frame.height);
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            double acc[3] = {0.0, 0.0, 0.0};
            for (int dy = -half; dy <= half; ++dy) {
                const int sy = std::clamp(y + dy, 0, frame.height - 1);
                const double* krow =
                    kernel.data() + static_cast<std::size_t>(dy + half) * kKernelSize;
                for (int dx = -half; dx <= half; ++dx) {
                    const int sx = std::clamp(x + dx, 0, frame.width - 1);
                    const double kv = krow[dx + half];
                    acc[0] += kv * frame.at(sy, sx, 0);
                    acc[1] += kv * frame.at(sy, sx, 1);
                    acc[2] += kv * frame.at(sy, sx, 2);
                }
            }
            for (int c = 0; c < 3; ++c) {
                out.at(y, x, c) = clip01(acc[c]);
            }
        }
    }
    return out;
}

}  // namespace camforge

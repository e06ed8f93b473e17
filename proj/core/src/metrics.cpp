#include "camforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace camforge {

namespace {

constexpr double kProxyEps = 1e-6;
constexpr double kSobelThreshold = 0.1;

std::vector<double> luma_image(const Frame& f) {
    std::vector<double> out(f.pixel_count());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = luma601(f.pixels[3 * i], f.pixels[3 * i + 1], f.pixels[3 * i + 2]);
    }
    return out;
}

// 11-tap Gaussian (sigma 1.5) normalized to unit sum.
std::vector<double> ssim_window() {
    std::vector<double> w(11);
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
        const double d = i - 5;
        w[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Separable horizontal+vertical Gaussian filtering; only values at
// centers with a fully interior window are meaningful.
std::vector<double> filter_separable(const std::vector<double>& img, int w, int h,
                                     const std::vector<double>& win) {
    std::vector<double> tmp(img.size(), 0.0), out(img.size(), 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 5; x < w - 5; ++x) {
            double acc = 0.0;
            for (int k = -5; k <= 5; ++k) {
                acc += win[k + 5] * img[static_cast<std::size_t>(y) * w + x + k];
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    for (int y = 5; y < h - 5; ++y) {
        for (int x = 5; x < w - 5; ++x) {
            double acc = 0.0;
            for (int k = -5; k <= 5; ++k) {
                acc += win[k + 5] * tmp[static_cast<std::size_t>(y + k) * w + x];
            }
            out[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    return out;
}

double cosine(const float* a, const float* b, int dim) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int i = 0; i < dim; ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    // sqrt(na*nb) keeps cos(x,x) == 1.0 exactly
    const double denom = std::sqrt(na * nb);
    return std::clamp(dot / denom, -1.0, 1.0);
}

double vec_norm2(const float* a, int dim) {
    double n = 0.0;
    for (int i = 0; i < dim; ++i) n += static_cast<double>(a[i]) * a[i];
    return n;
}

}  // namespace

double psnr(const Frame& a, const Frame& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("psnr: frame shape mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = static_cast<double>(a.pixels[i]) - b.pixels[i];
        acc += d * d;
    }
    const double mse = acc / static_cast<double>(a.pixels.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Frame& a, const Frame& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("ssim: frame shape mismatch");
    }
    if (a.width < 11 || a.height < 11) {
        throw std::invalid_argument("ssim: frames must be at least 11x11");
    }
    constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2, L = 1
    constexpr double kC2 = 0.03 * 0.03;

    const int w = a.width, h = a.height;
    const std::vector<double> win = ssim_window();
    const std::vector<double> la = luma_image(a);
    const std::vector<double> lb = luma_image(b);

    std::vector<double> la2(la.size()), lb2(la.size()), lab(la.size());
    for (std::size_t i = 0; i < la.size(); ++i) {
        la2[i] = la[i] * la[i];
        lb2[i] = lb[i] * lb[i];
        lab[i] = la[i] * lb[i];
    }
    const std::vector<double> mu_a = filter_separable(la, w, h, win);
    const std::vector<double> mu_b = filter_separable(lb, w, h, win);
    const std::vector<double> m_a2 = filter_separable(la2, w, h, win);
    const std::vector<double> m_b2 = filter_separable(lb2, w, h, win);
    const std::vector<double> m_ab = filter_separable(lab, w, h, win);

    double acc = 0.0;
    std::size_t count = 0;
    for (int y = 5; y < h - 5; ++y) {
        for (int x = 5; x < w - 5; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double va = m_a2[i] - mu_a[i] * mu_a[i];
            const double vb = m_b2[i] - mu_b[i] * mu_b[i];
            const double cov = m_ab[i] - mu_a[i] * mu_b[i];
            const double num = (2.0 * mu_a[i] * mu_b[i] + kC1) * (2.0 * cov + kC2);
            const double den =
                (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kC1) * (va + vb + kC2);
            acc += num / den;
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

WclipResult wclip(const EmbeddingSequence& gen, const EmbeddingSequence& ref,
                  int window) {
    if (gen.frames != ref.frames || gen.dim != ref.dim) {
        throw std::invalid_argument("wclip: sequence shape mismatch");
    }
    if (window < 1) {
        throw std::invalid_argument("wclip: window must be >= 1");
    }
    const int half = window / 2;

    WclipResult result;
    double acc = 0.0;
    int included = 0;
    for (int t = 0; t < gen.frames; ++t) {
        if (vec_norm2(gen.row(t), gen.dim) == 0.0) {
            ++result.skipped;
            continue;
        }
        bool any = false;
        double best = -1.0;
        for (int k = -half; k <= half; ++k) {
            const int j = t + k;
            if (j < 0 || j >= ref.frames) continue;  // out-of-bounds ignored
            if (vec_norm2(ref.row(j), ref.dim) == 0.0) {
                ++result.skipped;
                continue;
            }
            best = std::max(best, cosine(gen.row(t), ref.row(j), gen.dim));
            any = true;
        }
        if (!any) {
            ++result.skipped;
            continue;
        }
        acc += best;
        ++included;
    }
    result.value = included > 0 ? acc / included : 0.0;
    return result;
}

FidelityProxy proxy_signal(EffectKind effect, const std::vector<Frame>& frames) {
    if (frames.empty()) {
        throw std::invalid_argument("proxy_signal: empty frame sequence");
    }
    FidelityProxy proxy;
    proxy.effect = effect;
    proxy.signal.reserve(frames.size());

    for (const Frame& f : frames) {
        switch (effect) {
            case EffectKind::Exposure: {
                double acc = 0.0;
                for (std::size_t i = 0; i < f.pixel_count(); ++i) {
                    acc += luma601(f.pixels[3 * i], f.pixels[3 * i + 1],
                                   f.pixels[3 * i + 2]);
                }
                proxy.signal.push_back(acc / static_cast<double>(f.pixel_count()));
                break;
            }
            case EffectKind::Temperature: {
                double r = 0.0, b = 0.0;
                for (std::size_t i = 0; i < f.pixel_count(); ++i) {
                    r += f.pixels[3 * i];
                    b += f.pixels[3 * i + 2];
                }
                r /= static_cast<double>(f.pixel_count());
                b /= static_cast<double>(f.pixel_count());
                proxy.signal.push_back(r / std::max(b, kProxyEps));
                break;
            }
            case EffectKind::Zoom: {
                // Fraction of interior pixels whose Sobel magnitude exceeds
                // the threshold.
                const std::vector<double> luma = luma_image(f);
                const int w = f.width, h = f.height;
                std::size_t edges = 0, total = 0;
                for (int y = 1; y + 1 < h; ++y) {
                    for (int x = 1; x + 1 < w; ++x) {
                        const auto at = [&](int yy, int xx) {
                            return luma[static_cast<std::size_t>(yy) * w + xx];
                        };
                        const double gx = (at(y - 1, x + 1) + 2.0 * at(y, x + 1) +
                                           at(y + 1, x + 1)) -
                                          (at(y - 1, x - 1) + 2.0 * at(y, x - 1) +
                                           at(y + 1, x - 1));
                        const double gy = (at(y + 1, x - 1) + 2.0 * at(y + 1, x) +
                                           at(y + 1, x + 1)) -
                                          (at(y - 1, x - 1) + 2.0 * at(y - 1, x) +
                                           at(y - 1, x + 1));
                        if (std::sqrt(gx * gx + gy * gy) > kSobelThreshold) ++edges;
                        ++total;
                    }
                }
                proxy.signal.push_back(total ? static_cast<double>(edges) / total : 0.0);
                break;
            }
            case EffectKind::Bokeh: {
                // Inverse variance of the 4-neighbor Laplacian.
                const std::vector<double> luma = luma_image(f);
                const int w = f.width, h = f.height;
                double sum = 0.0, sum2 = 0.0;
                std::size_t total = 0;
                for (int y = 1; y + 1 < h; ++y) {
                    for (int x = 1; x + 1 < w; ++x) {
                        const std::size_t i = static_cast<std::size_t>(y) * w + x;
                        const double lap = luma[i - w] + luma[i + w] + luma[i - 1] +
                                           luma[i + 1] - 4.0 * luma[i];
                        sum += lap;
                        sum2 += lap * lap;
                        ++total;
                    }
                }
                const double mean = total ? sum / total : 0.0;
                const double var = total ? std::max(0.0, sum2 / total - mean * mean) : 0.0;
                proxy.signal.push_back(1.0 / (var + kProxyEps));
                break;
            }
            case EffectKind::Shutter:
            case EffectKind::Fisheye:
                throw std::invalid_argument(
                    std::string("proxy_signal: no proxy defined for effect '") +
                    effect_name(effect) + "'");
        }
    }
    return proxy;
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("pearson_r: length mismatch");
    }
    if (x.size() < 2) {
        throw std::invalid_argument("pearson_r: need at least 2 samples");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::domain_error("pearson_r: correlation undefined for constant input");
    }
    return sxy / std::sqrt(sxx * syy);
}

double fidelity_intensity(EffectKind effect, double level) {
    switch (effect) {
        case EffectKind::Temperature:
            return 1e6 / level;  // mired: gain curves are near-linear here
        case EffectKind::Zoom:
            return 25.0 / level;  // the renderer's actual scale factor
        default:
            return level;
    }
}

FidelityResult fidelity_sweep(
    EffectKind effect, int levels,
    const std::function<std::vector<Frame>(double)>& render_at) {
    if (levels < 2) {
        throw std::invalid_argument("fidelity_sweep: need at least 2 levels");
    }
    const ParamRange& range = param_range(effect);

    FidelityResult result;
    result.effect = effect;
    for (int i = 0; i < levels; ++i) {
        const double level =
            range.min[0] + (range.max[0] - range.min[0]) * i / (levels - 1);
        const std::vector<Frame> frames = render_at(level);
        const FidelityProxy proxy = proxy_signal(effect, frames);
        double mean = 0.0;
        for (double v : proxy.signal) mean += v;
        mean /= static_cast<double>(proxy.signal.size());
        result.levels.push_back(level);
        result.intensity.push_back(fidelity_intensity(effect, level));
        result.signal.push_back(mean);
    }
    result.r = pearson_r(result.intensity, result.signal);
    return result;
}

}  // namespace camforge

#pragma once

#include <functional>
#include <vector>

#include "camforge/frame.hpp"
#include "camforge/trajectory.hpp"

namespace camforge {

/// 10*log10(1/MSE) over all channels; +infinity for identical frames.
double psnr(const Frame& a, const Frame& b);

/// Mean local SSIM on BT.601 luma: 11x11 Gaussian window (sigma 1.5),
/// K1=0.01, K2=0.03, dynamic range 1. Requires min dimension >= 11.
double ssim(const Frame& a, const Frame& b);

struct WclipResult {
    double value = 0.0;
    int skipped = 0;  // zero-norm vectors excluded along the way
};

/// Windowed embedding similarity: mean over t of the max cosine between
/// gen[t] and ref[t+k] for k in [-window/2, window/2], skipping
/// out-of-bounds offsets. wCLIP-5 is window=5 (+-2).
WclipResult wclip(const EmbeddingSequence& gen, const EmbeddingSequence& ref,
                  int window);

/// Per-frame scalar fidelity signal.
struct FidelityProxy {
    EffectKind effect = EffectKind::Exposure;
    std::vector<double> signal;
};

/// Proxy signals: Exposure = mean luma; Temperature = mean(R)/max(mean(B),eps);
/// Zoom = fraction of pixels with Sobel magnitude > 0.1; Bokeh = inverse
/// variance of Laplacian. Shutter/Fisheye have no defined proxy.
FidelityProxy proxy_signal(EffectKind effect, const std::vector<Frame>& frames);

/// Pearson correlation; throws std::domain_error for constant inputs.
double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

/// Maps a raw parameter level to the effect's perceptual intensity axis
/// used by the fidelity correlation: Exposure EV as-is, Temperature in
/// mired (1e6/T), Zoom as scale factor 25/f, Bokeh K as-is.
double fidelity_intensity(EffectKind effect, double level);

struct FidelityResult {
    EffectKind effect = EffectKind::Exposure;
    std::vector<double> levels;     // raw parameter values
    std::vector<double> intensity;  // fidelity_intensity(levels)
    std::vector<double> signal;     // mean proxy signal per level
    double r = 0.0;
};

/// Sweeps the effect's control parameter across `levels` evenly-spaced
/// values, renders each level via `render_at` and correlates the measured
/// proxy signal against the requested intensity.
FidelityResult fidelity_sweep(
    EffectKind effect, int levels,
    const std::function<std::vector<Frame>(double)>& render_at);

}  // namespace camforge

#pragma once

#include <array>
#include <vector>

#include "camforge/frame.hpp"

namespace camforge {

/// Clip-level motion blur rendering mode, chosen once per clip.
enum class BlurMode { ObjectMotion, CameraMotion };

/// Min-max normalization of a 1-channel depth/disparity map to [0,1];
/// constant maps become all zeros. Non-finite input is a data error.
ProxyMap normalize_depth(const ProxyMap& raw);

/// Divides every flow component by the clip-wide maximum magnitude; an
/// all-zero clip is returned unchanged.
std::vector<ProxyMap> normalize_flow_global(const std::vector<ProxyMap>& clip);

/// Per-frame mean flow vector of a 2-channel field.
std::array<double, 2> flow_mean(const ProxyMap& flow);

/// Population standard deviation of per-pixel flow magnitudes.
double flow_magnitude_std(const ProxyMap& flow);

/// Object motion when the clip-mean of per-frame magnitude stds exceeds
/// 5.0 px (strict), camera motion otherwise.
BlurMode select_blur_mode(const std::vector<ProxyMap>& clip);

/// Depth-dependent defocus via classical additive scatter. Each source
/// pixel's linear color is spread uniformly over a disk of radius
/// max(|K*(d - d_focus)/10|, 0.5) px; accumulated color is divided by
/// accumulated weight, de-linearized and clipped. Scatter order is
/// row-major, so output is bit-deterministic.
Frame render_bokeh(const Frame& frame, const ProxyMap& depth, double strength_k,
                   double d_focus);

/// Shutter scalar s = clip(base_fps / target_fps, 0.5, 4.0).
double shutter_scalar(double base_fps, double target_fps);

/// Per-pixel motion blur: mean of 24 bilinear samples along the segment
/// spanning +-(s/2)*flow(p), sample offsets at ((i+0.5)/24 - 0.5).
Frame motion_blur_object(const Frame& frame, const ProxyMap& flow, double s);

/// Global motion blur: 33x33 direction-aligned Gaussian along mean_flow,
/// sigma_perp = 1.5 px, sigma_along = min(s*|mean_flow|/2, 8) px. Zero mean
/// flow degenerates to an isotropic sigma = 1.5 Gaussian.
Frame motion_blur_camera(const Frame& frame, std::array<double, 2> mean_flow,
                         double s);

/// The normalized 33x33 kernel used by motion_blur_camera (exposed for
/// verification).
std::vector<double> camera_blur_kernel(std::array<double, 2> mean_flow, double s);

}  // namespace camforge

#pragma once

#include "camforge/frame.hpp"

namespace camforge {

/// Normalized source coordinates in [-1,1] per axis, one (x,y) pair per
/// output pixel. [-1,1] spans the first..last pixel centers.
struct SampleGrid {
    int width = 0;
    int height = 0;
    std::vector<double> coords;  // height * width * 2, (x,y)

    SampleGrid() = default;
    SampleGrid(int w, int h)
        : width(w), height(h),
          coords(static_cast<std::size_t>(w) * h * 2, 0.0) {}

    double x(int row, int col) const {
        return coords[(static_cast<std::size_t>(row) * width + col) * 2];
    }
    double y(int row, int col) const {
        return coords[(static_cast<std::size_t>(row) * width + col) * 2 + 1];
    }
};

/// Exposure shift in EV stops: linearize (gamma 2.2), scale by 2^delta_ev,
/// clip to [0,1] (sensor saturation), re-encode. delta_ev = 0 is a
/// bit-exact identity.
Frame apply_exposure(const Frame& frame, double delta_ev);

struct RgbGains {
    double r = 1.0, g = 1.0, b = 1.0;
};

/// Kelvin-to-RGB gains from Tanner Helland's analytic curve, evaluated at
/// t = T/100 and normalized by 255. Valid for T in [3000,9000] K.
RgbGains kelvin_gains(double kelvin);

/// White-balance shift: per-channel multiply by kelvin_gains in the encoded
/// domain, clipped to [0,1].
Frame apply_temperature(const Frame& frame, double kelvin);

/// Inverse Unified Sphere Model warp grid for fisheye distortion strength
/// xi. Output coordinates are bounding-box-normalized to [-1,1].
SampleGrid fisheye_grid(int width, int height, double xi);

/// Catmull-Rom bicubic sampling of `frame` at `grid` coordinates.
/// Out-of-range coordinates clamp to the edge; output is clipped to [0,1].
Frame grid_sample_bicubic(const Frame& frame, const SampleGrid& grid);

/// Radial falloff: out = in * max(0, 1 - strength * r^2) with r normalized
/// to 1 at the frame corner.
Frame apply_vignette(const Frame& frame, double strength);

/// Zoom scale factor s = 25mm / focal_mm, in [0.25, 1].
double zoom_scale(double focal_mm);

struct RegionSize {
    int width = 0;
    int height = 0;
};

/// Source pixel extent of the centered sampling region at a zoom level:
/// floor(W*s) x floor(H*s).
RegionSize zoom_region_size(int src_width, int src_height, double focal_mm);

/// Affine center crop-and-resize in normalized coordinates: the sampling
/// region has half-extent s per axis and is bicubically resampled to the
/// output resolution (supersampling when the source is larger).
Frame zoom_crop(const Frame& source, double focal_mm, int out_width, int out_height);

}  // namespace camforge

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace camforge {

/// The six simulated camera effects.
enum class EffectKind { Bokeh, Exposure, Shutter, Temperature, Fisheye, Zoom };

/// Parameter dimensionality per effect (Bokeh carries blur strength K and
/// focus depth; every other effect is a single scalar).
int param_dim(EffectKind effect);

/// Physical parameter ranges, one min/max pair per dimension.
///   Bokeh:       K in [0,25], focus in [0,1]
///   Exposure:    EV in [-3,3] stops
///   Shutter:     target frame rate in [5,50] FPS
///   Temperature: [3000,9000] K
///   Fisheye:     xi in [0.2,1.4] (barrel)
///   Zoom:        focal length in [25,100] mm
struct ParamRange {
    std::vector<double> min;
    std::vector<double> max;
    double span(int d) const { return max[d] - min[d]; }
};

const ParamRange& param_range(EffectKind effect);

const char* effect_name(EffectKind effect);
/// Case-insensitive lookup; throws std::invalid_argument on unknown names.
EffectKind effect_from_name(std::string_view name);

/// Per-frame absolute parameter values, frames x dim row-major, clamped to
/// the effect's ParamRange.
struct Trajectory {
    EffectKind effect = EffectKind::Exposure;
    int frames = 0;
    std::int64_t seed = 0;
    std::vector<double> values;

    double value(int t, int d) const {
        return values[static_cast<std::size_t>(t) * param_dim(effect) + d];
    }
    double& value(int t, int d) {
        return values[static_cast<std::size_t>(t) * param_dim(effect) + d];
    }
};

/// Relative controls anchored at frame 1: first row exactly zero, every
/// entry dimensionless in [-1,1].
struct DeltaTrajectory {
    EffectKind effect = EffectKind::Exposure;
    int frames = 0;
    std::vector<double> deltas;

    double value(int t, int d) const {
        return deltas[static_cast<std::size_t>(t) * param_dim(effect) + d];
    }
};

/// Samples a smooth random trajectory: a natural cubic spline through a
/// random start value, 1-3 interior anchors at random times and a random
/// end value (all uniform in range), evaluated at `frames` uniform time
/// points and clamped to the physical range. Identical (effect, frames,
/// seed) triples produce bit-identical output on every platform.
Trajectory gen_trajectory(EffectKind effect, int frames, std::int64_t seed);

/// Delta-parameterization: deltas[t] = (values[t] - values[0]) / range span.
DeltaTrajectory to_delta(const Trajectory& traj);

/// Linear map of every dimension to [0,1]; exact 0/1 at the range endpoints.
std::vector<double> normalize01(const Trajectory& traj);

/// Centered length-5 box filter. At the boundaries the window truncates to
/// the available samples and divides by the actual count.
std::vector<double> smooth_box5(const std::vector<double>& series);

/// Column-wise variant for a length-n series of dim-vectors (row-major).
std::vector<double> smooth_box5(const std::vector<double>& series, int dim);

/// JSON sidecar writer/reader. Round-trips trajectories exactly; Fisheye
/// sidecars carry the reserved constant fields lensmode=0 and zoom=0 next
/// to the active xi values.
std::string serialize_trajectory(const Trajectory& traj,
                                 const DeltaTrajectory* delta = nullptr);
Trajectory parse_trajectory(const std::string& text);

}  // namespace camforge

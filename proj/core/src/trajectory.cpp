#include "camforge/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "camforge/rng.hpp"
#include "nlohmann/json.hpp"

namespace camforge {

namespace {

using json = nlohmann::ordered_json;

const ParamRange kRanges[] = {
    /* Bokeh       */ {{0.0, 0.0}, {25.0, 1.0}},
    /* Exposure    */ {{-3.0}, {3.0}},
    /* Shutter     */ {{5.0}, {50.0}},
    /* Temperature */ {{3000.0}, {9000.0}},
    /* Fisheye     */ {{0.2}, {1.4}},
    /* Zoom        */ {{25.0}, {100.0}},
};

const char* kNames[] = {"bokeh", "exposure", "shutter",
                        "temperature", "fisheye", "zoom"};

// Natural cubic spline through (x_i, y_i) with strictly increasing knots.
// Second derivatives solved with the Thomas algorithm, zero at both ends.
class CubicSpline {
public:
    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {
        const std::size_t n = xs_.size();
        m_.assign(n, 0.0);
        if (n < 3) return;  // two knots: linear segment, m stays zero
        std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = xs_[i] - xs_[i - 1];
            const double h1 = xs_[i + 1] - xs_[i];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            sup[i] = h1;
            rhs[i] = 6.0 * ((ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0);
        }
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = (rhs[i] - sup[i] * m_[i + 1]) / diag[i];
            if (i == 1) break;
        }
    }

    double eval(double x) const {
        const std::size_t n = xs_.size();
        if (x <= xs_.front()) return ys_.front();
        if (x >= xs_.back()) return ys_.back();
        std::size_t lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (x >= xs_[mid]) lo = mid; else hi = mid;
        }
        const double h = xs_[hi] - xs_[lo];
        const double a = (xs_[hi] - x) / h;
        const double b = (x - xs_[lo]) / h;
        return a * ys_[lo] + b * ys_[hi] +
               ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * (h * h) / 6.0;
    }

private:
    std::vector<double> xs_, ys_;
    std::vector<double> m_;  // second derivatives at knots
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

[[noreturn]] void parse_fail(const std::string& field, const std::string& why) {
    throw std::runtime_error("trajectory sidecar: field '" + field + "' " + why);
}

}  // namespace

int param_dim(EffectKind effect) {
    return effect == EffectKind::Bokeh ? 2 : 1;
}

const ParamRange& param_range(EffectKind effect) {
    return kRanges[static_cast<int>(effect)];
}

const char* effect_name(EffectKind effect) {
    return kNames[static_cast<int>(effect)];
}

EffectKind effect_from_name(std::string_view name) {
    const std::string n = lower(name);
    for (int i = 0; i < 6; ++i) {
        if (n == kNames[i]) return static_cast<EffectKind>(i);
    }
    throw std::invalid_argument("unknown effect name: " + std::string(name));
}

Trajectory gen_trajectory(EffectKind effect, int frames, std::int64_t seed) {
    if (frames < 2) {
        throw std::invalid_argument("gen_trajectory: frames must be >= 2");
    }
    const ParamRange& range = param_range(effect);
    const int dim = param_dim(effect);

    Pcg32 rng(derive_stream(static_cast<std::uint64_t>(seed),
                            static_cast<std::uint64_t>(effect)));

    // Draw order is frozen: anchor count, anchor times, then per-dimension
    // values (start, interiors in time order, end).
    const int n_anchors = 1 + static_cast<int>(rng.next_u32() % 3u);
    std::vector<double> times(static_cast<std::size_t>(n_anchors));
    for (double& t : times) t = rng.next_open01();
    std::sort(times.begin(), times.end());
    // Guard against coincident knots (vanishingly rare but would break the
    // tridiagonal solve).
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1] + 1e-12) times[i] = times[i - 1] + 1e-12;
    }

    std::vector<double> knot_times;
    knot_times.push_back(0.0);
    knot_times.insert(knot_times.end(), times.begin(), times.end());
    knot_times.push_back(1.0);

    Trajectory traj;
    traj.effect = effect;
    traj.frames = frames;
    traj.seed = seed;
    traj.values.assign(static_cast<std::size_t>(frames) * dim, 0.0);

    for (int d = 0; d < dim; ++d) {
        std::vector<double> knot_values;
        knot_values.reserve(knot_times.size());
        knot_values.push_back(rng.uniform(range.min[d], range.max[d]));
        for (int a = 0; a < n_anchors; ++a) {
            knot_values.push_back(rng.uniform(range.min[d], range.max[d]));
        }
        knot_values.push_back(rng.uniform(range.min[d], range.max[d]));

        CubicSpline spline(knot_times, std::move(knot_values));
        for (int t = 0; t < frames; ++t) {
            const double u = static_cast<double>(t) / (frames - 1);
            traj.value(t, d) = std::clamp(spline.eval(u), range.min[d], range.max[d]);
        }
    }
    return traj;
}

DeltaTrajectory to_delta(const Trajectory& traj) {
    const ParamRange& range = param_range(traj.effect);
    const int dim = param_dim(traj.effect);
    DeltaTrajectory delta;
    delta.effect = traj.effect;
    delta.frames = traj.frames;
    delta.deltas.assign(traj.values.size(), 0.0);
    for (int t = 0; t < traj.frames; ++t) {
        for (int d = 0; d < dim; ++d) {
            delta.deltas[static_cast<std::size_t>(t) * dim + d] =
                (traj.value(t, d) - traj.value(0, d)) / range.span(d);
        }
    }
    return delta;
}

std::vector<double> normalize01(const Trajectory& traj) {
    const ParamRange& range = param_range(traj.effect);
    const int dim = param_dim(traj.effect);
    std::vector<double> out(traj.values.size());
    for (int t = 0; t < traj.frames; ++t) {
        for (int d = 0; d < dim; ++d) {
            out[static_cast<std::size_t>(t) * dim + d] =
                (traj.value(t, d) - range.min[d]) / range.span(d);
        }
    }
    return out;
}

std::vector<double> smooth_box5(const std::vector<double>& series, int dim) {
    const int n = static_cast<int>(series.size()) / dim;
    std::vector<double> out(series.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - 2);
        const int hi = std::min(n - 1, i + 2);
        const double inv = 1.0 / (hi - lo + 1);
        for (int d = 0; d < dim; ++d) {
            double acc = 0.0;
            for (int j = lo; j <= hi; ++j) {
                acc += series[static_cast<std::size_t>(j) * dim + d];
            }
            out[static_cast<std::size_t>(i) * dim + d] = acc * inv;
        }
    }
    return out;
}

std::vector<double> smooth_box5(const std::vector<double>& series) {
    return smooth_box5(series, 1);
}

std::string serialize_trajectory(const Trajectory& traj, const DeltaTrajectory* delta) {
    const ParamRange& range = param_range(traj.effect);
    const int dim = param_dim(traj.effect);

    json j;
    j["effect"] = effect_name(traj.effect);
    j["frames"] = traj.frames;
    j["seed"] = traj.seed;
    json values = json::array();
    for (int t = 0; t < traj.frames; ++t) {
        json row = json::array();
        for (int d = 0; d < dim; ++d) row.push_back(traj.value(t, d));
        values.push_back(std::move(row));
    }
    j["values"] = std::move(values);
    j["range"] = {{"min", range.min}, {"max", range.max}};
    if (traj.effect == EffectKind::Fisheye) {
        // Reserved constant fields of the 3-dim fisheye encoding; only the
        // distortion scalar xi is active.
        j["lensmode"] = 0;
        j["zoom"] = 0;
    }
    if (delta != nullptr) {
        json rows = json::array();
        for (int t = 0; t < delta->frames; ++t) {
            json row = json::array();
            for (int d = 0; d < dim; ++d) row.push_back(delta->value(t, d));
            rows.push_back(std::move(row));
        }
        j["delta"] = std::move(rows);
    }
    return j.dump(2) + "\n";
}

Trajectory parse_trajectory(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("trajectory sidecar: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) parse_fail("<root>", "must be a JSON object");
    if (!j.contains("effect")) parse_fail("effect", "is missing");
    if (!j["effect"].is_string()) parse_fail("effect", "must be a string");
    if (!j.contains("frames")) parse_fail("frames", "is missing");
    if (!j["frames"].is_number_integer()) parse_fail("frames", "must be an integer");
    if (!j.contains("seed")) parse_fail("seed", "is missing");
    if (!j.contains("values")) parse_fail("values", "is missing");
    if (!j["values"].is_array()) parse_fail("values", "must be an array");

    Trajectory traj;
    try {
        traj.effect = effect_from_name(j["effect"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        parse_fail("effect", e.what());
    }
    traj.frames = j["frames"].get<int>();
    if (traj.frames < 2) parse_fail("frames", "must be >= 2");
    traj.seed = j["seed"].get<std::int64_t>();

    const int dim = param_dim(traj.effect);
    const ParamRange& range = param_range(traj.effect);
    const auto& values = j["values"];
    if (static_cast<int>(values.size()) != traj.frames) {
        parse_fail("values", "row count does not match frames");
    }
    traj.values.reserve(static_cast<std::size_t>(traj.frames) * dim);
    for (const auto& row : values) {
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            parse_fail("values", "rows must have one entry per parameter dimension");
        }
        for (int d = 0; d < dim; ++d) {
            if (!row[d].is_number()) parse_fail("values", "entries must be numbers");
            traj.values.push_back(
                std::clamp(row[d].get<double>(), range.min[d], range.max[d]));
        }
    }
    return traj;
}

}  // namespace camforge

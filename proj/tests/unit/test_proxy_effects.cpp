#include <stdexcept>
#include <cmath>
#include <limits>

#include "camforge/proxy_effects.hpp"
#include "doctest.h"
#include "test_scenes.hpp"

using namespace camforge;
using camforge::testing::constant_frame;
using camforge::testing::make_test_depth;
using camforge::testing::make_test_scene;
using camforge::testing::max_abs_diff;

namespace {

double linear_energy(const Frame& f) {
    double acc = 0.0;
    for (float v : f.pixels) acc += linearize(v);
    return acc;
}

ProxyMap uniform_depth(int w, int h, float value) {
    ProxyMap d(w, h, 1);
    for (float& v : d.data) v = value;
    return d;
}

ProxyMap uniform_flow(int w, int h, float u, float v) {
    ProxyMap f(w, h, 2);
    for (std::size_t i = 0; i < f.data.size(); i += 2) {
        f.data[i] = u;
        f.data[i + 1] = v;
    }
    return f;
}

}  // namespace

TEST_CASE("normalize_depth affine map") {
    ProxyMap raw(3, 1, 1);
    raw.data = {2.0f, 4.0f, 6.0f};
    const ProxyMap out = normalize_depth(raw);
    CHECK(out.data[0] == 0.0f);
    CHECK(out.data[1] == doctest::Approx(0.5));
    CHECK(out.data[2] == 1.0f);
}

TEST_CASE("normalize_depth constant map becomes zeros") {
    const ProxyMap out = normalize_depth(uniform_depth(4, 3, 7.5f));
    for (float v : out.data) CHECK(v == 0.0f);
}

TEST_CASE("normalize_depth identity on already-normalized map") {
    ProxyMap raw(2, 2, 1);
    raw.data = {0.0f, 0.25f, 0.75f, 1.0f};
    CHECK(normalize_depth(raw).data == raw.data);
}

TEST_CASE("normalize_depth rejects non-finite input") {
    ProxyMap raw(2, 1, 1);
    raw.data = {0.0f, std::numeric_limits<float>::quiet_NaN()};
    CHECK_THROWS_AS(normalize_depth(raw), std::runtime_error);
}

TEST_CASE("normalize_flow_global scales by the clip max magnitude") {
    std::vector<ProxyMap> clip = {uniform_flow(2, 2, 6.0f, 8.0f),
                                  uniform_flow(2, 2, 1.0f, 0.0f)};
    const auto out = normalize_flow_global(clip);
    CHECK(out[0].data[0] == doctest::Approx(0.6));
    CHECK(out[0].data[1] == doctest::Approx(0.8));
    CHECK(out[1].data[0] == doctest::Approx(0.1));
    // post-normalization max magnitude is exactly 1
    double max_mag = 0.0;
    for (const auto& f : out) {
        for (std::size_t i = 0; i < f.data.size(); i += 2) {
            max_mag = std::max(
                max_mag, std::hypot(static_cast<double>(f.data[i]),
                                    static_cast<double>(f.data[i + 1])));
        }
    }
    CHECK(max_mag == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("normalize_flow_global zero clip is unchanged") {
    std::vector<ProxyMap> clip = {uniform_flow(3, 3, 0.0f, 0.0f)};
    const auto out = normalize_flow_global(clip);
    for (float v : out[0].data) CHECK(v == 0.0f);
}

TEST_CASE("render_bokeh K=0 is identity within tolerance") {
    const Frame f = make_test_scene(24, 18);
    const Frame out = render_bokeh(f, make_test_depth(24, 18), 0.0, 0.3);
    CHECK(max_abs_diff(out, f) < 1e-6);
}

TEST_CASE("render_bokeh in-focus plane is identity") {
    const Frame f = make_test_scene(20, 14);
    const Frame out = render_bokeh(f, uniform_depth(20, 14, 0.4f), 25.0, 0.4);
    CHECK(max_abs_diff(out, f) < 1e-6);
}

TEST_CASE("render_bokeh single white pixel spreads over the defocus disk") {
    const int n = 21;
    Frame f(n, n, 0.0f);
    for (int c = 0; c < 3; ++c) f.at(10, 10, c) = 1.0f;
    const Frame out = render_bokeh(f, uniform_depth(n, n, 1.0f), 25.0, 0.0);

    // oracle: disk radius 2.5 px rasterized explicitly
    int disk_count = 0;
    for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
            if (dx * dx + dy * dy <= 2.5 * 2.5) ++disk_count;
        }
    }
    CHECK(disk_count == 21);
    // the white pixel's unit linear energy is preserved
    CHECK(linear_energy(out) / 3.0 == doctest::Approx(1.0).epsilon(1e-4));
    // spread pixel at radius 2: uniform weight 1/21 (weights sum to 1 here)
    CHECK(linearize(out.at(10, 12, 0)) == doctest::Approx(1.0 / 21).epsilon(1e-3));
}

TEST_CASE("render_bokeh conserves interior linear energy") {
    const int w = 48, h = 36;
    const Frame f = make_test_scene(w, h);
    const Frame out = render_bokeh(f, make_test_depth(w, h, 0.5, 4), 25.0, 0.5);
    CHECK(linear_energy(out) ==
          doctest::Approx(linear_energy(f)).epsilon(1e-3));
}

TEST_CASE("render_bokeh validates inputs") {
    const Frame f = make_test_scene(8, 8);
    CHECK_THROWS_AS(render_bokeh(f, uniform_depth(9, 8, 0.5f), 5.0, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(render_bokeh(f, uniform_depth(8, 8, 0.5f), 26.0, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(render_bokeh(f, uniform_depth(8, 8, 0.5f), 5.0, 1.5),
                    std::invalid_argument);
}

TEST_CASE("shutter_scalar clipping") {
    CHECK(shutter_scalar(24.0, 24.0) == doctest::Approx(1.0));
    CHECK(shutter_scalar(24.0, 5.0) == doctest::Approx(4.0));   // 4.8 clipped
    CHECK(shutter_scalar(24.0, 48.0) == doctest::Approx(0.5));  // exact bound
    CHECK_THROWS_AS(shutter_scalar(0.0, 24.0), std::invalid_argument);
    CHECK_THROWS_AS(shutter_scalar(24.0, -1.0), std::invalid_argument);
}

TEST_CASE("select_blur_mode thresholds") {
    SUBCASE("uniform flow has zero std -> camera motion") {
        std::vector<ProxyMap> clip = {uniform_flow(4, 4, 3.0f, 4.0f)};
        CHECK(select_blur_mode(clip) == BlurMode::CameraMotion);
    }
    SUBCASE("bimodal 0/20 magnitudes -> std 10 -> object motion") {
        ProxyMap flow(2, 1, 2);
        flow.data = {0.0f, 0.0f, 20.0f, 0.0f};
        std::vector<ProxyMap> clip = {flow};
        CHECK(flow_magnitude_std(flow) == doctest::Approx(10.0));
        CHECK(select_blur_mode(clip) == BlurMode::ObjectMotion);
    }
    SUBCASE("std exactly 5 stays camera motion (strict >)") {
        ProxyMap flow(2, 1, 2);
        flow.data = {0.0f, 0.0f, 10.0f, 0.0f};
        std::vector<ProxyMap> clip = {flow};
        CHECK(flow_magnitude_std(flow) == doctest::Approx(5.0));
        CHECK(select_blur_mode(clip) == BlurMode::CameraMotion);
    }
}

TEST_CASE("select_blur_mode is invariant under frame reordering") {
    ProxyMap a = uniform_flow(4, 4, 1.0f, 0.0f);
    ProxyMap b(4, 4, 2);
    for (std::size_t i = 0; i < b.data.size(); i += 4) {
        b.data[i] = 12.0f;  // alternate pixels at 12 and 0
    }
    std::vector<ProxyMap> fwd = {a, b};
    std::vector<ProxyMap> rev = {b, a};
    CHECK(select_blur_mode(fwd) == select_blur_mode(rev));
}

TEST_CASE("motion_blur_object zero flow is bit-exact identity") {
    const Frame f = make_test_scene(20, 16);
    const Frame out = motion_blur_object(f, uniform_flow(20, 16, 0.0f, 0.0f), 1.0);
    CHECK(out.pixels == f.pixels);
}

TEST_CASE("motion_blur_object constant frame is unchanged") {
    const Frame f = constant_frame(16, 16, 0.3f, 0.6f, 0.9f);
    const Frame out =
        motion_blur_object(f, camforge::testing::make_test_flow(16, 16, 6.0), 2.0);
    CHECK(max_abs_diff(out, f) < 1e-6);
}

TEST_CASE("motion_blur_object smears a step edge into a ramp") {
    const int w = 64, h = 8;
    Frame step(w, h, 0.0f);
    for (int y = 0; y < h; ++y) {
        for (int x = w / 2; x < w; ++x) {
            for (int c = 0; c < 3; ++c) step.at(y, x, c) = 1.0f;
        }
    }
    const double s = 2.0, mag = 12.0;  // blur extent s*mag = 24 px
    const Frame out = motion_blur_object(step, uniform_flow(w, h, mag, 0.0f), s);

    // oracle: dense numerical line integral over the hard step profile
    const auto oracle_at = [&](int x) {
        const int samples = 20000;
        double acc = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double frac = (i + 0.5) / samples - 0.5;
            const double sx = x + frac * s * mag;
            acc += sx >= w / 2 - 0.5 ? 1.0 : 0.0;  // half-pixel edge transition
        }
        return acc / samples;
    };
    for (int x = w / 2 - 8; x <= w / 2 + 8; ++x) {
        CHECK(std::fabs(out.at(4, x, 0) - oracle_at(x)) < 0.03);
    }
    // ramp structure: monotone, ~0.5 at the edge, full width ~ s*mag
    const int edge = w / 2;
    for (int x = edge - 11; x < edge + 11; ++x) {
        CHECK(out.at(4, x + 1, 0) >= out.at(4, x, 0) - 1e-6f);
    }
    CHECK(std::fabs(out.at(4, edge, 0) - 0.5) < 0.05);
    CHECK(out.at(4, edge - 14, 0) == doctest::Approx(0.0));
    CHECK(out.at(4, edge + 13, 0) == doctest::Approx(1.0));
    // output range never exceeds the input range
    for (float v : out.pixels) {
        CHECK(v >= 0.0f);
        CHECK(v <= 1.0f);
    }
}

TEST_CASE("motion_blur_object validates shape and scalar") {
    const Frame f = make_test_scene(8, 8);
    CHECK_THROWS_AS(motion_blur_object(f, uniform_flow(7, 8, 0, 0), 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(motion_blur_object(f, uniform_flow(8, 8, 0, 0), 4.5),
                    std::invalid_argument);
}

TEST_CASE("camera_blur_kernel sums to one") {
    for (auto flow : {std::array<double, 2>{0.0, 0.0}, {3.0, 4.0}, {40.0, 0.0}}) {
        const std::vector<double> k = camera_blur_kernel(flow, 2.0);
        double sum = 0.0;
        for (double v : k) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(k.size() == 33u * 33u);
    }
}

TEST_CASE("motion_blur_camera zero flow is an isotropic 1.5 px Gaussian") {
    const std::vector<double> k = camera_blur_kernel({0.0, 0.0}, 1.0);
    // isotropy: kernel value depends only on radius
    const auto at = [&](int dy, int dx) { return k[(dy + 16) * 33 + (dx + 16)]; };
    CHECK(at(0, 3) == doctest::Approx(at(3, 0)).epsilon(1e-12));
    CHECK(at(2, 1) == doctest::Approx(at(1, 2)).epsilon(1e-12));
    // matches exp(-r^2 / (2*1.5^2)) up to normalization
    CHECK(at(0, 3) / at(0, 0) == doctest::Approx(std::exp(-9.0 / 4.5)).epsilon(1e-9));
}

TEST_CASE("motion_blur_camera impulse recovers the kernel") {
    const int n = 65;
    Frame f(n, n, 0.0f);
    for (int c = 0; c < 3; ++c) f.at(n / 2, n / 2, c) = 1.0f;
    const std::array<double, 2> flow = {8.0, 6.0};
    const Frame out = motion_blur_camera(f, flow, 2.0);
    const std::vector<double> k = camera_blur_kernel(flow, 2.0);
    double sum = 0.0;
    for (int dy = -16; dy <= 16; ++dy) {
        for (int dx = -16; dx <= 16; ++dx) {
            const double got = out.at(n / 2 + dy, n / 2 + dx, 0);
            // convolution flips the kernel; Gaussians are symmetric
            CHECK(got == doctest::Approx(k[(dy + 16) * 33 + (dx + 16)]).epsilon(1e-5));
            sum += got;
        }
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("motion_blur_camera constant frame is unchanged") {
    const Frame f = constant_frame(40, 40, 0.42f, 0.1f, 0.9f);
    const Frame out = motion_blur_camera(f, {5.0, -2.0}, 3.0);
    CHECK(max_abs_diff(out, f) < 1e-6);
}

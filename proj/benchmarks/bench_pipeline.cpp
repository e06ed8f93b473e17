// Microbenchmarks for the pixel pipelines at the production 480x832
// resolution.

#include <benchmark/benchmark.h>

#include "camforge/metrics.hpp"
#include "camforge/pixel_effects.hpp"
#include "camforge/proxy_effects.hpp"
#include "camforge/rng.hpp"
#include "camforge/trajectory.hpp"

namespace {

constexpr int kWidth = 832;
constexpr int kHeight = 480;

camforge::Frame bench_frame() {
    camforge::Frame f(kWidth, kHeight);
    camforge::Pcg32 rng(17);
    for (float& v : f.pixels) v = static_cast<float>(rng.next_double());
    return f;
}

camforge::ProxyMap bench_depth() {
    camforge::ProxyMap d(kWidth, kHeight, 1);
    camforge::Pcg32 rng(23);
    for (float& v : d.data) v = static_cast<float>(rng.next_double());
    return d;
}

camforge::ProxyMap bench_flow(double amplitude) {
    camforge::ProxyMap f(kWidth, kHeight, 2);
    camforge::Pcg32 rng(29);
    for (float& v : f.data) {
        v = static_cast<float>(amplitude * (rng.next_double() * 2.0 - 1.0));
    }
    return f;
}

void BM_ApplyExposure(benchmark::State& state) {
    const camforge::Frame f = bench_frame();
    for (auto _ : state) {
        benchmark::DoNotOptimize(camforge::apply_exposure(f, 1.5));
    }
}
BENCHMARK(BM_ApplyExposure)->Unit(benchmark::kMillisecond);

void BM_ApplyTemperature(benchmark::State& state) {
    const camforge::Frame f = bench_frame();
    for (auto _ : state) {
        benchmark::DoNotOptimize(camforge::apply_temperature(f, 4200.0));
    }
}
BENCHMARK(BM_ApplyTemperature)->Unit(benchmark::kMillisecond);

void BM_FisheyeGrid(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(camforge::fisheye_grid(kWidth, kHeight, 1.1));
    }
}
BENCHMARK(BM_FisheyeGrid)->Unit(benchmark::kMillisecond);

void BM_FisheyeWarp(benchmark::State& state) {
    const camforge::Frame f = bench_frame();
    const camforge::SampleGrid grid = camforge::fisheye_grid(kWidth, kHeight, 1.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(camforge::grid_sample_bicubic(f, grid));
    }
}
BENCHMARK(BM_FisheyeWarp)->Unit(benchmark::kMillisecond);

void BM_ZoomCrop(benchmark::State& state) {
    const camforge::Frame f = bench_frame();
    const double focal = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(camforge::zoom_crop(f, focal, kWidth, kHeight));
    }
}
BENCHMARK(BM_ZoomCrop)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_RenderBokeh(benchmark::State& state) {
    const camforge::Frame f = bench_frame();
    const camforge::ProxyMap depth = bench_depth();
    const double k = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(camforge::render_bokeh(f, depth, k, 0.5));
    }
}
BENCHMARK(BM_RenderBokeh)->Arg(5)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_MotionBlurObject(benchmark::State& state) {
    const camforge::Frame f = bench_frame();
    const camforge::ProxyMap flow = bench_flow(8.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(camforge::motion_blur_object(f, flow, 2.0));
    }
}
BENCHMARK(BM_MotionBlurObject)->Unit(benchmark::kMillisecond);

void BM_MotionBlurCamera(benchmark::State& state) {
    const camforge::Frame f = bench_frame();
    for (auto _ : state) {
        benchmark::DoNotOptimize(camforge::motion_blur_camera(f, {6.0, 2.0}, 2.0));
    }
}
BENCHMARK(BM_MotionBlurCamera)->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State& state) {
    const camforge::Frame a = bench_frame();
    camforge::Frame b = a;
    b.pixels[0] = 0.5f;
    for (auto _ : state) {
        benchmark::DoNotOptimize(camforge::ssim(a, b));
    }
}
BENCHMARK(BM_Ssim)->Unit(benchmark::kMillisecond);

void BM_GenTrajectory(benchmark::State& state) {
    std::int64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            camforge::gen_trajectory(camforge::EffectKind::Bokeh, 81, seed++));
    }
}
BENCHMARK(BM_GenTrajectory);

}  // namespace

BENCHMARK_MAIN();

#include "camforge/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "camforge/media_io.hpp"
#include "camforge/pixel_effects.hpp"
#include "camforge/rng.hpp"
#include "nlohmann/json.hpp"

namespace camforge {

namespace {

using json = nlohmann::ordered_json;

const ProxyMap& map_for_frame(const std::vector<ProxyMap>& maps, int t) {
    // Flow clips commonly carry frames-1 fields (consecutive pairs); the
    // last frame reuses the final one.
    return maps[std::min<std::size_t>(t, maps.size() - 1)];
}

void require_maps(const std::vector<ProxyMap>& maps, const char* name,
                  EffectKind effect) {
    if (maps.empty()) {
        throw std::runtime_error(std::string("render_clip: effect '") +
                                 effect_name(effect) + "' requires proxy maps: " +
                                 name);
    }
}

std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir,
                                                const std::string& ext,
                                                const std::string& prefix = "") {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) return files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (entry.path().extension() == ext &&
            (prefix.empty() || name.rfind(prefix, 0) == 0)) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string frame_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%04d.ppm", index);
    return buf;
}

}  // namespace

void parallel_for_index(int count, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) {
        workers.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

std::vector<Frame> render_clip(const SceneClip& scene, const Trajectory& traj,
                               const RenderOptions& opts) {
    if (scene.frames.empty()) {
        throw std::invalid_argument("render_clip: scene has no frames");
    }
    if (static_cast<int>(scene.frames.size()) != traj.frames) {
        throw std::invalid_argument("render_clip: trajectory/scene frame count mismatch");
    }
    const int frames = traj.frames;
    std::vector<Frame> out(static_cast<std::size_t>(frames));

    switch (traj.effect) {
        case EffectKind::Exposure: {
            parallel_for_index(frames, opts.jobs, [&](int t) {
                out[t] = apply_exposure(scene.frames[t], traj.value(t, 0));
            });
            break;
        }
        case EffectKind::Temperature: {
            parallel_for_index(frames, opts.jobs, [&](int t) {
                out[t] = apply_temperature(scene.frames[t], traj.value(t, 0));
            });
            break;
        }
        case EffectKind::Zoom: {
            parallel_for_index(frames, opts.jobs, [&](int t) {
                const Frame& src = scene.frames[t];
                out[t] = zoom_crop(src, traj.value(t, 0), src.width, src.height);
            });
            break;
        }
        case EffectKind::Fisheye: {
            parallel_for_index(frames, opts.jobs, [&](int t) {
                const Frame& src = scene.frames[t];
                const SampleGrid grid =
                    fisheye_grid(src.width, src.height, traj.value(t, 0));
                out[t] = apply_vignette(grid_sample_bicubic(src, grid),
                                        opts.vignette_strength);
            });
            break;
        }
        case EffectKind::Bokeh: {
            require_maps(scene.depth, "depth", traj.effect);
            parallel_for_index(frames, opts.jobs, [&](int t) {
                const ProxyMap depth = normalize_depth(map_for_frame(scene.depth, t));
                out[t] = render_bokeh(scene.frames[t], depth, traj.value(t, 0),
                                      traj.value(t, 1));
            });
            break;
        }
        case EffectKind::Shutter: {
            require_maps(scene.flow, "flow", traj.effect);
            // Per-frame shutter scalars and mean flow are smoothed over time
            // before use; the blur mode is committed once for the clip.
            std::vector<double> scalars(static_cast<std::size_t>(frames));
            for (int t = 0; t < frames; ++t) {
                scalars[t] = shutter_scalar(opts.base_fps, traj.value(t, 0));
            }
            scalars = smooth_box5(scalars);  // stays within [0.5, 4.0]

            const BlurMode mode = select_blur_mode(scene.flow);
            if (mode == BlurMode::ObjectMotion) {
                parallel_for_index(frames, opts.jobs, [&](int t) {
                    out[t] = motion_blur_object(scene.frames[t],
                                                map_for_frame(scene.flow, t),
                                                scalars[t]);
                });
            } else {
                std::vector<double> means(static_cast<std::size_t>(frames) * 2);
                for (int t = 0; t < frames; ++t) {
                    const auto m = flow_mean(map_for_frame(scene.flow, t));
                    means[2 * t] = m[0];
                    means[2 * t + 1] = m[1];
                }
                means = smooth_box5(means, 2);
                parallel_for_index(frames, opts.jobs, [&](int t) {
                    out[t] = motion_blur_camera(scene.frames[t],
                                                {means[2 * t], means[2 * t + 1]},
                                                scalars[t]);
                });
            }
            break;
        }
    }
    return out;
}

Triplet build_triplet(const SceneClip& scene_a, const SceneClip& scene_b,
                      EffectKind effect, std::int64_t seed,
                      const RenderOptions& opts) {
    if (scene_a.frames.size() != scene_b.frames.size()) {
        throw std::invalid_argument("build_triplet: scenes must have equal frame counts");
    }
    const int frames = static_cast<int>(scene_a.frames.size());

    const Trajectory tau_a = gen_trajectory(effect, frames, seed);
    Trajectory tau_c;
    bool distinct = false;
    for (int attempt = 1; attempt <= 8; ++attempt) {
        tau_c = gen_trajectory(effect, frames, seed + attempt);
        double max_diff = 0.0;
        for (std::size_t i = 0; i < tau_a.values.size(); ++i) {
            max_diff = std::max(max_diff, std::fabs(tau_a.values[i] - tau_c.values[i]));
        }
        if (max_diff > 1e-6) {
            distinct = true;
            break;
        }
    }
    if (!distinct) {
        throw std::runtime_error(
            "build_triplet: could not draw a distinct content trajectory in 8 attempts");
    }

    Triplet triplet;
    triplet.anchor = {scene_a.id, "anchor", tau_a, render_clip(scene_a, tau_a, opts)};
    triplet.content = {scene_a.id, "content", tau_c, render_clip(scene_a, tau_c, opts)};
    triplet.style = {scene_b.id, "style", tau_a, render_clip(scene_b, tau_a, opts)};
    return triplet;
}

InflatedStill inflate_still(const Frame& image, int frames, const ProxyMap* depth) {
    if (frames < 1) {
        throw std::invalid_argument("inflate_still: frames must be >= 1");
    }
    InflatedStill still;
    still.frames.assign(static_cast<std::size_t>(frames), image);
    still.flow.assign(static_cast<std::size_t>(frames),
                      ProxyMap(image.width, image.height, 2, 0.0f));
    still.perspective.assign(static_cast<std::size_t>(frames),
                             ProxyMap(image.width, image.height, 4, 0.0f));
    if (depth != nullptr) {
        still.depth.assign(static_cast<std::size_t>(frames), *depth);
    }
    return still;
}

std::vector<ManifestEntry> compose_batch(const BatchSpec& spec,
                                         const std::vector<std::string>& scenes,
                                         EffectKind effect, std::int64_t seed) {
    if (spec.videos_per_batch < 1 || spec.augmentations_per_video < 1) {
        throw std::invalid_argument("compose_batch: spec counts must be >= 1");
    }
    if (static_cast<int>(scenes.size()) < spec.videos_per_batch) {
        throw std::invalid_argument("compose_batch: not enough scenes for the batch");
    }
    // Seeded Fisher-Yates pick of videos_per_batch scenes.
    std::vector<std::size_t> order(scenes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Pcg32 rng(derive_stream(static_cast<std::uint64_t>(seed),
                            static_cast<std::uint64_t>(effect), 0x6261746368ULL));
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        const std::size_t j = rng.next_u32() % (i + 1);
        std::swap(order[i], order[j]);
    }

    std::vector<ManifestEntry> manifest;
    manifest.reserve(static_cast<std::size_t>(spec.videos_per_batch) *
                     spec.augmentations_per_video);
    for (int v = 0; v < spec.videos_per_batch; ++v) {
        for (int a = 0; a < spec.augmentations_per_video; ++a) {
            ManifestEntry entry;
            entry.scene = scenes[order[v]];
            entry.effect = effect;
            entry.seed = static_cast<std::int64_t>(
                derive_stream(static_cast<std::uint64_t>(seed), v, a) >> 1);
            entry.role = "anchor";
            manifest.push_back(std::move(entry));
        }
    }
    return manifest;
}

std::string manifest_to_json(const std::vector<ManifestEntry>& manifest) {
    json arr = json::array();
    for (const ManifestEntry& e : manifest) {
        json item;
        item["scene"] = e.scene;
        item["effect"] = effect_name(e.effect);
        item["seed"] = e.seed;
        item["role"] = e.role;
        arr.push_back(std::move(item));
    }
    return arr.dump(2) + "\n";
}

SceneClip load_scene_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    SceneClip scene;
    scene.id = dir.filename().string();

    fs::path frames_dir = dir / "frames";
    if (!fs::is_directory(frames_dir)) frames_dir = dir;
    for (const fs::path& p : sorted_files(frames_dir, ".ppm")) {
        scene.frames.push_back(load_ppm(p));
    }
    if (scene.frames.empty()) {
        throw std::runtime_error("load_scene_dir: no .ppm frames in " + dir.string());
    }
    const fs::path maps_dir = dir / "maps";
    for (const fs::path& p : sorted_files(maps_dir, ".pfm", "depth_")) {
        scene.depth.push_back(load_map(p));
    }
    for (const fs::path& p : sorted_files(maps_dir, ".pfm", "flow_")) {
        scene.flow.push_back(load_map(p));
    }
    return scene;
}

void save_clip_dir(const std::filesystem::path& dir, const RenderedClip& clip) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "frames");
    for (std::size_t t = 0; t < clip.frames.size(); ++t) {
        save_ppm(dir / "frames" / frame_file_name(static_cast<int>(t)), clip.frames[t]);
    }
    atomic_write(dir / "trajectory.json",
                 serialize_trajectory(clip.trajectory));
    json meta;
    meta["scene"] = clip.scene_id;
    meta["role"] = clip.role;
    meta["effect"] = effect_name(clip.trajectory.effect);
    meta["seed"] = clip.trajectory.seed;
    meta["frames"] = clip.trajectory.frames;
    atomic_write(dir / "meta.json", meta.dump(2) + "\n");
}

}  // namespace camforge

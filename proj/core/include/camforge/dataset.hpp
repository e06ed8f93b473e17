#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "camforge/frame.hpp"
#include "camforge/proxy_effects.hpp"
#include "camforge/trajectory.hpp"

namespace camforge {

/// Source material for rendering: frames plus whatever proxy maps the
/// effect needs (per-frame depth for Bokeh, per-frame flow for Shutter).
struct SceneClip {
    std::string id;
    std::vector<Frame> frames;
    std::vector<ProxyMap> depth;  // 1-channel
    std::vector<ProxyMap> flow;   // 2-channel, frames-1 or frames entries
};

struct RenderOptions {
    double base_fps = 24.0;          // source frame rate for shutter scaling
    double vignette_strength = 0.6;  // applied after the fisheye warp
    int jobs = 1;                    // worker threads over frames
};

/// Renders a clip along a trajectory. Dispatches to the per-effect
/// renderer; shutter smooths its scalar and mean-flow series with the
/// length-5 box filter and commits to one blur mode for the whole clip.
/// Output is byte-identical for any jobs count.
std::vector<Frame> render_clip(const SceneClip& scene, const Trajectory& traj,
                               const RenderOptions& opts = {});

struct RenderedClip {
    std::string scene_id;
    std::string role;  // "anchor" | "content" | "style"
    Trajectory trajectory;
    std::vector<Frame> frames;
};

/// Disentanglement triplet: anchor/content share the scene, anchor/style
/// share the exact trajectory values.
struct Triplet {
    RenderedClip anchor;
    RenderedClip content;
    RenderedClip style;
};

/// Builds a triplet: tau_a from `seed` renders scene_a (anchor) and
/// scene_b (style); tau_c from seed+1 renders scene_a (content). On a
/// trajectory collision the content seed is bumped, up to 8 attempts.
Triplet build_triplet(const SceneClip& scene_a, const SceneClip& scene_b,
                      EffectKind effect, std::int64_t seed,
                      const RenderOptions& opts = {});

/// Still-image inflation: the image replicated across `frames` frames, an
/// all-zero flow field and 4-channel perspective field per frame, and the
/// provided depth map replicated (when given).
struct InflatedStill {
    std::vector<Frame> frames;
    std::vector<ProxyMap> flow;         // zeros, 2-channel
    std::vector<ProxyMap> perspective;  // zeros, 4-channel
    std::vector<ProxyMap> depth;        // replicated input, may be empty
};

InflatedStill inflate_still(const Frame& image, int frames,
                            const ProxyMap* depth = nullptr);

struct BatchSpec {
    int videos_per_batch = 5;
    int augmentations_per_video = 6;
};

struct ManifestEntry {
    std::string scene;
    EffectKind effect = EffectKind::Exposure;
    std::int64_t seed = 0;
    std::string role;
};

/// Deterministic training batch manifest: videos_per_batch scenes chosen
/// by seeded shuffle, each expanded to augmentations_per_video derived
/// trajectory seeds (5 x 6 = 30 entries by default).
std::vector<ManifestEntry> compose_batch(const BatchSpec& spec,
                                         const std::vector<std::string>& scenes,
                                         EffectKind effect, std::int64_t seed);

std::string manifest_to_json(const std::vector<ManifestEntry>& manifest);

// ---- Clip directory layout: frames/ (PPM), maps/ (PFM), meta.json ------

/// Loads frames from dir/frames/*.ppm (or dir/*.ppm), depth from
/// dir/maps/depth_*.pfm and flow from dir/maps/flow_*.pfm, sorted by name.
SceneClip load_scene_dir(const std::filesystem::path& dir);

/// Writes frames/, trajectory.json (the sidecar) and meta.json.
void save_clip_dir(const std::filesystem::path& dir, const RenderedClip& clip);

/// Runs fn(0..count-1) on `jobs` threads; tasks write disjoint slots so
/// results do not depend on the thread count.
void parallel_for_index(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace camforge

// camforge - deterministic synthetic-camera rendering, dataset and metric
// toolbox. Subcommands: traj, render, dataset, metric, loss, exif.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"

#include "camforge/dataset.hpp"
#include "camforge/losses.hpp"
#include "camforge/media_io.hpp"
#include "camforge/metrics.hpp"
#include "camforge/pixel_effects.hpp"
#include "camforge/proxy_effects.hpp"
#include "camforge/trajectory.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSeedEnvVar = "CAMFORGE_SEED";

std::int64_t default_seed() {
    if (const char* env = std::getenv(kSeedEnvVar)) {
        try {
            return std::stoll(env);
        } catch (const std::exception&) {
            throw std::runtime_error(std::string(kSeedEnvVar) +
                                     " is not an integer: " + env);
        }
    }
    return 0;
}

// Config echo: the output-determining parameters of a run. Execution-only
// knobs (--jobs, the output location) are excluded so reruns into fresh
// directories stay byte-identical.
class RunEcho {
public:
    void set(const std::string& key, const json& value) { config_[key] = value; }

    // For directory outputs writes <dir>/run.json, for file outputs a
    // sibling <file>.run.json.
    void write(const fs::path& output, bool output_is_dir) const {
        const fs::path path = output_is_dir
                                  ? output / "run.json"
                                  : fs::path(output.string() + ".run.json");
        camforge::atomic_write(path, config_.dump(2) + "\n");
    }

private:
    json config_;
};

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

camforge::Trajectory load_trajectory(const fs::path& path) {
    return camforge::parse_trajectory(read_text_file(path));
}

std::vector<camforge::Frame> load_frames_arg(const fs::path& path) {
    if (fs::is_directory(path)) {
        return camforge::load_scene_dir(path).frames;
    }
    return {camforge::load_ppm(path)};
}

json metric_json(const std::string& name, double value,
                 const std::vector<double>* per_frame = nullptr) {
    json j;
    j["metric"] = name;
    if (std::isinf(value)) {
        j["value"] = value > 0 ? "+inf" : "-inf";
    } else {
        j["value"] = value;
    }
    if (per_frame != nullptr) {
        json arr = json::array();
        for (double v : *per_frame) {
            if (std::isinf(v)) {
                arr.push_back(v > 0 ? "+inf" : "-inf");
            } else {
                arr.push_back(v);
            }
        }
        j["per_frame"] = std::move(arr);
    }
    return j;
}

// Builds a whole output directory under a temporary name, then renames it
// into place so failures leave no partial tree behind.
class StagedDir {
public:
    explicit StagedDir(fs::path target)
        : target_(std::move(target)), staging_(target_.string() + ".partial") {
        fs::remove_all(staging_);
        fs::create_directories(staging_);
    }
    ~StagedDir() {
        if (!committed_) {
            std::error_code ec;
            fs::remove_all(staging_, ec);
        }
    }
    const fs::path& path() const { return staging_; }
    void commit() {
        fs::remove_all(target_);
        fs::rename(staging_, target_);
        committed_ = true;
    }

private:
    fs::path target_;
    fs::path staging_;
    bool committed_ = false;
};

// ---- traj ---------------------------------------------------------------

struct TrajGenArgs {
    std::string effect;
    int frames = 81;
    std::optional<std::int64_t> seed;
    std::string output;
    bool with_delta = false;
};

int run_traj_gen(const TrajGenArgs& args) {
    const camforge::EffectKind effect = camforge::effect_from_name(args.effect);
    const std::int64_t seed = args.seed.value_or(default_seed());
    const camforge::Trajectory traj =
        camforge::gen_trajectory(effect, args.frames, seed);

    std::string text;
    if (args.with_delta) {
        const camforge::DeltaTrajectory delta = camforge::to_delta(traj);
        text = camforge::serialize_trajectory(traj, &delta);
    } else {
        text = camforge::serialize_trajectory(traj);
    }
    camforge::atomic_write(args.output, text);

    RunEcho echo;
    echo.set("subcommand", "traj gen");
    echo.set("effect", camforge::effect_name(effect));
    echo.set("frames", args.frames);
    echo.set("seed", seed);
    echo.set("delta", args.with_delta);
    echo.write(args.output, false);
    return 0;
}

// ---- render ---------------------------------------------------------------

struct RenderArgs {
    std::string effect;  // optional; validated against the sidecar
    std::string traj_path;
    std::string frames_dir;
    std::string depth_dir;
    std::string flow_dir;
    std::string output;
    double base_fps = 24.0;
    int jobs = 1;
};

std::vector<camforge::ProxyMap> load_map_dir(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".pfm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<camforge::ProxyMap> maps;
    maps.reserve(files.size());
    for (const fs::path& p : files) maps.push_back(camforge::load_map(p));
    return maps;
}

camforge::SceneClip load_scene_args(const fs::path& frames_dir,
                                    const std::string& depth_dir,
                                    const std::string& flow_dir) {
    camforge::SceneClip scene = camforge::load_scene_dir(frames_dir);
    if (!depth_dir.empty()) scene.depth = load_map_dir(depth_dir);
    if (!flow_dir.empty()) scene.flow = load_map_dir(flow_dir);
    return scene;
}

int run_render(const RenderArgs& args) {
    const camforge::Trajectory traj = load_trajectory(args.traj_path);
    if (!args.effect.empty() &&
        camforge::effect_from_name(args.effect) != traj.effect) {
        throw std::runtime_error("render: --effect '" + args.effect +
                                 "' does not match the trajectory sidecar ('" +
                                 camforge::effect_name(traj.effect) + "')");
    }
    camforge::SceneClip scene =
        load_scene_args(args.frames_dir, args.depth_dir, args.flow_dir);

    camforge::RenderOptions opts;
    opts.base_fps = args.base_fps;
    opts.jobs = args.jobs;
    std::vector<camforge::Frame> frames = camforge::render_clip(scene, traj, opts);

    StagedDir staged(args.output);
    camforge::RenderedClip clip{scene.id, "render", traj, std::move(frames)};
    camforge::save_clip_dir(staged.path(), clip);

    RunEcho echo;
    echo.set("subcommand", "render");
    echo.set("effect", camforge::effect_name(traj.effect));
    echo.set("traj", args.traj_path);
    echo.set("frames", args.frames_dir);
    if (!args.depth_dir.empty()) echo.set("depth", args.depth_dir);
    if (!args.flow_dir.empty()) echo.set("flow", args.flow_dir);
    echo.set("base_fps", args.base_fps);
    echo.write(staged.path(), true);
    staged.commit();
    return 0;
}

// ---- dataset ----------------------------------------------------------------

struct TripletArgs {
    std::string effect;
    std::string scene_a;
    std::string scene_b;
    std::optional<std::int64_t> seed;
    std::string output;
    double base_fps = 24.0;
    int jobs = 1;
};

int run_dataset_triplet(const TripletArgs& args) {
    const camforge::EffectKind effect = camforge::effect_from_name(args.effect);
    const std::int64_t seed = args.seed.value_or(default_seed());

    const camforge::SceneClip scene_a = camforge::load_scene_dir(args.scene_a);
    const camforge::SceneClip scene_b = camforge::load_scene_dir(args.scene_b);

    camforge::RenderOptions opts;
    opts.base_fps = args.base_fps;
    opts.jobs = args.jobs;
    const camforge::Triplet triplet =
        camforge::build_triplet(scene_a, scene_b, effect, seed, opts);

    StagedDir staged(args.output);
    camforge::save_clip_dir(staged.path() / "anchor", triplet.anchor);
    camforge::save_clip_dir(staged.path() / "content", triplet.content);
    camforge::save_clip_dir(staged.path() / "style", triplet.style);

    RunEcho echo;
    echo.set("subcommand", "dataset triplet");
    echo.set("effect", camforge::effect_name(effect));
    echo.set("scene_a", args.scene_a);
    echo.set("scene_b", args.scene_b);
    echo.set("seed", seed);
    echo.set("base_fps", args.base_fps);
    echo.write(staged.path(), true);
    staged.commit();
    return 0;
}

struct InflateArgs {
    std::string image;
    std::string depth;
    int frames = 81;
    std::string output;
};

int run_dataset_inflate(const InflateArgs& args) {
    const camforge::Frame image = camforge::load_ppm(args.image);
    std::optional<camforge::ProxyMap> depth;
    if (!args.depth.empty()) depth = camforge::load_map(args.depth);

    const camforge::InflatedStill still = camforge::inflate_still(
        image, args.frames, depth ? &*depth : nullptr);

    StagedDir staged(args.output);
    fs::create_directories(staged.path() / "frames");
    fs::create_directories(staged.path() / "maps");
    for (int t = 0; t < args.frames; ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04d.ppm", t);
        camforge::save_ppm(staged.path() / "frames" / name, still.frames[t]);
        std::snprintf(name, sizeof(name), "flow_%04d.pfm", t);
        camforge::save_map(staged.path() / "maps" / name, still.flow[t]);
        std::snprintf(name, sizeof(name), "perspective_%04d.pfm", t);
        camforge::save_map(staged.path() / "maps" / name, still.perspective[t]);
        if (!still.depth.empty()) {
            std::snprintf(name, sizeof(name), "depth_%04d.pfm", t);
            camforge::save_map(staged.path() / "maps" / name, still.depth[t]);
        }
    }
    json meta;
    meta["source"] = args.image;
    meta["frames"] = args.frames;
    meta["extrinsics"] = "zeroed";
    camforge::atomic_write(staged.path() / "meta.json", meta.dump(2) + "\n");

    RunEcho echo;
    echo.set("subcommand", "dataset inflate");
    echo.set("image", args.image);
    if (!args.depth.empty()) echo.set("depth", args.depth);
    echo.set("frames", args.frames);
    echo.write(staged.path(), true);
    staged.commit();
    return 0;
}

struct BatchArgs {
    std::string effect;
    std::vector<std::string> scenes;
    int videos = 5;
    int augmentations = 6;
    std::optional<std::int64_t> seed;
    std::string output;
};

int run_dataset_batch(const BatchArgs& args) {
    const camforge::EffectKind effect = camforge::effect_from_name(args.effect);
    const std::int64_t seed = args.seed.value_or(default_seed());
    camforge::BatchSpec spec;
    spec.videos_per_batch = args.videos;
    spec.augmentations_per_video = args.augmentations;
    const auto manifest = camforge::compose_batch(spec, args.scenes, effect, seed);
    camforge::atomic_write(args.output, camforge::manifest_to_json(manifest));

    RunEcho echo;
    echo.set("subcommand", "dataset batch");
    echo.set("effect", camforge::effect_name(effect));
    echo.set("scenes", args.scenes);
    echo.set("videos", args.videos);
    echo.set("augmentations", args.augmentations);
    echo.set("seed", seed);
    echo.write(args.output, false);
    return 0;
}

// ---- metric -----------------------------------------------------------------

int run_metric_pair(const std::string& name, const std::string& a_path,
                    const std::string& b_path, const std::string& output) {
    const std::vector<camforge::Frame> a = load_frames_arg(a_path);
    const std::vector<camforge::Frame> b = load_frames_arg(b_path);
    if (a.size() != b.size()) {
        throw std::runtime_error("metric: inputs have different frame counts");
    }
    std::vector<double> per_frame;
    per_frame.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        per_frame.push_back(name == "psnr" ? camforge::psnr(a[i], b[i])
                                           : camforge::ssim(a[i], b[i]));
    }
    double mean = 0.0;
    for (double v : per_frame) mean += v;
    mean /= static_cast<double>(per_frame.size());

    const json out = metric_json(name, mean, &per_frame);
    std::cout << out.dump(2) << "\n";
    if (!output.empty()) {
        camforge::atomic_write(output, out.dump(2) + "\n");
        RunEcho echo;
        echo.set("subcommand", "metric " + name);
        echo.set("a", a_path);
        echo.set("b", b_path);
        echo.write(output, false);
    }
    return 0;
}

int run_metric_wclip(const std::string& gen_path, const std::string& ref_path,
                     int window, const std::string& output) {
    const camforge::EmbeddingSequence gen = camforge::load_embeddings(gen_path);
    const camforge::EmbeddingSequence ref = camforge::load_embeddings(ref_path);
    const camforge::WclipResult result = camforge::wclip(gen, ref, window);

    json out = metric_json("wclip", result.value);
    out["window"] = window;
    out["skipped"] = result.skipped;
    std::cout << out.dump(2) << "\n";
    if (!output.empty()) {
        camforge::atomic_write(output, out.dump(2) + "\n");
        RunEcho echo;
        echo.set("subcommand", "metric wclip");
        echo.set("gen", gen_path);
        echo.set("ref", ref_path);
        echo.set("window", window);
        echo.write(output, false);
    }
    return 0;
}

struct FidelityArgs {
    std::string effect;
    std::string scene;
    std::string depth_dir;
    int levels = 10;
    double focus = 0.5;
    double base_fps = 24.0;
    std::string output;
};

int run_metric_fidelity(const FidelityArgs& args) {
    const camforge::EffectKind effect = camforge::effect_from_name(args.effect);
    camforge::SceneClip scene =
        load_scene_args(args.scene, args.depth_dir, "");

    const auto render_at = [&](double level) {
        camforge::Trajectory traj;
        traj.effect = effect;
        traj.frames = static_cast<int>(scene.frames.size());
        traj.seed = 0;
        const int dim = camforge::param_dim(effect);
        traj.values.assign(static_cast<std::size_t>(traj.frames) * dim, level);
        if (effect == camforge::EffectKind::Bokeh) {
            for (int t = 0; t < traj.frames; ++t) traj.value(t, 1) = args.focus;
        }
        camforge::RenderOptions opts;
        opts.base_fps = args.base_fps;
        return camforge::render_clip(scene, traj, opts);
    };

    const camforge::FidelityResult result =
        camforge::fidelity_sweep(effect, args.levels, render_at);

    std::ostringstream csv;
    csv << "level,signal\n";
    csv.precision(9);
    for (std::size_t i = 0; i < result.levels.size(); ++i) {
        csv << result.levels[i] << "," << result.signal[i] << "\n";
    }

    json out;
    out["metric"] = "fidelity";
    out["effect"] = camforge::effect_name(effect);
    out["levels"] = args.levels;
    out["r"] = result.r;
    std::cout << out.dump(2) << "\n";

    if (!args.output.empty()) {
        camforge::atomic_write(args.output, csv.str());
        RunEcho echo;
        echo.set("subcommand", "metric fidelity");
        echo.set("effect", camforge::effect_name(effect));
        echo.set("scene", args.scene);
        echo.set("levels", args.levels);
        echo.set("focus", args.focus);
        echo.write(args.output, false);
    }
    return 0;
}

// ---- loss -------------------------------------------------------------------

std::vector<double> trajectory_column(const camforge::Trajectory& traj, int dim) {
    if (dim < 0 || dim >= camforge::param_dim(traj.effect)) {
        throw std::runtime_error("loss: --dim out of range for effect");
    }
    std::vector<double> col(static_cast<std::size_t>(traj.frames));
    for (int t = 0; t < traj.frames; ++t) col[t] = traj.value(t, dim);
    return col;
}

int run_loss_ncc(const std::string& pred_path, const std::string& gt_path, int dim) {
    const auto pred = trajectory_column(load_trajectory(pred_path), dim);
    const auto gt = trajectory_column(load_trajectory(gt_path), dim);
    const camforge::NccResult result = camforge::ncc(pred, gt);
    json out;
    out["loss"] = "ncc";
    out["value"] = result.value;
    out["valid"] = result.valid;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_loss_infonce(const std::string& anchors_path, const std::string& positives_path,
                     double temperature) {
    const auto anchors = camforge::load_embeddings(anchors_path);
    const auto positives = camforge::load_embeddings(positives_path);
    json out;
    out["loss"] = "infonce";
    out["temperature"] = temperature;
    out["value"] = camforge::infonce(anchors, positives, temperature);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_loss_mi(const std::string& content_path, const std::string& style_path) {
    const auto content = camforge::load_embeddings(content_path);
    const auto style = camforge::load_embeddings(style_path);
    json out;
    out["loss"] = "mi";
    out["value"] = camforge::mi_penalty(content, style);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_loss_combined(const std::string& parts_path) {
    json j;
    try {
        j = json::parse(read_text_file(parts_path));
    } catch (const json::exception& e) {
        throw std::runtime_error("loss combined: invalid JSON: " + std::string(e.what()));
    }
    camforge::LossParts parts;
    parts.effect = camforge::effect_from_name(j.value("effect", "exposure"));
    parts.ncc.value = j.value("ncc", 0.0);
    parts.ncc.valid = j.value("ncc_valid", true);
    parts.infonce_content = j.value("infonce_content", 0.0);
    parts.infonce_style = j.value("infonce_style", 0.0);
    parts.mi = j.value("mi", 0.0);
    parts.aux.flat = j.value("flat", 0.0);
    parts.aux.smooth = j.value("smooth", 0.0);
    parts.aux.range = j.value("range", 0.0);

    camforge::LossWeights weights;
    if (j.contains("weights")) {
        const json& w = j["weights"];
        weights.traj = w.value("traj", weights.traj);
        weights.content = w.value("content", weights.content);
        weights.style = w.value("style", weights.style);
        weights.mi = w.value("mi", weights.mi);
        weights.flat = w.value("flat", weights.flat);
        weights.smooth = w.value("smooth", weights.smooth);
        weights.range = w.value("range", weights.range);
    }
    json out;
    out["loss"] = "combined";
    out["value"] = camforge::combined_loss(parts, weights);
    std::cout << out.dump(2) << "\n";
    return 0;
}

// ---- exif -------------------------------------------------------------------

int run_exif_normalize(const std::string& field, double value,
                       std::optional<double> min, std::optional<double> max) {
    camforge::FieldRange range = camforge::default_exif_range(field);
    if (min) range.min = *min;
    if (max) range.max = *max;
    json out;
    out["field"] = field;
    out["value"] = value;
    out["min"] = range.min;
    out["max"] = range.max;
    out["normalized"] = camforge::exif_normalize(value, range);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_exif_read(const std::string& path) {
    const camforge::ExifRecord rec = camforge::read_exif_sidecar(read_text_file(path));
    json out;
    out["aperture"] = rec.aperture;
    out["focal_length"] = rec.focal_length;
    out["iso"] = rec.iso;
    json extra = json::object();
    for (const auto& [key, value] : rec.extra) extra[key] = value;
    out["extra"] = std::move(extra);
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"camforge: deterministic synthetic-camera pipeline"};
    app.require_subcommand(1);

    // traj
    auto* traj = app.add_subcommand("traj", "Parameter trajectories");
    traj->require_subcommand(1);
    TrajGenArgs traj_args;
    auto* traj_gen = traj->add_subcommand("gen", "Generate a random smooth trajectory");
    traj_gen->add_option("--effect", traj_args.effect, "Effect kind")->required();
    traj_gen->add_option("--frames", traj_args.frames, "Frame count")->required();
    traj_gen->add_option("--seed", traj_args.seed, "RNG seed (default: $CAMFORGE_SEED or 0)");
    traj_gen->add_option("-o,--output", traj_args.output, "Output sidecar path")->required();
    traj_gen->add_flag("--delta", traj_args.with_delta, "Include the delta matrix");

    // render
    RenderArgs render_args;
    auto* render = app.add_subcommand("render", "Render a clip along a trajectory");
    render->add_option("--effect", render_args.effect,
                       "Effect kind (checked against the sidecar)");
    render->add_option("--traj", render_args.traj_path, "Trajectory sidecar")->required();
    render->add_option("--frames", render_args.frames_dir, "Input frame directory")->required();
    render->add_option("--depth", render_args.depth_dir, "Depth map directory (bokeh)");
    render->add_option("--flow", render_args.flow_dir, "Flow map directory (shutter)");
    render->add_option("-o,--output", render_args.output, "Output clip directory")->required();
    render->add_option("--base-fps", render_args.base_fps, "Source frame rate");
    render->add_option("--jobs", render_args.jobs, "Worker threads");

    // dataset
    auto* dataset = app.add_subcommand("dataset", "Triplets, batches, inflation");
    dataset->require_subcommand(1);
    TripletArgs triplet_args;
    auto* triplet = dataset->add_subcommand("triplet", "Build a disentanglement triplet");
    triplet->add_option("--effect", triplet_args.effect, "Effect kind")->required();
    triplet->add_option("--scene-a", triplet_args.scene_a, "Anchor/content scene dir")->required();
    triplet->add_option("--scene-b", triplet_args.scene_b, "Style scene dir")->required();
    triplet->add_option("--seed", triplet_args.seed, "RNG seed");
    triplet->add_option("-o,--output", triplet_args.output, "Output directory")->required();
    triplet->add_option("--base-fps", triplet_args.base_fps, "Source frame rate");
    triplet->add_option("--jobs", triplet_args.jobs, "Worker threads");

    InflateArgs inflate_args;
    auto* inflate = dataset->add_subcommand("inflate", "Inflate a still into a pseudo-video");
    inflate->add_option("--image", inflate_args.image, "Source PPM image")->required();
    inflate->add_option("--depth", inflate_args.depth, "Optional depth map to replicate");
    inflate->add_option("--frames", inflate_args.frames, "Frame count");
    inflate->add_option("-o,--output", inflate_args.output, "Output directory")->required();

    BatchArgs batch_args;
    auto* batch = dataset->add_subcommand("batch", "Compose a training batch manifest");
    batch->add_option("--effect", batch_args.effect, "Effect kind")->required();
    batch->add_option("--scene", batch_args.scenes, "Scene path (repeatable)")->required();
    batch->add_option("--videos", batch_args.videos, "Videos per batch");
    batch->add_option("--augmentations", batch_args.augmentations, "Trajectory augmentations per video");
    batch->add_option("--seed", batch_args.seed, "RNG seed");
    batch->add_option("-o,--output", batch_args.output, "Manifest output path")->required();

    // metric
    auto* metric = app.add_subcommand("metric", "Quality metrics");
    metric->require_subcommand(1);
    std::string m_a, m_b, m_out;
    auto* psnr_cmd = metric->add_subcommand("psnr", "Peak signal-to-noise ratio");
    psnr_cmd->add_option("--a", m_a, "Frame or clip directory")->required();
    psnr_cmd->add_option("--b", m_b, "Frame or clip directory")->required();
    psnr_cmd->add_option("-o,--output", m_out, "Optional JSON output path");
    auto* ssim_cmd = metric->add_subcommand("ssim", "Structural similarity");
    ssim_cmd->add_option("--a", m_a, "Frame or clip directory")->required();
    ssim_cmd->add_option("--b", m_b, "Frame or clip directory")->required();
    ssim_cmd->add_option("-o,--output", m_out, "Optional JSON output path");

    std::string w_gen, w_ref, w_out;
    int w_window = 5;
    auto* wclip_cmd = metric->add_subcommand("wclip", "Windowed embedding similarity");
    wclip_cmd->add_option("--gen", w_gen, "Generated embeddings (.pfm + sidecar)")->required();
    wclip_cmd->add_option("--ref", w_ref, "Reference embeddings")->required();
    wclip_cmd->add_option("--window", w_window, "Window size (1, 5, 10, ...)");
    wclip_cmd->add_option("-o,--output", w_out, "Optional JSON output path");

    FidelityArgs fidelity_args;
    auto* fidelity = metric->add_subcommand("fidelity", "10-level effect fidelity sweep");
    fidelity->add_option("--effect", fidelity_args.effect, "Effect kind")->required();
    fidelity->add_option("--scene", fidelity_args.scene, "Scene directory")->required();
    fidelity->add_option("--depth", fidelity_args.depth_dir, "Depth maps for bokeh");
    fidelity->add_option("--levels", fidelity_args.levels, "Sweep levels");
    fidelity->add_option("--focus", fidelity_args.focus, "Bokeh focus depth");
    fidelity->add_option("-o,--output", fidelity_args.output, "CSV output path");

    // loss
    auto* loss = app.add_subcommand("loss", "Disentanglement loss evaluation");
    loss->require_subcommand(1);
    std::string l_pred, l_gt;
    int l_dim = 0;
    auto* ncc_cmd = loss->add_subcommand("ncc", "Normalized cross-correlation");
    ncc_cmd->add_option("--pred", l_pred, "Predicted trajectory sidecar")->required();
    ncc_cmd->add_option("--gt", l_gt, "Ground-truth trajectory sidecar")->required();
    ncc_cmd->add_option("--dim", l_dim, "Parameter dimension (bokeh: 0=K, 1=focus)");

    std::string l_anchors, l_positives;
    double l_temp = 0.07;
    auto* nce_cmd = loss->add_subcommand("infonce", "InfoNCE contrastive loss");
    nce_cmd->add_option("--anchors", l_anchors, "Anchor embeddings")->required();
    nce_cmd->add_option("--positives", l_positives, "Positive embeddings")->required();
    nce_cmd->add_option("--temperature", l_temp, "Softmax temperature");

    std::string l_content, l_style;
    auto* mi_cmd = loss->add_subcommand("mi", "Squared-cosine MI penalty");
    mi_cmd->add_option("--content", l_content, "Content embeddings")->required();
    mi_cmd->add_option("--style", l_style, "Style embeddings")->required();

    std::string l_parts;
    auto* combined_cmd = loss->add_subcommand("combined", "Weighted combined loss");
    combined_cmd->add_option("--parts", l_parts, "JSON file of loss parts")->required();

    // exif
    auto* exif = app.add_subcommand("exif", "EXIF metadata utilities");
    exif->require_subcommand(1);
    std::string e_field;
    double e_value = 0.0;
    std::optional<double> e_min, e_max;
    auto* norm_cmd = exif->add_subcommand("normalize", "Log-space field normalization");
    norm_cmd->add_option("--field", e_field, "aperture | focallength | iso")->required();
    norm_cmd->add_option("--value", e_value, "Physical value")->required();
    norm_cmd->add_option("--min", e_min, "Range minimum override");
    norm_cmd->add_option("--max", e_max, "Range maximum override");

    std::string e_json;
    auto* read_cmd = exif->add_subcommand("read", "Parse an EXIF JSON sidecar");
    read_cmd->add_option("--json", e_json, "Sidecar path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (traj_gen->parsed()) return run_traj_gen(traj_args);
        if (render->parsed()) return run_render(render_args);
        if (triplet->parsed()) return run_dataset_triplet(triplet_args);
        if (inflate->parsed()) return run_dataset_inflate(inflate_args);
        if (batch->parsed()) return run_dataset_batch(batch_args);
        if (psnr_cmd->parsed()) return run_metric_pair("psnr", m_a, m_b, m_out);
        if (ssim_cmd->parsed()) return run_metric_pair("ssim", m_a, m_b, m_out);
        if (wclip_cmd->parsed()) return run_metric_wclip(w_gen, w_ref, w_window, w_out);
        if (fidelity->parsed()) return run_metric_fidelity(fidelity_args);
        if (ncc_cmd->parsed()) return run_loss_ncc(l_pred, l_gt, l_dim);
        if (nce_cmd->parsed()) return run_loss_infonce(l_anchors, l_positives, l_temp);
        if (mi_cmd->parsed()) return run_loss_mi(l_content, l_style);
        if (combined_cmd->parsed()) return run_loss_combined(l_parts);
        if (norm_cmd->parsed()) return run_exif_normalize(e_field, e_value, e_min, e_max);
        if (read_cmd->parsed()) return run_exif_read(e_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "usage error: no subcommand\n";
    return 2;
}

#pragma once

#include <vector>

#include "camforge/frame.hpp"
#include "camforge/trajectory.hpp"

namespace camforge {

struct NccResult {
    double value = 0.0;
    bool valid = false;  // false when ground-truth std <= 1e-3
};

/// Normalized cross-correlation of two equal-length series after
/// zero-mean/unit-std normalization. Undefined (invalid) when the ground
/// truth is near-constant.
NccResult ncc(const std::vector<double>& pred, const std::vector<double>& gt);

/// Standard InfoNCE over in-batch positives: row i of `positives` is the
/// positive for row i of `anchors`, all other rows are negatives. Cosine
/// similarities, log-sum-exp stabilized.
double infonce(const EmbeddingSequence& anchors, const EmbeddingSequence& positives,
               double temperature);

/// Mean squared cosine similarity between paired content/style embeddings.
double mi_penalty(const EmbeddingSequence& content, const EmbeddingSequence& style);

struct AuxPenalties {
    double flat = 0.0;    // max(0, 1 - var(pred))
    double smooth = 0.0;  // mean squared first difference
    double range = 0.0;   // mean relu(|z| - 3)^2 over z-scored pred
};

AuxPenalties aux_penalties(const std::vector<double>& pred);

struct LossWeights {
    double traj = 2.0;
    double content = 0.1;
    double style = 0.3;
    double mi = 0.05;
    double flat = 0.1;
    double smooth = 0.005;
    double range = 0.05;
};

struct LossParts {
    NccResult ncc;
    double infonce_content = 0.0;
    double infonce_style = 0.0;
    double mi = 0.0;
    AuxPenalties aux;
    EffectKind effect = EffectKind::Exposure;
};

/// Weighted sum of the loss components. The NCC term enters as
/// weight*(1 - ncc) and is skipped when invalid; flat/smooth/range are
/// forced to zero for Bokeh and Shutter.
double combined_loss(const LossParts& parts, const LossWeights& weights = {});

}  // namespace camforge

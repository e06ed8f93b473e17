#include "camforge/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace camforge {

namespace {

constexpr double kGtStdThreshold = 1e-3;

struct SeriesStats {
    double mean = 0.0;
    double stddev = 0.0;  // population
};

SeriesStats stats(const std::vector<double>& v) {
    SeriesStats s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) {
        const double d = x - s.mean;
        acc += d * d;
    }
    s.stddev = std::sqrt(acc / static_cast<double>(v.size()));
    return s;
}

double cosine_rows(const float* a, const float* b, int dim, const char* who) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int i = 0; i < dim; ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw std::invalid_argument(std::string(who) + ": zero-norm embedding vector");
    }
    return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace

NccResult ncc(const std::vector<double>& pred, const std::vector<double>& gt) {
    if (pred.size() != gt.size()) {
        throw std::invalid_argument("ncc: length mismatch");
    }
    if (pred.size() < 2) {
        throw std::invalid_argument("ncc: need at least 2 samples");
    }
    NccResult result;
    const SeriesStats gs = stats(gt);
    if (gs.stddev <= kGtStdThreshold) {
        return result;  // NCC undefined for near-constant ground truth
    }
    result.valid = true;
    const SeriesStats ps = stats(pred);
    if (ps.stddev <= 1e-12) {
        result.value = 0.0;  // constant prediction carries no correlation
        return result;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        acc += ((pred[i] - ps.mean) / ps.stddev) * ((gt[i] - gs.mean) / gs.stddev);
    }
    result.value = acc / static_cast<double>(pred.size());
    return result;
}

double infonce(const EmbeddingSequence& anchors, const EmbeddingSequence& positives,
               double temperature) {
    if (anchors.frames != positives.frames || anchors.dim != positives.dim) {
        throw std::invalid_argument("infonce: batch shape mismatch");
    }
    if (anchors.frames < 2) {
        throw std::invalid_argument("infonce: need at least 2 pairs");
    }
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("infonce: temperature must be positive");
    }
    const int n = anchors.frames;
    double loss = 0.0;
    std::vector<double> logits(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double max_logit = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            logits[j] = cosine_rows(anchors.row(i), positives.row(j), anchors.dim,
                                    "infonce") /
                        temperature;
            max_logit = std::max(max_logit, logits[j]);
        }
        double denom = 0.0;
        for (int j = 0; j < n; ++j) denom += std::exp(logits[j] - max_logit);
        loss += -(logits[i] - max_logit) + std::log(denom);
    }
    return loss / n;
}

double mi_penalty(const EmbeddingSequence& content, const EmbeddingSequence& style) {
    if (content.frames != style.frames || content.dim != style.dim) {
        throw std::invalid_argument("mi_penalty: shape mismatch");
    }
    if (content.frames < 1) {
        throw std::invalid_argument("mi_penalty: empty batch");
    }
    double acc = 0.0;
    for (int i = 0; i < content.frames; ++i) {
        const double c = cosine_rows(content.row(i), style.row(i), content.dim,
                                     "mi_penalty");
        acc += c * c;
    }
    return acc / content.frames;
}

AuxPenalties aux_penalties(const std::vector<double>& pred) {
    if (pred.size() < 2) {
        throw std::invalid_argument("aux_penalties: need at least 2 samples");
    }
    const SeriesStats s = stats(pred);
    AuxPenalties aux;
    aux.flat = std::max(0.0, 1.0 - s.stddev * s.stddev);
    double acc = 0.0;
    for (std::size_t i = 1; i < pred.size(); ++i) {
        const double d = pred[i] - pred[i - 1];
        acc += d * d;
    }
    aux.smooth = acc / static_cast<double>(pred.size() - 1);
    if (s.stddev > 1e-12) {
        double racc = 0.0;
        for (double x : pred) {
            const double z = std::fabs((x - s.mean) / s.stddev);
            const double excess = std::max(0.0, z - 3.0);
            racc += excess * excess;
        }
        aux.range = racc / static_cast<double>(pred.size());
    }
    return aux;
}

double combined_loss(const LossParts& parts, const LossWeights& weights) {
    double loss = 0.0;
    if (parts.ncc.valid) {
        loss += weights.traj * (1.0 - parts.ncc.value);
    }
    loss += weights.content * parts.infonce_content;
    loss += weights.style * parts.infonce_style;
    loss += weights.mi * parts.mi;
    // Flat/smooth/range compete with NCC for the mode-committed effects.
    const bool aux_active =
        parts.effect != EffectKind::Bokeh && parts.effect != EffectKind::Shutter;
    if (aux_active) {
        loss += weights.flat * parts.aux.flat;
        loss += weights.smooth * parts.aux.smooth;
        loss += weights.range * parts.aux.range;
    }
    return loss;
}

}  // namespace camforge

#include "dpbandit/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpbandit/rng.hpp"

namespace dpbandit {

RewardModel::RewardModel(int num_videos, int dimension, double holder_l, double holder_alpha,
                         double peak_min, std::uint64_t seed)
    : holder_l_(holder_l), holder_alpha_(holder_alpha), dimension_(dimension) {
    if (num_videos < 1) throw std::invalid_argument("reward model needs at least one video");
    if (!(holder_l > 0.0)) throw std::invalid_argument("Hoelder constant L must be > 0");
    if (!(holder_alpha > 0.0 && holder_alpha <= 1.0)) {
        throw std::invalid_argument("Hoelder exponent alpha must be in (0,1]");
    }
    if (!(peak_min > 0.0 && peak_min <= 1.0)) {
        throw std::invalid_argument("peak_min must be in (0,1]");
    }
    std::mt19937_64 rng = make_rng(seed, 0x4E3A4DULL);
    anchors_.reserve(num_videos);
    peaks_.reserve(num_videos);
    for (int k = 0; k < num_videos; ++k) {
        ContextVector c(dimension);
        for (double& v : c) v = uniform01(rng);
        anchors_.push_back(std::move(c));
        peaks_.push_back(peak_min + (1.0 - peak_min) * uniform01(rng));
    }
}

RewardModel::RewardModel(std::vector<ContextVector> anchors, std::vector<double> peaks,
                         double holder_l, double holder_alpha)
    : anchors_(std::move(anchors)),
      peaks_(std::move(peaks)),
      holder_l_(holder_l),
      holder_alpha_(holder_alpha) {
    if (anchors_.empty() || anchors_.size() != peaks_.size()) {
        throw std::invalid_argument("anchors/peaks size mismatch");
    }
    dimension_ = static_cast<int>(anchors_[0].size());
}

void RewardModel::check_video(int video) const {
    if (video < 0 || video >= num_videos()) {
        throw std::invalid_argument("unknown video id " + std::to_string(video));
    }
}

double RewardModel::expected_reward(int video, const ContextVector& x) const {
    check_video(video);
    validate_context(x, dimension_);
    double dist2 = 0.0;
    const ContextVector& c = anchors_[video];
    for (int j = 0; j < dimension_; ++j) {
        double diff = x[j] - c[j];
        dist2 += diff * diff;
    }
    double u = peaks_[video] - holder_l_ * std::pow(std::sqrt(dist2), holder_alpha_);
    return std::clamp(u, 0.0, 1.0);
}

int RewardModel::sample_click(int video, const ContextVector& x, std::mt19937_64& rng) const {
    double u = expected_reward(video, x);
    return uniform01(rng) < u ? 1 : 0;
}

std::pair<int, double> RewardModel::best_arm(std::span<const int> arms,
                                             const ContextVector& x) const {
    if (arms.empty()) throw std::invalid_argument("best_arm: empty arm set");
    int best = arms[0];
    double best_value = expected_reward(arms[0], x);
    for (std::size_t i = 1; i < arms.size(); ++i) {
        double v = expected_reward(arms[i], x);
        if (v > best_value) {
            best = arms[i];
            best_value = v;
        }
    }
    return {best, best_value};
}

ContextGenerator ContextGenerator::uniform(int dimension) {
    if (dimension < 1) throw std::invalid_argument("generator dimension must be >= 1");
    ContextGenerator g;
    g.dimension_ = dimension;
    g.clustered_ = false;
    return g;
}

ContextGenerator ContextGenerator::clustered(int dimension, std::vector<ContextVector> centers,
                                             double spread, std::vector<double> weights) {
    if (dimension < 1) throw std::invalid_argument("generator dimension must be >= 1");
    if (centers.empty()) throw std::invalid_argument("clustered generator needs centers");
    if (!(spread >= 0.0)) throw std::invalid_argument("spread must be >= 0");
    if (weights.empty()) weights.assign(centers.size(), 1.0);
    if (weights.size() != centers.size()) {
        throw std::invalid_argument("centers/weights size mismatch");
    }
    for (const auto& c : centers) validate_context(c, dimension);

    ContextGenerator g;
    g.dimension_ = dimension;
    g.clustered_ = true;
    g.centers_ = std::move(centers);
    g.spread_ = spread;
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("cluster weights must be > 0");
        total += w;
    }
    double cum = 0.0;
    g.cumulative_weights_.reserve(weights.size());
    for (double w : weights) {
        cum += w / total;
        g.cumulative_weights_.push_back(cum);
    }
    g.cumulative_weights_.back() = 1.0;
    return g;
}

ContextVector ContextGenerator::next(std::mt19937_64& rng) const {
    ContextVector x(dimension_);
    if (!clustered_) {
        for (double& v : x) v = uniform01(rng);
        return x;
    }
    double u = uniform01(rng);
    std::size_t pick = 0;
    while (pick + 1 < cumulative_weights_.size() && u >= cumulative_weights_[pick]) ++pick;
    const ContextVector& c = centers_[pick];
    for (int j = 0; j < dimension_; ++j) {
        x[j] = std::clamp(c[j] + spread_ * gaussian(rng), 0.0, 1.0);
    }
    return x;
}

}  // namespace dpbandit

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dpbandit/context.hpp"

namespace dpbandit {

// Ground-truth expected rewards. Each video k is a clamped cone around an
// anchor: u_{k,x} = clamp(peak_k - L * ||x - anchor_k||^alpha, 0, 1). The
// construction is Hoelder-continuous with constant exactly L.
class RewardModel {
  public:
    RewardModel(int num_videos, int dimension, double holder_l, double holder_alpha,
                double peak_min, std::uint64_t seed);
    RewardModel(std::vector<ContextVector> anchors, std::vector<double> peaks, double holder_l,
                double holder_alpha);

    double expected_reward(int video, const ContextVector& x) const;
    int sample_click(int video, const ContextVector& x, std::mt19937_64& rng) const;

    // Arm with the highest expected reward at x; lowest index wins ties.
    std::pair<int, double> best_arm(std::span<const int> arms, const ContextVector& x) const;

    int num_videos() const { return static_cast<int>(peaks_.size()); }
    int dimension() const { return dimension_; }
    double holder_l() const { return holder_l_; }
    double holder_alpha() const { return holder_alpha_; }
    const ContextVector& anchor(int video) const { return anchors_[video]; }
    double peak(int video) const { return peaks_[video]; }

  private:
    void check_video(int video) const;

    std::vector<ContextVector> anchors_;
    std::vector<double> peaks_;
    double holder_l_;
    double holder_alpha_;
    int dimension_;
};

// Context arrival stream: i.i.d. uniform over [0,1]^d, or a Gaussian mixture
// clipped to the cube for sparse/clustered arrival patterns.
class ContextGenerator {
  public:
    static ContextGenerator uniform(int dimension);
    static ContextGenerator clustered(int dimension, std::vector<ContextVector> centers,
                                      double spread, std::vector<double> weights);

    ContextVector next(std::mt19937_64& rng) const;

    bool is_clustered() const { return clustered_; }
    int dimension() const { return dimension_; }

  private:
    ContextGenerator() = default;

    int dimension_ = 1;
    bool clustered_ = false;
    std::vector<ContextVector> centers_;
    std::vector<double> cumulative_weights_;
    double spread_ = 0.0;
};

}  // namespace dpbandit

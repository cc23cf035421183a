#pragma once

#include <cstdint>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dpbandit {

struct PrivacyParams {
    double epsilon = 1.0;    // total budget for flat (level-independent) privacy
    double epsilon0 = 0.01;  // base budget for the geometric model
    bool geometric = false;
    double delta_f = 1.0;    // Laplace query sensitivity
    double sigma = 0.1;      // confidence parameter for the noise envelope

    void validate() const;
};

// One draw from Laplace(0, scale). Deterministic given the generator state.
double sample_laplace(double scale, std::mt19937_64& rng);

// Exponential-mechanism selection probabilities: p_k proportional to
// exp(epsilon * score_k / (2 * delta_u)), computed via a max-shifted softmax.
std::vector<double> exp_mechanism_probs(const std::vector<double>& scores, double epsilon,
                                        double delta_u);

// Draws an index from an explicit probability vector.
std::size_t exp_mechanism_sample(const std::vector<double>& probs, std::mt19937_64& rng);

// High-probability bound on the total counter noise (holds w.p. >= 1-sigma):
// Gamma = theta * ln(T)^2 * ln(theta * T * ln(T) / sigma) / epsilon.
double noise_bound_gamma(const PrivacyParams& params, double horizon, int theta);

// Level-dependent budget epsilon0 * m^(alpha*l) in geometric mode; the flat
// epsilon otherwise.
double epsilon_for_level(const PrivacyParams& params, int m, double alpha, int level);

// Binary-tree continual-observation counter. Exact values live at the
// leaves; each dyadic node carries one lazily drawn Laplace noise term, so a
// released prefix sum is the true sum plus at most floor(log2(T))+1 noise
// terms. Querying the same prefix twice returns the identical number.
class PrivateCounter {
  public:
    // per_node_scale = 0 gives an exact (noise-free) counter.
    PrivateCounter(std::int64_t horizon, double per_node_scale, std::uint64_t seed);

    // Builds a counter whose release sequence satisfies epsilon_tree-DP for
    // inserts of sensitivity delta_f: per-node scale delta_f*log2(T)/epsilon_tree.
    static PrivateCounter with_budget(std::int64_t horizon, double epsilon_tree, double delta_f,
                                      std::uint64_t seed);

    void insert(double value);
    double prefix_sum(std::int64_t t) const;

    // The dyadic intervals (1-based, inclusive) whose node noises enter a
    // prefix_sum(t) query.
    static std::vector<std::pair<std::int64_t, std::int64_t>> prefix_decomposition(std::int64_t t);
    int nodes_read(std::int64_t t) const;

    std::int64_t count() const { return count_; }
    std::int64_t horizon() const { return horizon_; }
    std::int64_t padded_horizon() const { return padded_; }
    double per_node_scale() const { return per_node_scale_; }
    double epsilon_tree() const { return epsilon_tree_; }

  private:
    double node_noise(std::int64_t heap_index) const;

    std::int64_t horizon_;
    std::int64_t padded_;
    int depth_;  // padded_ == 2^depth_
    double per_node_scale_;
    double epsilon_tree_ = 0.0;
    std::int64_t count_ = 0;
    std::vector<double> node_sum_;  // heap layout, node 1 is the root
    mutable std::unordered_map<std::int64_t, double> node_noise_;
    mutable std::mt19937_64 rng_;
};

}  // namespace dpbandit

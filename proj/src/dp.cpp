#include "dpbandit/dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpbandit/rng.hpp"

namespace dpbandit {

void PrivacyParams::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(epsilon0 > 0.0)) throw std::invalid_argument("epsilon0 must be > 0");
    if (!(delta_f > 0.0)) throw std::invalid_argument("delta_f must be > 0");
    if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must be in (0,1)");
}

double sample_laplace(double scale, std::mt19937_64& rng) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace scale must be > 0");
    double e = -std::log(uniform01_open(rng));
    bool negative = (rng() & 1ULL) != 0;
    return negative ? -scale * e : scale * e;
}

std::vector<double> exp_mechanism_probs(const std::vector<double>& scores, double epsilon,
                                        double delta_u) {
    if (scores.empty()) throw std::invalid_argument("exp_mechanism_probs: empty scores");
    if (!(epsilon > 0.0)) throw std::invalid_argument("exp_mechanism_probs: epsilon must be > 0");
    if (!(delta_u > 0.0)) throw std::invalid_argument("exp_mechanism_probs: delta_u must be > 0");

    double max_score = scores[0];
    for (double s : scores) {
        if (!std::isfinite(s)) throw std::invalid_argument("exp_mechanism_probs: non-finite score");
        max_score = std::max(max_score, s);
    }

    const double coeff = epsilon / (2.0 * delta_u);
    std::vector<double> probs(scores.size());
    double total = 0.0;
    for (std::size_t k = 0; k < scores.size(); ++k) {
        probs[k] = std::exp(coeff * (scores[k] - max_score));
        total += probs[k];
    }
    for (double& p : probs) p /= total;
    return probs;
}

std::size_t exp_mechanism_sample(const std::vector<double>& probs, std::mt19937_64& rng) {
    if (probs.empty()) throw std::invalid_argument("exp_mechanism_sample: empty distribution");
    double total = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw std::invalid_argument("exp_mechanism_sample: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("exp_mechanism_sample: probabilities do not sum to 1");
    }
    double u = uniform01(rng);
    double cum = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        cum += probs[k];
        if (u < cum) return k;
    }
    return probs.size() - 1;
}

double noise_bound_gamma(const PrivacyParams& params, double horizon, int theta) {
    params.validate();
    if (!(horizon >= 2.0)) throw std::invalid_argument("noise_bound_gamma: horizon must be >= 2");
    if (theta < 1) throw std::invalid_argument("noise_bound_gamma: theta must be >= 1");
    double log_t = std::log(horizon);
    return theta * log_t * log_t * std::log(theta * horizon * log_t / params.sigma) /
           params.epsilon;
}

double epsilon_for_level(const PrivacyParams& params, int m, double alpha, int level) {
    if (level < 0) throw std::invalid_argument("epsilon_for_level: level must be >= 0");
    if (!params.geometric) return params.epsilon;
    return params.epsilon0 * std::pow(static_cast<double>(m), alpha * level);
}

namespace {

std::int64_t pad_to_power_of_two(std::int64_t n) {
    std::int64_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

PrivateCounter::PrivateCounter(std::int64_t horizon, double per_node_scale, std::uint64_t seed)
    : horizon_(horizon),
      padded_(pad_to_power_of_two(std::max<std::int64_t>(horizon, 1))),
      per_node_scale_(per_node_scale),
      rng_(make_rng(seed, 0xC0117E5ULL)) {
    if (horizon < 1) throw std::invalid_argument("counter horizon must be >= 1");
    if (per_node_scale < 0.0) throw std::invalid_argument("per-node scale must be >= 0");
    depth_ = 0;
    while ((std::int64_t{1} << depth_) < padded_) ++depth_;
    node_sum_.assign(static_cast<std::size_t>(2 * padded_), 0.0);
}

PrivateCounter PrivateCounter::with_budget(std::int64_t horizon, double epsilon_tree,
                                           double delta_f, std::uint64_t seed) {
    if (!(epsilon_tree > 0.0)) throw std::invalid_argument("epsilon_tree must be > 0");
    std::int64_t padded = pad_to_power_of_two(std::max<std::int64_t>(horizon, 1));
    double levels = std::log2(static_cast<double>(padded));
    PrivateCounter c(horizon, delta_f * std::max(levels, 1.0) / epsilon_tree, seed);
    c.epsilon_tree_ = epsilon_tree;
    return c;
}

void PrivateCounter::insert(double value) {
    if (count_ >= horizon_) throw std::length_error("private counter horizon exceeded");
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("counter values must lie in [0,1]");
    }
    ++count_;
    std::int64_t node = padded_ + (count_ - 1);  // leaf heap index
    while (node >= 1) {
        node_sum_[static_cast<std::size_t>(node)] += value;
        node >>= 1;
    }
}

std::vector<std::pair<std::int64_t, std::int64_t>> PrivateCounter::prefix_decomposition(
    std::int64_t t) {
    if (t < 1) throw std::invalid_argument("prefix_decomposition: t must be >= 1");
    std::vector<std::pair<std::int64_t, std::int64_t>> spans;
    std::int64_t start = 1;
    for (int bit = 62; bit >= 0; --bit) {
        std::int64_t len = std::int64_t{1} << bit;
        if (t & len) {
            spans.emplace_back(start, start + len - 1);
            start += len;
        }
    }
    return spans;
}

int PrivateCounter::nodes_read(std::int64_t t) const {
    if (t < 1 || t > count_) throw std::invalid_argument("nodes_read: t out of range");
    return static_cast<int>(prefix_decomposition(t).size());
}

double PrivateCounter::node_noise(std::int64_t heap_index) const {
    if (per_node_scale_ == 0.0) return 0.0;
    auto it = node_noise_.find(heap_index);
    if (it != node_noise_.end()) return it->second;
    double draw = sample_laplace(per_node_scale_, rng_);
    node_noise_.emplace(heap_index, draw);
    return draw;
}

double PrivateCounter::prefix_sum(std::int64_t t) const {
    if (t < 1 || t > count_) throw std::invalid_argument("prefix_sum: t out of range");
    double total = 0.0;
    for (const auto& [lo, hi] : prefix_decomposition(t)) {
        std::int64_t len = hi - lo + 1;
        // The node covering [lo,hi] sits at heap index padded/len + (lo-1)/len.
        std::int64_t node = padded_ / len + (lo - 1) / len;
        total += node_sum_[static_cast<std::size_t>(node)] + node_noise(node);
    }
    return total;
}

}  // namespace dpbandit

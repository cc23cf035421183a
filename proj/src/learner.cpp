#include "dpbandit/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpbandit/rng.hpp"

namespace dpbandit {

Mode mode_from_string(const std::string& name) {
    if (name == "DAP") return Mode::DAP;
    if (name == "P-DAP") return Mode::PDAP;
    if (name == "GP-DAP") return Mode::GPDAP;
    if (name == "DUP") return Mode::DUP;
    if (name == "CAP") return Mode::CAP;
    throw std::invalid_argument("unknown mode: " + name);
}

std::string mode_to_string(Mode mode) {
    switch (mode) {
        case Mode::DAP: return "DAP";
        case Mode::PDAP: return "P-DAP";
        case Mode::GPDAP: return "GP-DAP";
        case Mode::DUP: return "DUP";
        case Mode::CAP: return "CAP";
    }
    return "?";
}

std::string action_kind_name(Action::Kind kind) {
    switch (kind) {
        case Action::Kind::RecommendOwn: return "recommend_own";
        case Action::Kind::TrainPeer: return "train_peer";
        case Action::Kind::ExplorePeer: return "explore_peer";
        case Action::Kind::ExploitPeer: return "exploit_peer";
        case Action::Kind::ExploitOwn: return "exploit_own";
    }
    return "?";
}

double control_g1(double t, int level, int m, double alpha) {
    if (t < 1.0) throw std::invalid_argument("control functions need t >= 1");
    return std::pow(static_cast<double>(m), 2.0 * alpha * level) * std::log(t);
}

double control_g2(double t, int level, int m, double alpha, double gamma) {
    return control_g1(t, level, m, alpha) +
           0.25 * gamma * std::pow(static_cast<double>(m), alpha * level);
}

double control_g3(double t, int level, int m, double alpha, int num_videos) {
    return control_g1(t, level, m, alpha) / static_cast<double>(num_videos);
}

double sensitivity_delta_u(double holder_l, int m, double alpha, int level) {
    if (level < 0) throw std::invalid_argument("sensitivity_delta_u: level must be >= 0");
    return holder_l * std::pow(static_cast<double>(m), -alpha * level);
}

namespace {

// An arm counts as under-explored until it has at least max(threshold, 1)
// pulls. The floor keeps the first rounds exploring even while ln(t) is
// still below 1.
bool under_threshold(std::int64_t pulls, double threshold) {
    return static_cast<double>(pulls) < std::max(threshold, 1.0);
}

}  // namespace

Learner::Learner(LearnerConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)),
      tree_(cfg_.m, cfg_.d,
            mode_is_adaptive(cfg_.mode) ? cfg_.split_constant : 1e18, cfg_.split_exponent),
      rng_(make_rng(seed, 0x1EA4 + static_cast<std::uint64_t>(cfg_.learner_id))) {
    if (cfg_.own_videos.empty()) throw std::invalid_argument("learner owns no videos");
    if (cfg_.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    cfg_.privacy.validate();

    const int theta = static_cast<int>(cfg_.peer_ids.size());
    if (theta > 0 && cfg_.horizon >= 2) {
        double log_t = std::log(static_cast<double>(cfg_.horizon));
        gamma_base_ = theta * log_t * log_t *
                      std::log(theta * static_cast<double>(cfg_.horizon) * log_t /
                               cfg_.privacy.sigma);
    }

    // One continual counter per possible requester. Non-private modes use
    // exact counters so the code path stays identical.
    for (int peer : cfg_.peer_ids) {
        std::uint64_t counter_seed =
            splitmix64(seed ^ splitmix64(0xC7ULL + 1000ULL * cfg_.learner_id + peer));
        if (mode_is_private(cfg_.mode)) {
            double eps = cfg_.mode == Mode::GPDAP ? cfg_.privacy.epsilon0 : cfg_.privacy.epsilon;
            double eps_tree = eps / static_cast<double>(theta);
            counters_.emplace(peer, PrivateCounter::with_budget(cfg_.horizon, eps_tree,
                                                                cfg_.privacy.delta_f,
                                                                counter_seed));
        } else {
            counters_.emplace(peer, PrivateCounter(cfg_.horizon, 0.0, counter_seed));
        }
    }

    if (cfg_.mode == Mode::DUP) {
        // Fixed uniform grid at l0 = ceil(log_m(T/A) / (d+p)); never refined.
        double ratio = static_cast<double>(cfg_.horizon) / cfg_.split_constant;
        int level = 0;
        if (ratio > 1.0) {
            double l0 = std::log(ratio) / std::log(static_cast<double>(cfg_.m)) /
                        (cfg_.d + cfg_.split_exponent);
            level = std::max(0, static_cast<int>(std::ceil(l0 - 1e-9)));
        }
        tree_.split_uniformly_to_level(level);
    }
}

double Learner::control_time(std::int64_t t) const {
    double base = cfg_.control_log == ControlLog::Horizon ? static_cast<double>(cfg_.horizon)
                                                          : static_cast<double>(t);
    return std::max(base, 1.0);
}

int Learner::own_index(int video) const {
    for (std::size_t i = 0; i < cfg_.own_videos.size(); ++i) {
        if (cfg_.own_videos[i] == video) return static_cast<int>(i);
    }
    throw std::logic_error("video not owned by this learner");
}

int Learner::peer_index(int learner) const {
    for (std::size_t i = 0; i < cfg_.peer_ids.size(); ++i) {
        if (cfg_.peer_ids[i] == learner) return static_cast<int>(i);
    }
    throw std::logic_error("unknown peer learner");
}

CellStats& Learner::stats_mut(const SubspaceId& c) {
    auto it = stats_.find(c);
    if (it == stats_.end()) {
        CellStats fresh;
        fresh.own.resize(cfg_.own_videos.size());
        fresh.peer.resize(cfg_.peer_ids.size());
        it = stats_.emplace(c, std::move(fresh)).first;
    }
    return it->second;
}

const CellStats* Learner::stats(const SubspaceId& c) const {
    auto it = stats_.find(c);
    return it == stats_.end() ? nullptr : &it->second;
}

double Learner::epsilon_at_level(int level) const {
    PrivacyParams p = cfg_.privacy;
    p.geometric = (cfg_.mode == Mode::GPDAP);
    return epsilon_for_level(p, cfg_.m, cfg_.holder_alpha, level);
}

double Learner::gamma_for_level(int level) const {
    if (!mode_is_private(cfg_.mode) || gamma_base_ == 0.0) return 0.0;
    return std::min(gamma_base_ / epsilon_at_level(level), cfg_.gamma_cap);
}

Decision Learner::select_action_own(const ContextVector& x, std::int64_t t) {
    SubspaceId c = tree_.locate(x);
    const int level = c.level;
    CellStats& st = stats_mut(c);
    const double tc = control_time(t);
    const int num_own = static_cast<int>(cfg_.own_videos.size());

    // Phase 1: own-video exploration.
    double g1 = control_g1(tc, level, cfg_.m, cfg_.holder_alpha);
    for (int k = 0; k < num_own; ++k) {
        if (under_threshold(st.own[k].pulls, g1)) {
            return {Action{Action::Kind::RecommendOwn, cfg_.own_videos[k]}, c};
        }
    }

    const int num_peers = static_cast<int>(cfg_.peer_ids.size());
    if (num_peers > 0) {
        // Phase 2: peer training (no feedback crosses the boundary).
        double train_budget =
            num_own * control_g3(tc, level, cfg_.m, cfg_.holder_alpha, num_own);
        for (int j = 0; j < num_peers; ++j) {
            if (under_threshold(st.peer[j].train, train_budget)) {
                return {Action{Action::Kind::TrainPeer, cfg_.peer_ids[j]}, c};
            }
        }

        // Phase 3: peer exploration against the noise-inflated threshold.
        double g2 = control_g2(tc, level, cfg_.m, cfg_.holder_alpha, gamma_for_level(level));
        for (int j = 0; j < num_peers; ++j) {
            if (under_threshold(st.peer[j].pulls, g2)) {
                return {Action{Action::Kind::ExplorePeer, cfg_.peer_ids[j]}, c};
            }
        }
    }

    // Phase 4: exploitation.
    int ki = 0;
    if (mode_is_private(cfg_.mode)) {
        std::vector<double> scores(num_own);
        for (int k = 0; k < num_own; ++k) scores[k] = st.own[k].mean;
        double delta_u = sensitivity_delta_u(cfg_.holder_l, cfg_.m, cfg_.holder_alpha, level);
        auto probs = exp_mechanism_probs(scores, epsilon_at_level(level), delta_u);
        ki = static_cast<int>(exp_mechanism_sample(probs, rng_));
    } else {
        for (int k = 1; k < num_own; ++k) {
            if (st.own[k].mean > st.own[ki].mean) ki = k;
        }
    }

    if (num_peers == 0) {
        return {Action{Action::Kind::ExploitOwn, cfg_.own_videos[ki]}, c};
    }

    int kj = 0;
    for (int j = 1; j < num_peers; ++j) {
        if (st.peer[j].mean > st.peer[kj].mean) kj = j;
    }
    // Noisy peer means can leave [0,1]; clamp at comparison time only.
    double peer_value = std::clamp(st.peer[kj].mean, 0.0, 1.0);
    if (st.own[ki].mean >= peer_value) {
        return {Action{Action::Kind::ExploitOwn, cfg_.own_videos[ki]}, c};
    }
    return {Action{Action::Kind::ExploitPeer, cfg_.peer_ids[kj]}, c};
}

std::vector<double> Learner::exploitation_probs(const SubspaceId& c, std::int64_t t) const {
    (void)t;
    const CellStats* st = stats(c);
    const int num_own = static_cast<int>(cfg_.own_videos.size());
    std::vector<double> scores(num_own, 0.0);
    if (st != nullptr) {
        for (int k = 0; k < num_own; ++k) scores[k] = st->own[k].mean;
    }
    if (mode_is_private(cfg_.mode)) {
        double delta_u = sensitivity_delta_u(cfg_.holder_l, cfg_.m, cfg_.holder_alpha, c.level);
        return exp_mechanism_probs(scores, epsilon_at_level(c.level), delta_u);
    }
    std::vector<double> probs(num_own, 0.0);
    int best = 0;
    for (int k = 1; k < num_own; ++k) {
        if (scores[k] > scores[best]) best = k;
    }
    probs[best] = 1.0;
    return probs;
}

void Learner::update_own(const SubspaceId& c, const Action& action, double chooser_value) {
    CellStats& st = stats_mut(c);
    switch (action.kind) {
        case Action::Kind::RecommendOwn:
        case Action::Kind::ExploitOwn: {
            ArmCell& arm = st.own[own_index(action.target)];
            arm.pulls += 1;
            arm.reward_sum += chooser_value;
            arm.mean = arm.reward_sum / static_cast<double>(arm.pulls);
            break;
        }
        case Action::Kind::TrainPeer: {
            st.peer[peer_index(action.target)].train += 1;
            break;
        }
        case Action::Kind::ExplorePeer:
        case Action::Kind::ExploitPeer: {
            ArmCell& arm = st.peer[peer_index(action.target)];
            arm.pulls += 1;
            // The feedback sum is already cumulative; replace, don't average.
            arm.mean = chooser_value;
            break;
        }
    }

    if (tree_.record_arrival(c) == SplitDecision::Split) {
        tree_.split(c);
        stats_.erase(c);  // children start from zeroed counters
    }
}

ServeResult Learner::serve_peer_request(int requester, const ContextVector& x, std::int64_t t,
                                        bool training, const ClickFn& click) {
    SubspaceId c = tree_.locate(x);
    CellStats& st = stats_mut(c);
    const double tc = control_time(t);
    const int num_own = static_cast<int>(cfg_.own_videos.size());

    double g3 = control_g3(tc, c.level, cfg_.m, cfg_.holder_alpha, num_own);
    int k = -1;
    for (int i = 0; i < num_own; ++i) {
        if (under_threshold(st.own[i].pulls, g3)) {
            k = i;
            break;
        }
    }
    if (k < 0) {
        k = 0;
        for (int i = 1; i < num_own; ++i) {
            if (st.own[i].mean > st.own[k].mean) k = i;
        }
    }

    int f = click(cfg_.own_videos[k], x, rng_);

    // The server always learns from the true click.
    ArmCell& arm = st.own[k];
    arm.pulls += 1;
    arm.reward_sum += f;
    arm.mean = arm.reward_sum / static_cast<double>(arm.pulls);

    auto it = counters_.find(requester);
    if (it == counters_.end()) throw std::logic_error("request from unknown peer");
    PrivateCounter& counter = it->second;
    counter.insert(static_cast<double>(f));

    ServeResult result;
    result.video = cfg_.own_videos[k];
    result.click = f;
    if (!training) {
        result.feedback = PeerFeedback{counter.prefix_sum(counter.count()), counter.count()};
    }
    return result;
}

std::vector<std::pair<int, double>> Learner::counter_budgets() const {
    std::vector<std::pair<int, double>> budgets;
    budgets.reserve(counters_.size());
    for (const auto& [peer, counter] : counters_) {
        budgets.emplace_back(peer, counter.epsilon_tree());
    }
    return budgets;
}

double Learner::total_counter_budget() const {
    double total = 0.0;
    for (const auto& [peer, counter] : counters_) total += counter.epsilon_tree();
    return total;
}

std::vector<SubspaceId> Learner::known_cells() const {
    std::vector<SubspaceId> cells;
    cells.reserve(stats_.size());
    for (const auto& [id, st] : stats_) cells.push_back(id);
    return cells;
}

}  // namespace dpbandit

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpbandit/context.hpp"
#include "dpbandit/dp.hpp"
#include "dpbandit/partition.hpp"

namespace dpbandit {

enum class Mode { DAP, PDAP, GPDAP, DUP, CAP };

Mode mode_from_string(const std::string& name);
std::string mode_to_string(Mode mode);

// Whether exploitation draws own arms through the exponential mechanism.
inline bool mode_is_private(Mode mode) { return mode == Mode::PDAP || mode == Mode::GPDAP; }
// Whether the partition refines over time.
inline bool mode_is_adaptive(Mode mode) { return mode != Mode::DUP; }

enum class ControlLog { Current, Horizon };

// Exploration thresholds. G1 gates own-video exploration, G2 gates peer
// exploration (inflated by the noise envelope), G3 gates per-video training.
double control_g1(double t, int level, int m, double alpha);
double control_g2(double t, int level, int m, double alpha, double gamma);
double control_g3(double t, int level, int m, double alpha, int num_videos);

// Exponential-mechanism sensitivity at a level-l subspace: L * m^(-alpha*l).
double sensitivity_delta_u(double holder_l, int m, double alpha, int level);

struct LearnerConfig {
    int learner_id = 0;
    std::vector<int> own_videos;  // global video ids
    std::vector<int> peer_ids;
    double holder_l = 1.0;
    double holder_alpha = 1.0;
    int m = 2;
    int d = 1;
    double split_constant = 1.0;  // A
    double split_exponent = 2.0;  // p
    std::int64_t horizon = 1;     // T, also the per-peer counter capacity
    PrivacyParams privacy;
    Mode mode = Mode::DAP;
    ControlLog control_log = ControlLog::Current;
    // Runtime ceiling on the noise envelope fed into G2. The analytical
    // envelope exceeds any desk-scale horizon for epsilon <= 1, which would
    // pin the cascade in its peer-exploration phase forever.
    double gamma_cap = 200.0;
};

struct Action {
    enum class Kind { RecommendOwn, TrainPeer, ExplorePeer, ExploitPeer, ExploitOwn };
    Kind kind;
    int target;  // global video id for own kinds, peer learner id otherwise

    bool is_own() const { return kind == Kind::RecommendOwn || kind == Kind::ExploitOwn; }
    bool observes_reward() const { return kind != Kind::TrainPeer; }
};

std::string action_kind_name(Action::Kind kind);

// Per-(subspace, arm) counters and sample means.
struct ArmCell {
    std::int64_t pulls = 0;  // N_{k,C}
    std::int64_t train = 0;  // N_{1,k,C}, peer arms only
    double reward_sum = 0.0;
    double mean = 0.0;  // own arms: reward_sum/pulls; peer arms: latest v/n
};

struct CellStats {
    std::vector<ArmCell> own;
    std::vector<ArmCell> peer;
};

struct Decision {
    Action action;
    SubspaceId cell;
};

struct PeerFeedback {
    double noisy_sum = 0.0;   // v_t from the requester's counter
    std::int64_t count = 0;   // number of inserts behind v_t
};

struct ServeResult {
    int video = -1;  // global id of the served video (system-side only)
    int click = 0;   // true click, observed by the server
    std::optional<PeerFeedback> feedback;  // absent for training requests
};

// Samples the user's click for a (global video, context) pair.
using ClickFn = std::function<int(int video, const ContextVector& x, std::mt19937_64& rng)>;

// One service vendor: handles its own arrivals with the exploration/
// training/exploitation cascade and serves peer-forwarded arrivals from its
// own repository, releasing feedback only through private counters.
class Learner {
  public:
    Learner(LearnerConfig cfg, std::uint64_t seed);

    Decision select_action_own(const ContextVector& x, std::int64_t t);

    // Applies the outcome of an own-arrival action: counter/mean updates,
    // then the arrival count and split check for the decision cell.
    // chooser_value is the click for own recommendations, the feedback mean
    // v/n for peer pulls, and ignored for training forwards.
    void update_own(const SubspaceId& c, const Action& action, double chooser_value);

    ServeResult serve_peer_request(int requester, const ContextVector& x, std::int64_t t,
                                   bool training, const ClickFn& click);

    const PartitionTree& tree() const { return tree_; }
    const LearnerConfig& config() const { return cfg_; }
    std::mt19937_64& rng() { return rng_; }

    // Exploitation selection probabilities over own videos in cell c (the
    // exponential-mechanism distribution, or the argmax point mass in
    // non-private modes). Exposed for the privacy property tests.
    std::vector<double> exploitation_probs(const SubspaceId& c, std::int64_t t) const;

    double gamma_for_level(int level) const;
    double epsilon_at_level(int level) const;

    const CellStats* stats(const SubspaceId& c) const;
    CellStats& stats_mut(const SubspaceId& c);

    // Budget ledger: epsilon spent per peer counter, in peer-id order.
    std::vector<std::pair<int, double>> counter_budgets() const;
    double total_counter_budget() const;

    // Keys of every subspace this learner holds statistics for (audit hook).
    std::vector<SubspaceId> known_cells() const;

  private:
    double control_time(std::int64_t t) const;
    int own_index(int video) const;
    int peer_index(int learner) const;

    LearnerConfig cfg_;
    PartitionTree tree_;
    std::mt19937_64 rng_;
    std::unordered_map<SubspaceId, CellStats, SubspaceIdHash> stats_;
    std::map<int, PrivateCounter> counters_;  // keyed by requester id
    double gamma_base_ = 0.0;  // theta * ln(T)^2 * ln(theta*T*ln(T)/sigma)
};

}  // namespace dpbandit

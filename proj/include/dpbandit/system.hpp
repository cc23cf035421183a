#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "dpbandit/context.hpp"
#include "dpbandit/environment.hpp"
#include "dpbandit/learner.hpp"

namespace dpbandit {

// Everything the simulator records about one (round, learner) slot.
struct RoundRecord {
    std::int64_t round = 0;
    int learner = 0;  // point of arrival
    ContextVector context;
    Action action{Action::Kind::RecommendOwn, 0};
    int server = 0;        // learner that actually served the video
    int served_video = 0;  // global video id (system-side; hidden from requesters)
    int click = 0;         // realized user click
    bool chooser_saw_reward = true;
    double chooser_reward = 0.0;  // click for own serves, v/n for peer pulls
    SubspaceId cell;              // chooser's subspace at decision time
};

// Supplies the next context. Finite streams throw std::invalid_argument on
// exhaustion.
class ContextStream {
  public:
    virtual ~ContextStream() = default;
    virtual ContextVector next() = 0;
};

class GeneratorStream : public ContextStream {
  public:
    GeneratorStream(ContextGenerator gen, std::uint64_t seed);
    ContextVector next() override;

  private:
    ContextGenerator gen_;
    std::mt19937_64 rng_;
};

class VectorStream : public ContextStream {
  public:
    explicit VectorStream(std::vector<ContextVector> items) : items_(std::move(items)) {}
    ContextVector next() override;

  private:
    std::vector<ContextVector> items_;
    std::size_t pos_ = 0;
};

// M learners advancing in lockstep rounds: each round every learner receives
// one arrival, acts (serving locally or forwarding to a peer), and both
// sides update their statistics before the next learner moves.
class System {
  public:
    System(std::vector<LearnerConfig> configs, const RewardModel* model, std::uint64_t seed);

    // Processes one arrival per learner, in learner-id order. Returns the
    // records appended for this round.
    std::vector<RoundRecord> run_round(const std::vector<ContextVector>& arrivals);

    // Runs `rounds` full rounds, drawing M contexts per round from the stream.
    const std::vector<RoundRecord>& run_simulation(ContextStream& stream, std::int64_t rounds);

    const std::vector<RoundRecord>& event_log() const { return log_; }
    std::int64_t round() const { return round_; }
    int num_learners() const { return static_cast<int>(learners_.size()); }
    Learner& learner(int i) { return *learners_[i]; }
    const Learner& learner(int i) const { return *learners_[i]; }

  private:
    std::vector<std::unique_ptr<Learner>> learners_;
    const RewardModel* model_;
    std::int64_t round_ = 0;
    std::int64_t horizon_;
    std::vector<RoundRecord> log_;
};

}  // namespace dpbandit

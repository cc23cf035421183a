#include "dpbandit/system.hpp"

#include <stdexcept>

#include "dpbandit/rng.hpp"

namespace dpbandit {

GeneratorStream::GeneratorStream(ContextGenerator gen, std::uint64_t seed)
    : gen_(std::move(gen)), rng_(make_rng(seed, 0x57E4EA11ULL)) {}

ContextVector GeneratorStream::next() { return gen_.next(rng_); }

ContextVector VectorStream::next() {
    if (pos_ >= items_.size()) throw std::invalid_argument("context stream exhausted");
    return items_[pos_++];
}

System::System(std::vector<LearnerConfig> configs, const RewardModel* model, std::uint64_t seed)
    : model_(model) {
    if (configs.empty()) throw std::invalid_argument("system needs at least one learner");
    if (model == nullptr) throw std::invalid_argument("system needs a reward model");
    horizon_ = configs[0].horizon;
    learners_.reserve(configs.size());
    for (auto& cfg : configs) {
        if (cfg.horizon != horizon_) throw std::invalid_argument("learners disagree on horizon");
        learners_.push_back(std::make_unique<Learner>(std::move(cfg), seed));
    }
}

std::vector<RoundRecord> System::run_round(const std::vector<ContextVector>& arrivals) {
    if (round_ >= horizon_) throw std::out_of_range("run complete: horizon reached");
    if (arrivals.size() != learners_.size()) {
        throw std::invalid_argument("need exactly one arrival per learner");
    }
    const std::int64_t t = round_ + 1;

    ClickFn click = [this](int video, const ContextVector& x, std::mt19937_64& rng) {
        return model_->sample_click(video, x, rng);
    };

    std::vector<RoundRecord> appended;
    appended.reserve(learners_.size());
    for (std::size_t i = 0; i < learners_.size(); ++i) {
        Learner& me = *learners_[i];
        const ContextVector& x = arrivals[i];
        Decision decision = me.select_action_own(x, t);

        RoundRecord rec;
        rec.round = t;
        rec.learner = static_cast<int>(i);
        rec.context = x;
        rec.action = decision.action;
        rec.cell = decision.cell;

        switch (decision.action.kind) {
            case Action::Kind::RecommendOwn:
            case Action::Kind::ExploitOwn: {
                int f = click(decision.action.target, x, me.rng());
                me.update_own(decision.cell, decision.action, static_cast<double>(f));
                rec.server = static_cast<int>(i);
                rec.served_video = decision.action.target;
                rec.click = f;
                rec.chooser_saw_reward = true;
                rec.chooser_reward = static_cast<double>(f);
                break;
            }
            case Action::Kind::TrainPeer: {
                Learner& peer = *learners_[decision.action.target];
                ServeResult served =
                    peer.serve_peer_request(static_cast<int>(i), x, t, /*training=*/true, click);
                me.update_own(decision.cell, decision.action, 0.0);
                rec.server = decision.action.target;
                rec.served_video = served.video;
                rec.click = served.click;
                rec.chooser_saw_reward = false;
                rec.chooser_reward = 0.0;
                break;
            }
            case Action::Kind::ExplorePeer:
            case Action::Kind::ExploitPeer: {
                Learner& peer = *learners_[decision.action.target];
                ServeResult served =
                    peer.serve_peer_request(static_cast<int>(i), x, t, /*training=*/false, click);
                double value = served.feedback->noisy_sum /
                               static_cast<double>(served.feedback->count);
                me.update_own(decision.cell, decision.action, value);
                rec.server = decision.action.target;
                rec.served_video = served.video;
                rec.click = served.click;
                rec.chooser_saw_reward = true;
                rec.chooser_reward = value;
                break;
            }
        }
        appended.push_back(rec);
        log_.push_back(std::move(rec));
    }
    ++round_;
    return appended;
}

const std::vector<RoundRecord>& System::run_simulation(ContextStream& stream,
                                                       std::int64_t rounds) {
    std::vector<ContextVector> arrivals(learners_.size());
    for (std::int64_t r = 0; r < rounds; ++r) {
        for (std::size_t i = 0; i < learners_.size(); ++i) arrivals[i] = stream.next();
        run_round(arrivals);
    }
    return log_;
}

}  // namespace dpbandit

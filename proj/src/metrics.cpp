#include "dpbandit/metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dpbandit {

MetricsSeries compute_regret(const std::vector<RoundRecord>& log, const RewardModel& model,
                             std::int64_t checkpoint_stride) {
    MetricsSeries series;
    if (log.empty()) return series;

    std::vector<int> all_arms(model.num_videos());
    std::iota(all_arms.begin(), all_arms.end(), 0);

    const std::int64_t last_round = log.back().round;
    std::int64_t stride = checkpoint_stride;
    if (stride <= 0) {
        stride = static_cast<std::int64_t>(std::ceil(static_cast<double>(last_round) / 500.0));
        stride = std::max<std::int64_t>(stride, 1);
    }

    double cum_regret = 0.0;
    std::int64_t clicks = 0;
    std::int64_t arrivals = 0;
    std::int64_t current_round = log.front().round;

    auto checkpoint = [&](std::int64_t round) {
        series.rounds.push_back(round);
        series.cum_regret.push_back(cum_regret);
        series.avg_regret.push_back(cum_regret / static_cast<double>(arrivals));
        series.accuracy.push_back(static_cast<double>(clicks) / static_cast<double>(arrivals));
    };

    for (const RoundRecord& rec : log) {
        if (rec.round < current_round) {
            throw std::invalid_argument("event log not sorted by round");
        }
        if (rec.round > current_round) {
            if (current_round % stride == 0) checkpoint(current_round);
            current_round = rec.round;
        }
        if (rec.served_video < 0 || rec.served_video >= model.num_videos()) {
            throw std::invalid_argument("event log references video unknown to the model");
        }
        auto [best, best_value] = model.best_arm(all_arms, rec.context);
        double served_value = model.expected_reward(rec.served_video, rec.context);
        cum_regret += best_value - served_value;
        clicks += rec.click;
        ++arrivals;
    }
    if (series.rounds.empty() || series.rounds.back() != current_round) checkpoint(current_round);

    series.final_cum_regret = cum_regret;
    series.final_avg_regret = cum_regret / static_cast<double>(arrivals);
    series.final_accuracy = static_cast<double>(clicks) / static_cast<double>(arrivals);
    series.total_arrivals = arrivals;
    return series;
}

}  // namespace dpbandit

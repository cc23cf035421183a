#pragma once

#include <cstdint>
#include <vector>

#include "dpbandit/environment.hpp"
#include "dpbandit/system.hpp"

namespace dpbandit {

// Regret/accuracy curves derived from an event log. Cumulative regret is the
// pseudo-regret sum over all records (oracle expected reward minus the
// served video's expected reward); average regret and accuracy are
// normalized per arrival so runs with different learner counts compare.
struct MetricsSeries {
    std::vector<std::int64_t> rounds;   // checkpoint round indices
    std::vector<double> cum_regret;     // R(t), summed over learners
    std::vector<double> avg_regret;     // R(t) / arrivals(t)
    std::vector<double> accuracy;       // cumulative clicks / arrivals(t)
    double final_cum_regret = 0.0;
    double final_avg_regret = 0.0;
    double final_accuracy = 0.0;
    std::int64_t total_arrivals = 0;
};

// Folds the log into checkpointed series. checkpoint_stride <= 0 picks
// ceil(T/500); the final round is always included.
MetricsSeries compute_regret(const std::vector<RoundRecord>& log, const RewardModel& model,
                             std::int64_t checkpoint_stride = 0);

}  // namespace dpbandit

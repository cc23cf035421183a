#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpbandit/context.hpp"
#include "dpbandit/dp.hpp"
#include "dpbandit/learner.hpp"

namespace dpbandit {

struct GeneratorSpec {
    std::string kind = "uniform";  // "uniform" | "clustered"
    std::vector<ContextVector> centers;
    double spread = 0.05;
    std::vector<double> weights;
};

struct RewardSpec {
    double peak_min = 0.5;
    // Optional explicit field; when empty the anchors/peaks are seeded draws.
    std::vector<ContextVector> anchors;
    std::vector<double> peaks;
};

struct ExperimentConfig {
    std::vector<std::string> modes = {"DAP"};
    int num_learners = 4;   // M
    int videos_per_learner = 10;  // K
    int dimension = 2;      // d
    std::int64_t horizon = 50000;  // T
    int m = 2;
    double split_constant = 3000.0;  // A
    double split_exponent = 2.0;     // p
    double holder_l = 0.3;           // L
    double holder_alpha = 1.0;
    PrivacyParams privacy;
    double gamma_cap = 200.0;
    std::string control_log = "current";
    GeneratorSpec generator;
    RewardSpec reward;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::string out_dir = "results";
    std::int64_t checkpoint_stride = 0;  // 0 = ceil(T/500)

    void validate() const;

    // Fingerprint of the environment-defining fields (everything except
    // modes/privacy/output); summaries must agree on it to be comparable.
    std::string environment_digest() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

ControlLog control_log_from_string(const std::string& s);

}  // namespace dpbandit

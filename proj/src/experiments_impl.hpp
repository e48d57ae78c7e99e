#pragma once

#include <chrono>
#include <cmath>

#include "cylab/experiments.hpp"
#include "cylab/fit.hpp"

namespace cylab {

using ExpClock = std::chrono::steady_clock;

inline double seconds_since(ExpClock::time_point t0) {
    return std::chrono::duration<double>(ExpClock::now() - t0).count();
}

struct Claims {
    Json list = Json::array();
    bool all_pass = true;

    void add(const std::string& claim, const Json& measured, bool ok) {
        Json j;
        j["claim"] = claim;
        j["measured"] = measured;
        j["pass"] = ok;
        list.push_back(j);
        all_pass = all_pass && ok;
    }
};

Json config_echo(const ExperimentConfig& cfg);
Json fit_json(const DecayFit& f);

ExperimentOutcome run_projection_experiment(const ExperimentConfig&);
ExperimentOutcome run_embeddings_experiment(const ExperimentConfig&);
ExperimentOutcome run_milnor_experiment(const ExperimentConfig&);
ExperimentOutcome run_ale_experiment(const ExperimentConfig&);
ExperimentOutcome run_lengths_experiment(const ExperimentConfig&);
ExperimentOutcome run_nonlinear_experiment(const ExperimentConfig&);

}  // namespace cylab

#pragma once

#include <string>
#include <vector>

#include "cylab/gluing.hpp"
#include "cylab/io.hpp"

namespace cylab {

struct ExperimentConfig {
    std::string experiment;
    std::string out_dir = ".";
    uint64_t seed = 1;
    int workers = 0;  // 0 = all available; 1 = serial reference
    double b = 1.0;
    GluingConfig glue;
    double radii_min = 0;
    double radii_max = 0;
    int radii_count = 0;
    int samples = 0;  // 0 = per-experiment default
};

struct ExperimentOutcome {
    bool pass = false;
    std::string csv_path;
    std::string json_path;
    std::string message;
    Json summary;
};

const std::vector<std::string>& experiment_names();

// Runs one experiment, writing <out>/<experiment>.csv and .json. Throws
// DomainError for unknown experiment names (usage error at the CLI level);
// numerical failures are reported through `pass`.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg);

// key=value config file; '#' starts a comment. Unknown keys throw
// DomainError.
void load_config_file(const std::string& path, ExperimentConfig& cfg);

std::vector<double> geometric_radii(double lo, double hi, int n);

}  // namespace cylab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cylab/experiments.hpp"
#include "cylab/parallel.hpp"
#include "cylab/sampling.hpp"

using namespace cylab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("parallel for matches the serial reference") {
    const int n = 5000;
    std::vector<double> serial(n), parallel(n);
    auto body = [](std::int64_t i) {
        double acc = 0;
        for (int k = 1; k <= 50; ++k) acc += std::sin(0.001 * static_cast<double>(i) * k);
        return acc;
    };
    par::for_each(n, [&](std::int64_t i) { serial[static_cast<size_t>(i)] = body(i); }, 1);
    par::for_each(n, [&](std::int64_t i) { parallel[static_cast<size_t>(i)] = body(i); }, 4);
    for (int i = 0; i < n; ++i) CHECK(serial[static_cast<size_t>(i)] == parallel[static_cast<size_t>(i)]);
}

TEST_CASE("stateless sampler is index-pure") {
    CHECK(u01(5, 100, 3) == u01(5, 100, 3));
    CHECK(u01(5, 100, 3) != u01(5, 101, 3));
    CHECK(u01(5, 100, 3) != u01(6, 100, 3));
    // Values cover the unit interval.
    double lo = 1, hi = 0;
    for (int i = 0; i < 1000; ++i) {
        const double v = u01(9, static_cast<uint64_t>(i), 0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("csv bytes identical across worker counts") {
    namespace fs = std::filesystem;
    const fs::path dir1 = fs::temp_directory_path() / "cylab_io_w1";
    const fs::path dir2 = fs::temp_directory_path() / "cylab_io_w4";
    fs::create_directories(dir1);
    fs::create_directories(dir2);

    ExperimentConfig cfg;
    cfg.experiment = "harmonic";
    cfg.samples = 40;
    cfg.seed = 20260809;

    cfg.workers = 1;
    cfg.out_dir = dir1.string();
    const ExperimentOutcome a = run_experiment(cfg);
    cfg.workers = 4;
    cfg.out_dir = dir2.string();
    const ExperimentOutcome b = run_experiment(cfg);

    CHECK(a.pass);
    CHECK(b.pass);
    CHECK(slurp(a.csv_path) == slurp(b.csv_path));
}

TEST_CASE("config file parsing and overrides") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "cylab_test_config.txt";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "b = 2.5\n";
        out << "kappa=0.4\n";
        out << "seed = 99\n";
    }
    ExperimentConfig cfg;
    load_config_file(path.string(), cfg);
    CHECK(cfg.b == 2.5);
    CHECK(cfg.glue.kappa == 0.4);
    CHECK(cfg.seed == 99);

    {
        std::ofstream out(path);
        out << "unknown_key = 1\n";
    }
    ExperimentConfig cfg2;
    CHECK_THROWS_AS(load_config_file(path.string(), cfg2), DomainError);
}

TEST_CASE("unknown experiment is a usage error") {
    ExperimentConfig cfg;
    cfg.experiment = "no-such-experiment";
    CHECK_THROWS_AS(run_experiment(cfg), DomainError);
}

TEST_CASE("number formatting round trips") {
    for (double v : {1.0, -0.3333333333333333, 1e-300, 123456.789, 0.0}) {
        CHECK(std::stod(fmt(v)) == v);
    }
}

#pragma once

// Machine-readable run reports: pass/fail checks with slacks, the JSON
// report schema, and the experiment driver emitting the CSV time series.

#include "stretchline/analysis.hpp"
#include "stretchline/surface.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stretchline::report {

struct Check {
    std::string name;
    bool pass = false;
    long count = 0;          // samples exercised
    double worst_slack = 0.0; // min margin seen; >= 0 iff pass for slack-style checks
    std::string note;
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::string regime = "working";
    std::vector<Check> checks;
    std::vector<std::string> violations;

    bool all_pass() const;
    std::string to_json() const; // deterministic for fixed inputs
};

struct ExperimentConfig {
    std::string surface_path;  // empty when `shears` given inline
    std::vector<double> shears;
    double t0 = 0.0, t1 = 3.0, step = 0.05;
    int depth = 12;
    std::uint64_t seed = 0;
    std::string regime = "working";
    std::vector<surface::Slope> gammas;  // default: short marking base
    std::vector<surface::Slope> probes;  // default: Farey neighbors of each gamma
};

struct ExperimentResult {
    Report report;
    std::string csv; // schema-versioned time series
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

} // namespace stretchline::report

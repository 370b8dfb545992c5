#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmt/montecarlo.hpp"

namespace dmt {

// How the alternative signals of a Type II run are produced.
struct AlternativesSpec {
    enum class Kind { none, explicit_list, boundary, adversary };
    Kind kind = Kind::none;

    std::vector<SignalSequence> explicit_list;

    // boundary: per true spectrum, `count` random directions placed at
    // squared distance `constant` * rho^2 from theta0 (constant defaults to
    // the bonferroni separation constant for (alpha, beta)).
    std::size_t count = 3;
    std::optional<double> constant;

    // adversary: sign-perturbation prior draws, tested under b_true.
    double tau = 0.0;
    double gamma = 0.0;
    std::size_t b_true = 0;
    std::size_t b_bar = 1;
    std::size_t draws = 100;
    double scale = 1.0;  // multiplies the perturbation around the pullback
    bool has_tau = false;
    bool has_gamma = false;
};

struct GateSpec {
    std::optional<double> type1_bound;
    std::optional<double> type2_bound;
};

struct OutputSpec {
    std::optional<std::string> csv;
    std::optional<std::string> svg;
};

struct ExperimentConfig {
    ExperimentConfig(Dictionary d, SignalSequence t0) : dict(std::move(d)), theta0(std::move(t0)) {}

    Dictionary dict;
    SignalSequence theta0;
    double epsilon = 0.0;
    double alpha = 0.05;
    double beta = 0.05;
    TestKind test_kind = TestKind::single;
    std::optional<Partition> partition;
    AlternativesSpec alternatives;
    std::uint64_t replications = 1000;
    std::uint64_t seed = 0;
    Coupling coupling = Coupling::independent;
    std::vector<std::size_t> true_indices;
    std::vector<double> scaling_grid;
    GateSpec gate;
    OutputSpec output;
    std::uint64_t config_hash = 0;
};

// Parses and validates a config document. Errors carry a JSON-pointer style
// location, e.g. "/dictionary/1/3: entries must be non-increasing".
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Base experiment plan for the config (alternatives not yet materialized).
ExperimentPlan plan_from_config(const ExperimentConfig& config);

std::string test_kind_name(TestKind kind);

}  // namespace dmt

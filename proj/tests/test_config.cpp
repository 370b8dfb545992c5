#include <doctest.h>

#include <string>

#include "dmt/config.hpp"
#include "dmt/report.hpp"

using namespace dmt;

namespace {

const char* kMinimal = R"({
  "dictionary": [[1.0, 0.5], [0.5, 0.25]],
  "theta0": [0.0, 0.0],
  "epsilon": 0.1,
  "alpha": 0.05,
  "test_kind": "bonferroni",
  "replications": 500,
  "seed": 7
})";

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("parse_config: minimal document") {
    const ExperimentConfig cfg = parse_config(kMinimal);
    CHECK(cfg.dict.size() == 2);
    CHECK(cfg.theta0.size() == 2);
    CHECK(cfg.epsilon == 0.1);
    CHECK(cfg.test_kind == TestKind::bonferroni);
    CHECK(cfg.replications == 500);
    CHECK(cfg.seed == 7);
    CHECK(cfg.coupling == Coupling::independent);
    CHECK(cfg.alternatives.kind == AlternativesSpec::Kind::none);
    CHECK(cfg.config_hash == fnv1a64(kMinimal));

    const ExperimentPlan plan = plan_from_config(cfg);
    CHECK(plan.test_kind == TestKind::bonferroni);
    CHECK(plan.replications == 500);
}

TEST_CASE("parse_config: pointer diagnostics") {
    CHECK(error_of("{") .find("invalid JSON") != std::string::npos);
    CHECK(error_of(R"({"theta0": [0]})").find("/dictionary") != std::string::npos);
    CHECK(error_of(R"({"dictionary": [[1.0, 2.0]], "theta0": [0, 0], "epsilon": 1,
                      "alpha": 0.05, "test_kind": "single"})")
              .find("/dictionary/0") != std::string::npos);
    CHECK(error_of(R"({"dictionary": [[1.0, "x"]], "theta0": [0, 0], "epsilon": 1,
                      "alpha": 0.05, "test_kind": "single"})")
              .find("/dictionary/0/1") != std::string::npos);
    CHECK(error_of(R"({"dictionary": [[1.0]], "theta0": [0], "epsilon": -1,
                      "alpha": 0.05, "test_kind": "single"})")
              .find("/epsilon") != std::string::npos);
    CHECK(error_of(R"({"dictionary": [[1.0]], "theta0": [0], "epsilon": 1,
                      "alpha": 2.0, "test_kind": "single"})")
              .find("/alpha") != std::string::npos);
    CHECK(error_of(R"({"dictionary": [[1.0]], "theta0": [0], "epsilon": 1,
                      "alpha": 0.05, "test_kind": "sometest"})")
              .find("/test_kind") != std::string::npos);
    CHECK(error_of(R"({"dictionary": [[1.0]], "theta0": [0, 1], "epsilon": 1,
                      "alpha": 0.05, "test_kind": "single"})")
              .find("/theta0") != std::string::npos);
    CHECK(error_of(R"({"dictionary": [[1.0], [0.5]], "theta0": [0], "epsilon": 1,
                      "alpha": 0.05, "test_kind": "mixed"})")
              .find("/partition") != std::string::npos);
    CHECK(error_of(R"({"dictionary": [[1.0], [0.5]], "theta0": [0], "epsilon": 1,
                      "alpha": 0.05, "test_kind": "mixed",
                      "partition": {"homogeneous": [0, 5], "complement": [1]}})")
              .find("/partition/homogeneous/1") != std::string::npos);
}

TEST_CASE("parse_config: alternatives variants") {
    const ExperimentConfig explicit_alts = parse_config(R"({
      "dictionary": [[1.0]], "theta0": [0], "epsilon": 1, "alpha": 0.05,
      "test_kind": "single", "alternatives": [[1.5], [2.5]]
    })");
    CHECK(explicit_alts.alternatives.kind == AlternativesSpec::Kind::explicit_list);
    CHECK(explicit_alts.alternatives.explicit_list.size() == 2);

    const ExperimentConfig boundary = parse_config(R"({
      "dictionary": [[1.0]], "theta0": [0], "epsilon": 1, "alpha": 0.05,
      "test_kind": "single",
      "alternatives": {"theta1_boundary": {"count": 5, "constant": 2.5}}
    })");
    CHECK(boundary.alternatives.kind == AlternativesSpec::Kind::boundary);
    CHECK(boundary.alternatives.count == 5);
    CHECK(boundary.alternatives.constant == 2.5);

    const ExperimentConfig adversary = parse_config(R"({
      "dictionary": [[1.0], [0.5]], "theta0": [4], "epsilon": 1, "alpha": 0.05,
      "test_kind": "min",
      "alternatives": {"adversary": {"tau": 0.1, "gamma": 0.5, "b_true": 0, "b_bar": 1,
                                      "draws": 10}}
    })");
    CHECK(adversary.alternatives.kind == AlternativesSpec::Kind::adversary);
    CHECK(adversary.alternatives.has_tau);
    CHECK(adversary.alternatives.has_gamma);
    CHECK(adversary.alternatives.draws == 10);

    // tau may be omitted at parse time (the adversary command rejects later,
    // with its own message), but indexes must be valid.
    const std::string bad = R"({
      "dictionary": [[1.0], [0.5]], "theta0": [4], "epsilon": 1, "alpha": 0.05,
      "test_kind": "min",
      "alternatives": {"adversary": {"b_true": 0, "b_bar": 7}}
    })";
    CHECK(error_of(bad).find("/alternatives/adversary/b_bar") != std::string::npos);
}

TEST_CASE("parse_config: gate and output blocks") {
    const ExperimentConfig cfg = parse_config(R"({
      "dictionary": [[1.0]], "theta0": [0], "epsilon": 1, "alpha": 0.05,
      "test_kind": "single",
      "gate": {"type1": 0.05},
      "output": {"csv": "rows.csv", "svg": "curve.svg"},
      "scaling_grid": [0, 1, 2],
      "coupling": "common_random_numbers",
      "b_true": [0]
    })");
    REQUIRE(cfg.gate.type1_bound.has_value());
    CHECK(*cfg.gate.type1_bound == 0.05);
    CHECK_FALSE(cfg.gate.type2_bound.has_value());
    CHECK(cfg.output.csv == "rows.csv");
    CHECK(cfg.output.svg == "curve.svg");
    CHECK(cfg.scaling_grid == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(cfg.coupling == Coupling::common_random_numbers);
    CHECK(cfg.true_indices == std::vector<std::size_t>{0});
}

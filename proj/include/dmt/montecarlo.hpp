#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dmt/model.hpp"
#include "dmt/rates.hpp"
#include "dmt/stats.hpp"
#include "dmt/testing.hpp"

namespace dmt {

enum class TestKind { single, bonferroni, min_aggregate, mixed, adaptive };

// Noise coupling across dictionary members within one replication.
enum class Coupling { independent, common_random_numbers };

// One simulated (alternative, true spectrum) cell.
struct CellEstimate {
    std::size_t b_index = 0;
    std::size_t alt_index = 0;  // 0 for null-hypothesis runs
    std::uint64_t events = 0;   // rejections under a null run, acceptances under an alternative
    std::uint64_t replications = 0;
    double rate = 0.0;
    stats::BinomialInterval ci;  // Clopper-Pearson, 99%
};

// Worst-case Monte Carlo error estimate across cells. `rate` is the maximum
// cell rate (the empirical counterpart of the worst-case error), with the
// event count and confidence interval of that worst cell; `events` counts
// rejections for Type I runs and acceptances for Type II runs, so
// rate == events / replications always holds.
struct ErrorEstimate {
    double rate = 0.0;
    std::uint64_t events = 0;
    std::uint64_t replications = 0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t seed = 0;
    std::map<std::size_t, double> per_b_rates;  // worst rate per dictionary index
    std::vector<CellEstimate> cells;
};

// A full experiment description. Replication i of cell (alt a, spectrum b)
// draws its noise from stream (a * |B| + b) * N + i under independent
// coupling and from stream a * N + i under common random numbers, so results
// are bit-identical for any thread count or schedule.
struct ExperimentPlan {
    TestKind test_kind = TestKind::single;
    Dictionary dict;
    SignalSequence theta0;
    std::vector<SignalSequence> alternatives;  // required for Type II runs
    std::optional<Partition> partition;        // required for the mixed test
    double epsilon = 0.0;
    double alpha = 0.05;
    double beta = 0.05;
    std::uint64_t replications = 0;  // N >= 100
    std::uint64_t seed = 0;
    Coupling coupling = Coupling::independent;
    std::vector<std::size_t> true_indices;  // empty means: every member

    void validate(bool needs_alternatives) const;
};

// Worst-case Type I error: for each true spectrum, simulate under
// (theta0, b) and record the rejection rate of the configured test.
ErrorEstimate estimate_type1(const ExperimentPlan& plan);

// Worst-case Type II error over the alternative grid: for each
// (alternative, b) cell, simulate under (theta, b) and record the acceptance
// rate; the estimate is the maximum over the grid (an empirical sup, which
// lower-bounds the true sup).
ErrorEstimate estimate_type2(const ExperimentPlan& plan);

struct ConcentrationReport {
    bool pass = false;
    double exceedance = 0.0;
    std::uint64_t exceed_count = 0;
    std::uint64_t replications = 0;
    double bound = 0.0;      // e^-x
    double threshold = 0.0;  // E[T] + deviation terms
    double analytic_mean = 0.0;
    double empirical_mean = 0.0;
    stats::BinomialInterval ci;
};

// Tail check for T = sum_k (mu_k + eps b_k^-1 xi_k)^2: empirical probability
// that T - E[T] exceeds
//   2 sqrt(x) sqrt(eps^4 sum b^-4 + 2 eps^2 sum b^-2 mu^2) + 2 x eps^2 max b^-2
// compared against e^-x. Passes iff exceedance <= e^-x + 3 standard errors.
ConcentrationReport concentration_check(const OperatorSpectrum& b, const SignalSequence& mu_shift,
                                        double epsilon, double x, std::uint64_t replications,
                                        std::uint64_t seed);

// Type II estimates along theta(s) = theta0 + s * (alternative - theta0) for
// each scale in the grid, applied to every alternative of the plan.
std::vector<std::pair<double, ErrorEstimate>> power_curve(const ExperimentPlan& plan,
                                                          const std::vector<double>& scaling_grid);

namespace detail {
// Worker cap: DMT_THREADS when set, otherwise hardware concurrency, clamped
// to [1, 64].
unsigned worker_count();
}

}  // namespace dmt

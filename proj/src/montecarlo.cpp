#include "dmt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>

#include "dmt/rng.hpp"

namespace dmt {

namespace detail {

unsigned worker_count() {
    if (const char* env = std::getenv("DMT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 64));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 64u);
}

// Counts events over [0, n). Chunked across workers; integer counts make the
// reduction schedule-independent.
std::uint64_t parallel_count(std::uint64_t n, const std::function<bool(std::uint64_t)>& event) {
    const unsigned workers = std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(n, 1));
    if (workers <= 1 || n < 256) {
        std::uint64_t count = 0;
        for (std::uint64_t i = 0; i < n; ++i) count += event(i) ? 1 : 0;
        return count;
    }
    std::vector<std::uint64_t> partial(workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::uint64_t lo = w * chunk;
            const std::uint64_t hi = std::min(n, lo + chunk);
            std::uint64_t local = 0;
            for (std::uint64_t i = lo; i < hi; ++i) local += event(i) ? 1 : 0;
            partial[w] = local;
        });
    }
    for (auto& t : pool) t.join();
    std::uint64_t count = 0;
    for (std::uint64_t c : partial) count += c;
    return count;
}

}  // namespace detail

void ExperimentPlan::validate(bool needs_alternatives) const {
    detail::require_same_length(dict.common_length(), theta0.size(), "ExperimentPlan");
    if (!(epsilon > 0.0)) throw ConfigError("ExperimentPlan: epsilon must be > 0");
    if (replications < 100) throw ConfigError("ExperimentPlan: need at least 100 replications");
    if (needs_alternatives && alternatives.empty()) {
        throw ConfigError("ExperimentPlan: Type II runs need at least one alternative");
    }
    for (const auto& alt : alternatives) {
        detail::require_same_length(alt.size(), theta0.size(), "ExperimentPlan alternative");
    }
    if (test_kind == TestKind::mixed) {
        if (!partition.has_value()) {
            throw ConfigError("ExperimentPlan: the mixed test needs a partition");
        }
        validate_partition(dict, *partition);
    }
    for (std::size_t i : true_indices) {
        if (i >= dict.size()) {
            throw ConfigError("ExperimentPlan: true index " + std::to_string(i) +
                              " outside the dictionary");
        }
    }
}

namespace {

int run_configured_test(const ExperimentPlan& plan, const Observation& y) {
    switch (plan.test_kind) {
        case TestKind::single:
            break;  // handled per-cell: the candidate is the cell's spectrum
        case TestKind::bonferroni:
            return bonferroni_test(plan.alpha, plan.dict, plan.theta0, plan.epsilon, y).decision;
        case TestKind::min_aggregate:
            return min_test(plan.alpha, plan.dict, plan.theta0, plan.epsilon, y).decision;
        case TestKind::mixed:
            return mixed_test(plan.alpha, plan.dict, *plan.partition, plan.theta0, plan.epsilon, y)
                .decision;
        case TestKind::adaptive:
            return adaptive_test(plan.alpha, plan.dict, plan.theta0, plan.epsilon, y).decision;
    }
    throw ConfigError("ExperimentPlan: test kind has no dictionary-level aggregate");
}

std::vector<std::size_t> effective_true_indices(const ExperimentPlan& plan) {
    if (!plan.true_indices.empty()) return plan.true_indices;
    std::vector<std::size_t> all(plan.dict.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
}

std::uint64_t cell_stream(const ExperimentPlan& plan, std::size_t alt_index, std::size_t b_index,
                          std::uint64_t i) {
    if (plan.coupling == Coupling::common_random_numbers) {
        return static_cast<std::uint64_t>(alt_index) * plan.replications + i;
    }
    return (static_cast<std::uint64_t>(alt_index) * plan.dict.size() + b_index) *
               plan.replications +
           i;
}

// Runs one (alternative, spectrum) cell, counting rejections or acceptances.
CellEstimate run_cell(const ExperimentPlan& plan, const SignalSequence& theta,
                      std::size_t alt_index, std::size_t b_index, bool count_rejections) {
    const OperatorSpectrum& b = plan.dict[b_index];
    const NoiseModel noise{plan.epsilon, plan.seed};
    // Thresholds do not depend on the data; precompute the single-test spec.
    std::optional<TestSpec> single_spec;
    if (plan.test_kind == TestKind::single) {
        single_spec = make_single_test(plan.alpha, b, plan.theta0, plan.epsilon);
    }
    const auto event = [&](std::uint64_t i) -> bool {
        const Observation y =
            sample_observation(theta, b, noise, cell_stream(plan, alt_index, b_index, i));
        const int decision = single_spec ? run_single(*single_spec, y).decision
                                         : run_configured_test(plan, y);
        return count_rejections ? decision == 1 : decision == 0;
    };
    CellEstimate cell;
    cell.b_index = b_index;
    cell.alt_index = alt_index;
    cell.replications = plan.replications;
    cell.events = detail::parallel_count(plan.replications, event);
    cell.rate = static_cast<double>(cell.events) / static_cast<double>(plan.replications);
    cell.ci = stats::clopper_pearson(cell.events, cell.replications);
    return cell;
}

ErrorEstimate summarize(const ExperimentPlan& plan, std::vector<CellEstimate> cells) {
    ErrorEstimate est;
    est.seed = plan.seed;
    est.replications = plan.replications;
    est.cells = std::move(cells);
    const CellEstimate* worst = nullptr;
    for (const CellEstimate& c : est.cells) {
        auto [it, inserted] = est.per_b_rates.try_emplace(c.b_index, c.rate);
        if (!inserted) it->second = std::max(it->second, c.rate);
        if (worst == nullptr || c.rate > worst->rate) worst = &c;
    }
    if (worst != nullptr) {
        est.rate = worst->rate;
        est.events = worst->events;
        est.ci_low = worst->ci.low;
        est.ci_high = worst->ci.high;
    }
    return est;
}

}  // namespace

ErrorEstimate estimate_type1(const ExperimentPlan& plan) {
    plan.validate(false);
    std::vector<CellEstimate> cells;
    for (std::size_t b_index : effective_true_indices(plan)) {
        cells.push_back(run_cell(plan, plan.theta0, 0, b_index, /*count_rejections=*/true));
    }
    return summarize(plan, std::move(cells));
}

ErrorEstimate estimate_type2(const ExperimentPlan& plan) {
    plan.validate(true);
    std::vector<CellEstimate> cells;
    const std::vector<std::size_t> true_idx = effective_true_indices(plan);
    for (std::size_t a = 0; a < plan.alternatives.size(); ++a) {
        for (std::size_t b_index : true_idx) {
            cells.push_back(
                run_cell(plan, plan.alternatives[a], a, b_index, /*count_rejections=*/false));
        }
    }
    return summarize(plan, std::move(cells));
}

ConcentrationReport concentration_check(const OperatorSpectrum& b, const SignalSequence& mu_shift,
                                        double epsilon, double x, std::uint64_t replications,
                                        std::uint64_t seed) {
    detail::require_same_length(b.size(), mu_shift.size(), "concentration_check");
    if (!(x > 0.0)) throw DomainError("concentration_check: x must be > 0");
    if (!(epsilon > 0.0)) throw DomainError("concentration_check: epsilon must be > 0");
    if (replications == 0) throw DomainError("concentration_check: need replications");

    const double eps2 = epsilon * epsilon;
    const double sum2 = sum_inverse_square(b);
    const double sum4 = sum_inverse_fourth(b);
    double mu_weighted = 0.0;  // sum b^-2 mu^2
    double max_inv_sq = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        mu_weighted += mu_shift[k] * mu_shift[k] / (b[k] * b[k]);
        max_inv_sq = std::max(max_inv_sq, 1.0 / (b[k] * b[k]));
    }
    ConcentrationReport report;
    report.replications = replications;
    report.analytic_mean = mu_shift.squared_norm() + eps2 * sum2;
    const double deviation = 2.0 * std::sqrt(x) *
                                 std::sqrt(eps2 * eps2 * sum4 + 2.0 * eps2 * mu_weighted) +
                             2.0 * x * eps2 * max_inv_sq;
    report.threshold = report.analytic_mean + deviation;
    report.bound = std::exp(-x);

    const std::size_t m = b.size();
    const auto statistic = [&](std::uint64_t i) {
        const std::uint64_t key = rng::stream_key(seed, i);
        double t = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double v = mu_shift[k] + epsilon / b[k] * rng::normal_at(key, k);
            t += v * v;
        }
        return t;
    };
    report.exceed_count =
        detail::parallel_count(replications, [&](std::uint64_t i) { return statistic(i) > report.threshold; });
    // Deterministic serial pass for the empirical mean (cheap relative to the
    // decision pass and independent of the thread count).
    double mean = 0.0;
    for (std::uint64_t i = 0; i < replications; ++i) mean += statistic(i);
    report.empirical_mean = mean / static_cast<double>(replications);

    report.exceedance =
        static_cast<double>(report.exceed_count) / static_cast<double>(replications);
    report.ci = stats::clopper_pearson(report.exceed_count, replications);
    const double se = stats::binomial_standard_error(report.exceed_count, replications);
    report.pass = report.exceedance <= report.bound + 3.0 * se;
    return report;
}

std::vector<std::pair<double, ErrorEstimate>> power_curve(
    const ExperimentPlan& plan, const std::vector<double>& scaling_grid) {
    plan.validate(true);
    std::vector<std::pair<double, ErrorEstimate>> table;
    table.reserve(scaling_grid.size());
    for (double s : scaling_grid) {
        ExperimentPlan scaled = plan;
        scaled.alternatives.clear();
        for (const SignalSequence& alt : plan.alternatives) {
            std::vector<double> v(alt.size());
            for (std::size_t k = 0; k < alt.size(); ++k) {
                v[k] = plan.theta0[k] + s * (alt[k] - plan.theta0[k]);
            }
            scaled.alternatives.emplace_back(std::move(v));
        }
        table.emplace_back(s, estimate_type2(scaled));
    }
    return table;
}

}  // namespace dmt

#include "dmt/testing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dmt {

namespace {

// Margin aggregation keeps the verdict invariant (decision == margin > 0)
// valid for max- and min-combined tests alike.
TestVerdict aggregate_verdict(std::string name, std::vector<CandidateResult> parts,
                              double margin) {
    TestVerdict v;
    v.decision = margin > 0.0 ? 1 : 0;
    v.statistic = margin;
    v.threshold = 0.0;
    v.test_name = std::move(name);
    v.per_candidate = std::move(parts);
    return v;
}

CandidateResult run_candidate(double level, const Dictionary& dict, std::size_t index,
                              const SignalSequence& theta0, double epsilon,
                              const Observation& y) {
    const TestSpec spec = make_single_test(level, dict[index], theta0, epsilon);
    CandidateResult r;
    r.candidate_index = index;
    r.level = level;
    r.statistic = test_statistic(y, dict[index], theta0);
    r.threshold = spec.threshold;
    r.decision = r.statistic > r.threshold ? 1 : 0;
    return r;
}

double max_margin(const std::vector<CandidateResult>& parts) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : parts) m = std::max(m, p.statistic - p.threshold);
    return m;
}

double min_margin(const std::vector<CandidateResult>& parts) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : parts) m = std::min(m, p.statistic - p.threshold);
    return m;
}

}  // namespace

double test_statistic(const Observation& y, const OperatorSpectrum& candidate,
                      const SignalSequence& theta0) {
    detail::require_same_length(y.size(), candidate.size(), "test_statistic");
    detail::require_same_length(candidate.size(), theta0.size(), "test_statistic");
    double s = 0.0;
    for (std::size_t k = 0; k < candidate.size(); ++k) {
        const double r = y.y[k] / candidate[k] - theta0[k];
        s += r * r;
    }
    return s;
}

TestSpec make_single_test(double alpha, const OperatorSpectrum& candidate,
                          const SignalSequence& theta0, double epsilon, double threshold_offset) {
    detail::require_same_length(candidate.size(), theta0.size(), "make_single_test");
    if (!(epsilon > 0.0)) throw DomainError("make_single_test: epsilon must be > 0");
    const double eps2 = epsilon * epsilon;
    TestSpec spec{alpha, candidate, theta0, epsilon, 0.0, threshold_offset};
    spec.threshold = eps2 * sum_inverse_square(candidate) +
                     threshold_constant(alpha) * eps2 * std::sqrt(sum_inverse_fourth(candidate)) +
                     threshold_offset;
    return spec;
}

TestVerdict run_single(const TestSpec& spec, const Observation& y) {
    TestVerdict v;
    v.statistic = test_statistic(y, spec.candidate, spec.theta0);
    v.threshold = spec.threshold;
    v.decision = v.statistic > v.threshold ? 1 : 0;
    v.test_name = "single";
    return v;
}

TestVerdict bonferroni_test(double alpha, const Dictionary& dict, const SignalSequence& theta0,
                            double epsilon, const Observation& y) {
    std::vector<CandidateResult> parts;
    parts.reserve(dict.size());
    for (std::size_t i = 0; i < dict.size(); ++i) {
        parts.push_back(run_candidate(alpha / 2.0, dict, i, theta0, epsilon, y));
    }
    const double margin = max_margin(parts);
    return aggregate_verdict("bonferroni", std::move(parts), margin);
}

TestVerdict min_test(double alpha, const Dictionary& dict, const SignalSequence& theta0,
                     double epsilon, const Observation& y) {
    std::vector<CandidateResult> parts;
    parts.reserve(dict.size());
    for (std::size_t i = 0; i < dict.size(); ++i) {
        parts.push_back(run_candidate(alpha, dict, i, theta0, epsilon, y));
    }
    const double margin = min_margin(parts);
    return aggregate_verdict("min", std::move(parts), margin);
}

void validate_partition(const Dictionary& dict, const Partition& partition) {
    std::vector<int> seen(dict.size(), 0);
    for (std::size_t i : partition.homogeneous) {
        if (i >= dict.size() || seen[i]++) {
            throw ConfigError("partition: invalid or repeated index " + std::to_string(i));
        }
    }
    for (std::size_t i : partition.complement) {
        if (i >= dict.size() || seen[i]++) {
            throw ConfigError("partition: invalid or repeated index " + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < dict.size(); ++i) {
        if (!seen[i]) {
            throw ConfigError("partition: dictionary index " + std::to_string(i) + " not covered");
        }
    }
}

TestVerdict mixed_test(double alpha, const Dictionary& dict, const Partition& partition,
                       const SignalSequence& theta0, double epsilon, const Observation& y) {
    validate_partition(dict, partition);
    std::vector<CandidateResult> parts;
    double margin = std::numeric_limits<double>::infinity();
    if (!partition.homogeneous.empty()) {
        const double level = alpha / static_cast<double>(partition.homogeneous.size());
        std::vector<CandidateResult> hom;
        for (std::size_t i : partition.homogeneous) {
            hom.push_back(run_candidate(level, dict, i, theta0, epsilon, y));
        }
        margin = std::min(margin, max_margin(hom));
        parts.insert(parts.end(), hom.begin(), hom.end());
    }
    for (std::size_t i : partition.complement) {
        CandidateResult r = run_candidate(alpha, dict, i, theta0, epsilon, y);
        margin = std::min(margin, r.statistic - r.threshold);
        parts.push_back(std::move(r));
    }
    return aggregate_verdict("mixed", std::move(parts), margin);
}

TestVerdict adaptive_test(double alpha, const Dictionary& dict, const SignalSequence& theta0,
                          double epsilon, const Observation& y) {
    const std::vector<Partition> collection = find_homogeneous_partitions(dict, theta0, epsilon);
    const double level = alpha / static_cast<double>(collection.size());
    double margin = -std::numeric_limits<double>::infinity();
    std::vector<CandidateResult> parts;
    for (const Partition& p : collection) {
        const TestVerdict v = mixed_test(level, dict, p, theta0, epsilon, y);
        margin = std::max(margin, v.statistic);
    }
    return aggregate_verdict("adaptive", std::move(parts), margin);
}

}  // namespace dmt

#pragma once

#include <string>
#include <vector>

#include "dmt/model.hpp"
#include "dmt/rates.hpp"

namespace dmt {

// A single chi-square-type test against one candidate spectrum.
struct TestSpec {
    double alpha = 0.0;
    OperatorSpectrum candidate;
    SignalSequence theta0;
    double epsilon = 0.0;
    double threshold = 0.0;  // eps^2 sum(b^-2) + c_alpha eps^2 sqrt(sum(b^-4)) + offset
    double threshold_offset = 0.0;
};

// Outcome of a per-candidate test inside an aggregate.
struct CandidateResult {
    std::size_t candidate_index = 0;
    double level = 0.0;      // per-test level used inside the aggregate
    double statistic = 0.0;  // observed T for this candidate
    double threshold = 0.0;
    int decision = 0;  // 1 = reject
};

// Verdict of any test. For a single test, `statistic`/`threshold` are the
// observed T and its threshold. For aggregates they hold the deciding margin
// (max or min over per-candidate statistic - threshold) against a zero
// threshold, so `decision == 1` iff `statistic > threshold` always holds.
struct TestVerdict {
    int decision = 0;
    double statistic = 0.0;
    double threshold = 0.0;
    std::string test_name;
    std::vector<CandidateResult> per_candidate;  // empty for single tests
};

// T = sum_k (candidate_k^-1 y_k - theta0_k)^2.
double test_statistic(const Observation& y, const OperatorSpectrum& candidate,
                      const SignalSequence& theta0);

// Builds the test at level alpha in (0,1] against `candidate`. The optional
// offset shifts the threshold; it is an experimental knob with no error
// guarantee attached.
TestSpec make_single_test(double alpha, const OperatorSpectrum& candidate,
                          const SignalSequence& theta0, double epsilon,
                          double threshold_offset = 0.0);

// Rejects iff the statistic strictly exceeds the threshold; ties accept.
TestVerdict run_single(const TestSpec& spec, const Observation& y);

// Max-aggregation over the dictionary, each candidate tested at level alpha/2.
TestVerdict bonferroni_test(double alpha, const Dictionary& dict, const SignalSequence& theta0,
                            double epsilon, const Observation& y);

// Min-aggregation over the dictionary, each candidate tested at level alpha.
TestVerdict min_test(double alpha, const Dictionary& dict, const SignalSequence& theta0,
                     double epsilon, const Observation& y);

// Aggregate for a partitioned dictionary: the homogeneous part is
// max-aggregated at level alpha/|B_H|, the complement min-aggregated at level
// alpha, and the two branches combined by min. An empty branch drops out.
TestVerdict mixed_test(double alpha, const Dictionary& dict, const Partition& partition,
                       const SignalSequence& theta0, double epsilon, const Observation& y);

// Runs the mixed test at level alpha/|collection| for every homogeneous
// subset of the dictionary and max-aggregates the decisions.
TestVerdict adaptive_test(double alpha, const Dictionary& dict, const SignalSequence& theta0,
                          double epsilon, const Observation& y);

// Validates that `partition` is a disjoint cover of {0..dict.size()-1}.
void validate_partition(const Dictionary& dict, const Partition& partition);

}  // namespace dmt

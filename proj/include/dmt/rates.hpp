#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dmt/model.hpp"

namespace dmt {

// x_gamma = ln(1/gamma) for gamma in (0,1].
double log_inverse_level(double gamma);

// Multiplier c_alpha = 1 + 2(2*sqrt(x_alpha) + x_alpha) applied to the
// fluctuation term of the chi-square test threshold. alpha in (0,1].
double threshold_constant(double alpha);

double sum_inverse_square(const OperatorSpectrum& b);  // sum_k b_k^-2
double sum_inverse_fourth(const OperatorSpectrum& b);  // sum_k b_k^-4

// rho_{eps,b} = eps^2 * sqrt(sum_j b_j^-4). Separation conditions throughout
// the library compare squared distances against the square of this value.
double separation_radius(const OperatorSpectrum& b, double epsilon);

// Weighted squared image difference at the null:
// sum_k b1_k^-2 (b1_k - b2_k)^2 theta0_k^2. Asymmetric in (b1, b2).
double divergence(const SignalSequence& theta0, const OperatorSpectrum& b1,
                  const OperatorSpectrum& b2);

// The inner half-power term of the C1 constant is typographically ambiguous
// in its source; `verbatim` is the default reading, `alternate` moves the
// sqrt(2) factor inside the half power.
enum class C1Parse { verbatim, alternate };

// C1_{alpha,beta}: separation constant of the Bonferroni aggregate's power
// guarantee. Verbatim parse:
//   sqrt(2 x_beta) + sqrt(2 (x_{alpha/2} + x_beta) + sqrt(2) * sqrt(sqrt(x_{alpha/2}) + sqrt(x_beta)))
double bonferroni_separation_constant(double alpha, double beta,
                                      C1Parse parse = C1Parse::verbatim);

// C_ab = 1 + 4 (1 - alpha - beta)^2, the two-point total-variation budget of
// the lower-bound argument.
double aggregation_constant(double alpha, double beta);

// All explicit constants for a given pair of levels.
struct ConstantsBundle {
    double alpha = 0.0;
    double beta = 0.0;
    double x_alpha = 0.0;        // ln(1/alpha)
    double x_beta = 0.0;         // ln(1/beta)
    double c_alpha = 0.0;        // threshold constant at alpha
    double C1 = 0.0;             // bonferroni separation constant
    double C_ab = 0.0;           // 1 + 4(1 - alpha - beta)^2
    std::optional<double> c1;    // (2 ln C_ab)^{1/4}; absent when alpha + beta >= 1
    double delta = 0.0;          // minimizer of C2 over (0, 1/(4 x_{beta/2}))
    double C2 = 0.0;             // min-aggregate separation constant at delta
};

// Evaluates the constant formulas at (alpha, beta); delta is found by
// golden-section search of C2(delta) to 1e-8 relative tolerance.
ConstantsBundle compute_constants(double alpha, double beta, C1Parse parse = C1Parse::verbatim);

// C2(delta) = (c_alpha + 2 sqrt(x_{beta/2}) (1 + 1/sqrt(delta))) /
//             (1 - 2 sqrt(delta) sqrt(x_{beta/2})), valid for
// 0 < delta < 1/(4 x_{beta/2}).
double min_aggregate_separation_constant(double alpha, double beta, double delta);

// Pairwise homogeneity diagnostics of a dictionary at the null signal.
struct RegimeReport {
    std::vector<std::vector<double>> pairwise_divergence;  // D(b_i, b_j)
    std::vector<std::vector<double>> pairwise_ratio;       // D(b_i, b_j) / rho^2_{eps,b_i}
    bool homogeneous = false;            // condition holds for every ordered pair
    bool homogeneous_unordered = false;  // holds in at least one order per pair
    std::pair<std::size_t, std::size_t> worst_pair{0, 0};  // argmax of the ratio
    double worst_ratio = 0.0;
};

RegimeReport homogeneity_report(const Dictionary& dict, const SignalSequence& theta0,
                                double epsilon);

// Index partition of a dictionary into a homogeneous part and its complement.
struct Partition {
    std::vector<std::size_t> homogeneous;  // B_H indices, ascending
    std::vector<std::size_t> complement;   // remaining indices, ascending
};

// Enumerates every nonempty subset whose members are pairwise homogeneous at
// the null (ordered-pair condition), paired with its complement. Sorted by
// subset size descending, ties by lexicographic member index. Dictionaries
// beyond 20 members are rejected.
std::vector<Partition> find_homogeneous_partitions(const Dictionary& dict,
                                                   const SignalSequence& theta0, double epsilon);

inline constexpr std::size_t kMaxPartitionDictionarySize = 20;

}  // namespace dmt

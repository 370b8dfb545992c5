#pragma once

#include <cstdint>
#include <vector>

#include "dmt/model.hpp"
#include "dmt/rates.hpp"

namespace dmt {

// Inputs for separation-set membership: the alternative, the null, the
// dictionary, which member generated the data, and the radius constant.
struct SeparationQuery {
    SignalSequence theta;
    SignalSequence theta0;
    Dictionary dict;
    std::size_t true_index = 0;
    double epsilon = 0.0;
    double radius_constant = 0.0;

    void validate() const;
};

// ||theta - theta0||^2 >= C * rho^2_{eps,b} with b the true member.
// Non-strict at the boundary.
bool separated_from_null(const SeparationQuery& q);

// For every other candidate bt: sum_k bt_k^-2 (b_k theta_k - bt_k theta0_k)^2
// >= C * rho^2_{eps,bt}. Vacuously true for a singleton dictionary.
bool identifiable_against_others(const SeparationQuery& q);

// Partitioned membership: union over the homogeneous part at C_hom intersected
// with the intersection over the complement at C_het, each constraint being
// sum_k cand_k^-2 (b theta - cand theta0)_k^2 >= C * rho^2_{eps,cand}.
// An empty homogeneous part makes the union empty, hence membership false.
bool separated_for_partition(const SignalSequence& theta, const SignalSequence& theta0,
                             const Dictionary& dict, std::size_t true_index,
                             const Partition& partition, double epsilon, double c_hom,
                             double c_het);

// Calibration of the two-point prior used for testing lower bounds.
struct AdversaryConfig {
    double alpha = 0.0;
    double beta = 0.0;
    double tau = 0.0;    // perturbation scale in [0,1]
    double gamma = 0.0;  // splitting parameter in (0,1) of the feasibility bound
    double C2_observed = 0.0;
    double R_squared = 0.0;  // sqrt(ln C_ab) * eps^2 sqrt(sum_j b_bar_j^-4)
};

struct AdversarialDraw {
    SignalSequence theta;
    std::vector<double> signs;  // +/-1 per coordinate
    AdversaryConfig config;
};

// Draws theta with b_k theta_k = bbar_k theta0_k + sign_k * tau * R * bbar_k^-1
// / sqrt(sum_j bbar_j^-4), signs Rademacher from (seed, stream_id), and
// R^2 = sqrt(ln C_ab) * eps^2 sqrt(sum_j bbar_j^-4), the largest radius that
// keeps the prior's likelihood-ratio second moment below C_ab for tau <= 1.
// Requires alpha + beta < 1.
AdversarialDraw draw_adversarial_signal(const SignalSequence& theta0, const OperatorSpectrum& b,
                                        const OperatorSpectrum& b_bar, double epsilon,
                                        double alpha, double beta, double tau, std::uint64_t seed,
                                        std::uint64_t stream_id = 0);

// Same construction with an explicit sign vector; bit k of `sign_mask` set
// means +1 for coordinate k. Used to enumerate the prior support exactly.
AdversarialDraw adversarial_signal_for_signs(const SignalSequence& theta0,
                                             const OperatorSpectrum& b,
                                             const OperatorSpectrum& b_bar, double epsilon,
                                             double alpha, double beta, double tau,
                                             std::uint64_t sign_mask);

// Second moment of the prior's likelihood ratio under the null candidate:
// product over k of cosh(lambda_k^2) with
// lambda_k^2 = tau^2 R^2 bbar_k^-2 / (eps^2 sum_j bbar_j^-4).
double likelihood_ratio_second_moment(const SignalSequence& theta0, const OperatorSpectrum& b_bar,
                                      double epsilon, double alpha, double beta, double tau);

struct MomentEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t replications = 0;
};

// Monte Carlo estimate of the same second moment. The outer loop samples
// observations under (theta0, b_bar); the expectation over signs is exact
// (full 2^m enumeration) for m <= 20 and sampled with `inner_replications`
// otherwise. The likelihood ratio is evaluated from the Gaussian densities of
// signals reconstructed through `b`, so the estimate exercises the whole draw
// pipeline rather than the closed form.
MomentEstimate likelihood_ratio_second_moment_mc(const SignalSequence& theta0,
                                                 const OperatorSpectrum& b,
                                                 const OperatorSpectrum& b_bar, double epsilon,
                                                 double alpha, double beta, double tau,
                                                 std::uint64_t outer_replications,
                                                 std::uint64_t seed,
                                                 std::uint64_t inner_replications = 4096);

inline constexpr std::size_t kMaxExactSignEnumeration = 20;

struct FeasibilityCertificate {
    bool feasible = false;
    double margin = 0.0;     // lhs - C1
    double lhs = 0.0;        // (1-gamma) C2 + (1-1/gamma) tau^2 sqrt(ln C_ab)
    double c1_constant = 0.0;
    double tau = 0.0;
    double gamma = 0.0;
};

// Evaluates (1-gamma) C2 + (1-1/gamma) tau^2 sqrt(ln C_ab) > C1.
FeasibilityCertificate lower_bound_feasibility(double C2_observed, double alpha, double beta,
                                               double tau, double gamma);

// Scans gamma in {0.05,...,0.95} x tau in {0.01,...,1.00} and returns the
// certificate with the largest margin.
FeasibilityCertificate lower_bound_feasibility_search(double C2_observed, double alpha,
                                                      double beta);

}  // namespace dmt

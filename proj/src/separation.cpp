#include "dmt/separation.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "dmt/rng.hpp"
#include "dmt/testing.hpp"

namespace dmt {

namespace {

// sum_k cand_k^-2 (b_k theta_k - cand_k theta0_k)^2
double image_distance_sq(const SignalSequence& theta, const SignalSequence& theta0,
                         const OperatorSpectrum& b, const OperatorSpectrum& cand) {
    double s = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        const double r = (b[k] * theta[k] - cand[k] * theta0[k]) / cand[k];
        s += r * r;
    }
    return s;
}

double rho_squared(const OperatorSpectrum& b, double epsilon) {
    const double rho = separation_radius(b, epsilon);
    return rho * rho;
}

void require_adversary_levels(double alpha, double beta, double tau) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
        throw DomainError("adversary: alpha and beta must lie in (0,1)");
    }
    if (alpha + beta >= 1.0) {
        throw DomainError("adversary: alpha + beta must be < 1 (the prior radius is undefined otherwise)");
    }
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw DomainError("adversary: tau must lie in [0,1]");
    }
}

double log_c_ab(double alpha, double beta) {
    return std::log(aggregation_constant(alpha, beta));
}

}  // namespace

void SeparationQuery::validate() const {
    detail::require_same_length(theta.size(), theta0.size(), "SeparationQuery");
    detail::require_same_length(theta.size(), dict.common_length(), "SeparationQuery");
    if (true_index >= dict.size()) {
        throw DomainError("SeparationQuery: true_index out of range");
    }
    if (!(epsilon > 0.0)) throw DomainError("SeparationQuery: epsilon must be > 0");
    if (!(radius_constant > 0.0)) throw DomainError("SeparationQuery: C must be > 0");
}

bool separated_from_null(const SeparationQuery& q) {
    q.validate();
    double dist = 0.0;
    for (std::size_t k = 0; k < q.theta.size(); ++k) {
        const double d = q.theta[k] - q.theta0[k];
        dist += d * d;
    }
    return dist >= q.radius_constant * rho_squared(q.dict[q.true_index], q.epsilon);
}

bool identifiable_against_others(const SeparationQuery& q) {
    q.validate();
    const OperatorSpectrum& b = q.dict[q.true_index];
    for (std::size_t i = 0; i < q.dict.size(); ++i) {
        if (i == q.true_index) continue;
        const double lhs = image_distance_sq(q.theta, q.theta0, b, q.dict[i]);
        if (lhs < q.radius_constant * rho_squared(q.dict[i], q.epsilon)) return false;
    }
    return true;
}

bool separated_for_partition(const SignalSequence& theta, const SignalSequence& theta0,
                             const Dictionary& dict, std::size_t true_index,
                             const Partition& partition, double epsilon, double c_hom,
                             double c_het) {
    detail::require_same_length(theta.size(), dict.common_length(), "separated_for_partition");
    detail::require_same_length(theta.size(), theta0.size(), "separated_for_partition");
    if (true_index >= dict.size()) {
        throw DomainError("separated_for_partition: true_index out of range");
    }
    validate_partition(dict, partition);
    const OperatorSpectrum& b = dict[true_index];

    // Union over the homogeneous part; empty union is the empty set.
    bool in_union = false;
    for (std::size_t i : partition.homogeneous) {
        const double lhs = image_distance_sq(theta, theta0, b, dict[i]);
        if (lhs >= c_hom * rho_squared(dict[i], epsilon)) {
            in_union = true;
            break;
        }
    }
    if (!in_union) return false;
    for (std::size_t i : partition.complement) {
        const double lhs = image_distance_sq(theta, theta0, b, dict[i]);
        if (lhs < c_het * rho_squared(dict[i], epsilon)) return false;
    }
    return true;
}

namespace {

AdversarialDraw build_adversarial_draw(const SignalSequence& theta0, const OperatorSpectrum& b,
                                       const OperatorSpectrum& b_bar, double epsilon,
                                       double alpha, double beta, double tau,
                                       std::vector<double> signs) {
    detail::require_same_length(theta0.size(), b.size(), "adversarial draw");
    detail::require_same_length(b.size(), b_bar.size(), "adversarial draw");
    require_adversary_levels(alpha, beta, tau);
    if (!(epsilon > 0.0)) throw DomainError("adversarial draw: epsilon must be > 0");
    for (double v : b.values()) {
        if (v < 1e-300) {
            throw DomainError("adversarial draw: b entries below 1e-300 are rejected");
        }
    }

    // R^2 = sqrt(ln C_ab) * eps^2 sqrt(sum b_bar^-4): the largest prior radius
    // keeping the likelihood-ratio second moment below C_ab for every tau in
    // [0,1].
    const double r_squared =
        std::sqrt(log_c_ab(alpha, beta)) * separation_radius(b_bar, epsilon);
    const double scale = tau * std::sqrt(r_squared) / std::sqrt(sum_inverse_fourth(b_bar));

    std::vector<double> theta(theta0.size());
    for (std::size_t k = 0; k < theta0.size(); ++k) {
        theta[k] = (b_bar[k] * theta0[k] + signs[k] * scale / b_bar[k]) / b[k];
    }

    AdversarialDraw draw{SignalSequence(std::move(theta)), std::move(signs), {}};
    draw.config.alpha = alpha;
    draw.config.beta = beta;
    draw.config.tau = tau;
    draw.config.R_squared = r_squared;
    return draw;
}

}  // namespace

AdversarialDraw draw_adversarial_signal(const SignalSequence& theta0, const OperatorSpectrum& b,
                                        const OperatorSpectrum& b_bar, double epsilon,
                                        double alpha, double beta, double tau, std::uint64_t seed,
                                        std::uint64_t stream_id) {
    const std::uint64_t key = rng::stream_key(seed, stream_id);
    std::vector<double> signs(theta0.size());
    for (std::size_t k = 0; k < theta0.size(); ++k) {
        signs[k] = rng::rademacher_at(key, k);
    }
    return build_adversarial_draw(theta0, b, b_bar, epsilon, alpha, beta, tau, std::move(signs));
}

AdversarialDraw adversarial_signal_for_signs(const SignalSequence& theta0,
                                             const OperatorSpectrum& b,
                                             const OperatorSpectrum& b_bar, double epsilon,
                                             double alpha, double beta, double tau,
                                             std::uint64_t sign_mask) {
    if (theta0.size() > 64) {
        throw DomainError("adversarial_signal_for_signs: sign masks cover at most 64 coordinates");
    }
    std::vector<double> signs(theta0.size());
    for (std::size_t k = 0; k < theta0.size(); ++k) {
        signs[k] = (sign_mask >> k & 1) ? 1.0 : -1.0;
    }
    return build_adversarial_draw(theta0, b, b_bar, epsilon, alpha, beta, tau, std::move(signs));
}

double likelihood_ratio_second_moment(const SignalSequence& theta0, const OperatorSpectrum& b_bar,
                                      double epsilon, double alpha, double beta, double tau) {
    detail::require_same_length(theta0.size(), b_bar.size(), "likelihood_ratio_second_moment");
    require_adversary_levels(alpha, beta, tau);
    if (!(epsilon > 0.0)) throw DomainError("likelihood_ratio_second_moment: epsilon must be > 0");
    const double sum4 = sum_inverse_fourth(b_bar);
    const double r_squared =
        std::sqrt(log_c_ab(alpha, beta)) * separation_radius(b_bar, epsilon);
    double prod = 1.0;
    for (double v : b_bar.values()) {
        const double lambda_sq = tau * tau * r_squared / (v * v) / (epsilon * epsilon * sum4);
        prod *= std::cosh(lambda_sq);
    }
    return prod;
}

MomentEstimate likelihood_ratio_second_moment_mc(const SignalSequence& theta0,
                                                 const OperatorSpectrum& b,
                                                 const OperatorSpectrum& b_bar, double epsilon,
                                                 double alpha, double beta, double tau,
                                                 std::uint64_t outer_replications,
                                                 std::uint64_t seed,
                                                 std::uint64_t inner_replications) {
    detail::require_same_length(theta0.size(), b.size(), "likelihood_ratio_second_moment_mc");
    detail::require_same_length(b.size(), b_bar.size(), "likelihood_ratio_second_moment_mc");
    require_adversary_levels(alpha, beta, tau);
    if (outer_replications == 0) {
        throw DomainError("likelihood_ratio_second_moment_mc: need at least one replication");
    }
    const std::size_t m = theta0.size();
    const bool exact_inner = m <= kMaxExactSignEnumeration;

    // log-density difference of y under (theta, b) vs (theta0, b_bar), with the
    // normalisation constants cancelling.
    const auto log_ratio = [&](const std::vector<double>& y, const SignalSequence& theta) {
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double null_res = y[k] - b_bar[k] * theta0[k];
            const double alt_res = y[k] - b[k] * theta[k];
            acc += (null_res * null_res - alt_res * alt_res) / (2.0 * epsilon * epsilon);
        }
        return acc;
    };

    // theta_k depends only on sign_k, so the two extreme draws carry the whole
    // 2^m support of the prior.
    std::optional<AdversarialDraw> plus;
    std::optional<AdversarialDraw> minus;
    if (exact_inner) {
        plus = adversarial_signal_for_signs(theta0, b, b_bar, epsilon, alpha, beta, tau,
                                            ~std::uint64_t{0});
        minus = adversarial_signal_for_signs(theta0, b, b_bar, epsilon, alpha, beta, tau, 0);
    }

    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<double> lp(m), lm(m);
    const NoiseModel noise{epsilon, seed};
    for (std::uint64_t i = 0; i < outer_replications; ++i) {
        const Observation obs = sample_observation(theta0, b_bar, noise, 2 * i);
        double lr = 0.0;
        if (exact_inner) {
            for (std::size_t k = 0; k < m; ++k) {
                const double null_res = obs.y[k] - b_bar[k] * theta0[k];
                const double rp = obs.y[k] - b[k] * plus->theta[k];
                const double rm = obs.y[k] - b[k] * minus->theta[k];
                lp[k] = std::exp((null_res * null_res - rp * rp) / (2.0 * epsilon * epsilon));
                lm[k] = std::exp((null_res * null_res - rm * rm) / (2.0 * epsilon * epsilon));
            }
            const std::uint64_t count = std::uint64_t{1} << m;
            for (std::uint64_t maskbits = 0; maskbits < count; ++maskbits) {
                double term = 1.0;
                for (std::size_t k = 0; k < m; ++k) {
                    term *= (maskbits >> k & 1) ? lp[k] : lm[k];
                }
                lr += term;
            }
            lr /= static_cast<double>(count);
        } else {
            const std::uint64_t inner_seed = rng::stream_key(seed ^ 0xA5A5A5A5A5A5A5A5ull, i);
            for (std::uint64_t j = 0; j < inner_replications; ++j) {
                const AdversarialDraw d = draw_adversarial_signal(theta0, b, b_bar, epsilon, alpha,
                                                                  beta, tau, inner_seed, j);
                lr += std::exp(log_ratio(obs.y, d.theta));
            }
            lr /= static_cast<double>(inner_replications);
        }
        sum += lr * lr;
        sum_sq += lr * lr * lr * lr;
    }
    MomentEstimate est;
    est.replications = outer_replications;
    const double n = static_cast<double>(outer_replications);
    est.estimate = sum / n;
    const double var = std::max(0.0, sum_sq / n - est.estimate * est.estimate);
    est.standard_error = std::sqrt(var / n);
    return est;
}

FeasibilityCertificate lower_bound_feasibility(double C2_observed, double alpha, double beta,
                                               double tau, double gamma) {
    require_adversary_levels(alpha, beta, tau);
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw DomainError("lower_bound_feasibility: gamma must lie in (0,1)");
    }
    if (!(C2_observed >= 0.0)) {
        throw DomainError("lower_bound_feasibility: C2 must be >= 0");
    }
    FeasibilityCertificate cert;
    cert.tau = tau;
    cert.gamma = gamma;
    cert.c1_constant = bonferroni_separation_constant(alpha, beta);
    cert.lhs = (1.0 - gamma) * C2_observed +
               (1.0 - 1.0 / gamma) * tau * tau * std::sqrt(log_c_ab(alpha, beta));
    cert.margin = cert.lhs - cert.c1_constant;
    cert.feasible = cert.margin > 0.0;
    return cert;
}

FeasibilityCertificate lower_bound_feasibility_search(double C2_observed, double alpha,
                                                      double beta) {
    FeasibilityCertificate best;
    bool first = true;
    for (int gi = 1; gi <= 19; ++gi) {
        const double gamma = 0.05 * gi;
        for (int ti = 1; ti <= 100; ++ti) {
            const double tau = 0.01 * ti;
            const FeasibilityCertificate cert =
                lower_bound_feasibility(C2_observed, alpha, beta, tau, gamma);
            if (first || cert.margin > best.margin) {
                best = cert;
                first = false;
            }
        }
    }
    return best;
}

}  // namespace dmt

#include "dmt/rates.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dmt {

namespace {

void require_level(double gamma, const char* name, bool allow_one) {
    const bool ok = gamma > 0.0 && (allow_one ? gamma <= 1.0 : gamma < 1.0);
    if (!ok) {
        throw DomainError(std::string(name) + " must lie in (0,1" + (allow_one ? "]" : ")"));
    }
}

}  // namespace

double sum_inverse_square(const OperatorSpectrum& b) {
    double s = 0.0;
    for (double v : b.values()) s += 1.0 / (v * v);
    return s;
}

double sum_inverse_fourth(const OperatorSpectrum& b) {
    double s = 0.0;
    for (double v : b.values()) {
        const double v2 = v * v;
        s += 1.0 / (v2 * v2);
    }
    return s;
}

double log_inverse_level(double gamma) {
    require_level(gamma, "gamma", true);
    return std::log(1.0 / gamma);
}

double threshold_constant(double alpha) {
    const double x = log_inverse_level(alpha);
    return 1.0 + 2.0 * (2.0 * std::sqrt(x) + x);
}

double separation_radius(const OperatorSpectrum& b, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("separation_radius: epsilon must be > 0");
    return epsilon * epsilon * std::sqrt(sum_inverse_fourth(b));
}

double divergence(const SignalSequence& theta0, const OperatorSpectrum& b1,
                  const OperatorSpectrum& b2) {
    detail::require_same_length(theta0.size(), b1.size(), "divergence");
    detail::require_same_length(b1.size(), b2.size(), "divergence");
    double s = 0.0;
    for (std::size_t k = 0; k < theta0.size(); ++k) {
        const double diff = b1[k] - b2[k];
        const double w = diff / b1[k];
        s += w * w * theta0[k] * theta0[k];
    }
    return s;
}

double bonferroni_separation_constant(double alpha, double beta, C1Parse parse) {
    require_level(alpha, "alpha", false);
    require_level(beta, "beta", false);
    const double xa2 = log_inverse_level(alpha / 2.0);
    const double xb = log_inverse_level(beta);
    const double half_power = (parse == C1Parse::verbatim)
                                  ? std::sqrt(2.0) * std::sqrt(std::sqrt(xa2) + std::sqrt(xb))
                                  : std::sqrt(std::sqrt(2.0) * (std::sqrt(xa2) + std::sqrt(xb)));
    return std::sqrt(2.0 * xb) + std::sqrt(2.0 * (xa2 + xb) + half_power);
}

double aggregation_constant(double alpha, double beta) {
    require_level(alpha, "alpha", false);
    require_level(beta, "beta", false);
    const double one_minus = 1.0 - alpha - beta;
    return 1.0 + 4.0 * one_minus * one_minus;
}

double min_aggregate_separation_constant(double alpha, double beta, double delta) {
    require_level(alpha, "alpha", false);
    require_level(beta, "beta", false);
    const double xb2 = log_inverse_level(beta / 2.0);
    if (!(delta > 0.0) || !(delta < 1.0 / (4.0 * xb2))) {
        throw DomainError("delta must lie in (0, 1/(4 x_{beta/2}))");
    }
    const double sx = std::sqrt(xb2);
    const double numer = threshold_constant(alpha) + 2.0 * sx * (1.0 + 1.0 / std::sqrt(delta));
    const double denom = 1.0 - 2.0 * std::sqrt(delta) * sx;
    return numer / denom;
}

ConstantsBundle compute_constants(double alpha, double beta, C1Parse parse) {
    require_level(alpha, "alpha", false);
    require_level(beta, "beta", false);
    ConstantsBundle c;
    c.alpha = alpha;
    c.beta = beta;
    c.x_alpha = log_inverse_level(alpha);
    c.x_beta = log_inverse_level(beta);
    c.c_alpha = threshold_constant(alpha);
    c.C1 = bonferroni_separation_constant(alpha, beta, parse);
    c.C_ab = aggregation_constant(alpha, beta);
    if (alpha + beta < 1.0) {
        c.c1 = std::sqrt(std::sqrt(2.0 * std::log(c.C_ab)));
    }

    // Golden-section search of C2(delta) on (0, 1/(4 x_{beta/2})).
    const double xb2 = log_inverse_level(beta / 2.0);
    const double hi_limit = 1.0 / (4.0 * xb2);
    double lo = hi_limit * 1e-12;
    double hi = hi_limit * (1.0 - 1e-12);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - invphi * (hi - lo);
    double b = lo + invphi * (hi - lo);
    double fa = min_aggregate_separation_constant(alpha, beta, a);
    double fb = min_aggregate_separation_constant(alpha, beta, b);
    // C2 is unimodal on the interval (it diverges at both endpoints); stop at
    // 1e-8 relative width.
    while ((hi - lo) > 1e-8 * (0.5 * (lo + hi))) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - invphi * (hi - lo);
            fa = min_aggregate_separation_constant(alpha, beta, a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + invphi * (hi - lo);
            fb = min_aggregate_separation_constant(alpha, beta, b);
        }
    }
    c.delta = (lo + hi) / 2.0;
    c.C2 = min_aggregate_separation_constant(alpha, beta, c.delta);
    return c;
}

RegimeReport homogeneity_report(const Dictionary& dict, const SignalSequence& theta0,
                                double epsilon) {
    detail::require_same_length(dict.common_length(), theta0.size(), "homogeneity_report");
    if (!(epsilon > 0.0)) throw DomainError("homogeneity_report: epsilon must be > 0");
    const std::size_t n = dict.size();
    RegimeReport report;
    report.pairwise_divergence.assign(n, std::vector<double>(n, 0.0));
    report.pairwise_ratio.assign(n, std::vector<double>(n, 0.0));
    report.homogeneous = true;
    report.homogeneous_unordered = true;
    report.worst_pair = {0, 0};
    report.worst_ratio = 0.0;

    std::vector<double> rho_sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double rho = separation_radius(dict[i], epsilon);
        rho_sq[i] = rho * rho;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = divergence(theta0, dict[i], dict[j]);
            const double ratio = d / rho_sq[i];
            report.pairwise_divergence[i][j] = d;
            report.pairwise_ratio[i][j] = ratio;
            if (ratio > 1.0) report.homogeneous = false;
            if (ratio > report.worst_ratio) {
                report.worst_ratio = ratio;
                report.worst_pair = {i, j};
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::min(report.pairwise_ratio[i][j], report.pairwise_ratio[j][i]) > 1.0) {
                report.homogeneous_unordered = false;
            }
        }
    }
    return report;
}

std::vector<Partition> find_homogeneous_partitions(const Dictionary& dict,
                                                   const SignalSequence& theta0, double epsilon) {
    const std::size_t n = dict.size();
    if (n > kMaxPartitionDictionarySize) {
        throw ResourceError("find_homogeneous_partitions: dictionary size " + std::to_string(n) +
                            " exceeds the enumeration cap of " +
                            std::to_string(kMaxPartitionDictionarySize));
    }
    const RegimeReport report = homogeneity_report(dict, theta0, epsilon);

    std::vector<Partition> result;
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (!(mask >> i & 1)) continue;
            for (std::size_t j = 0; j < n && ok; ++j) {
                if (i == j || !(mask >> j & 1)) continue;
                if (report.pairwise_ratio[i][j] > 1.0) ok = false;
            }
        }
        if (!ok) continue;
        Partition p;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1) {
                p.homogeneous.push_back(i);
            } else {
                p.complement.push_back(i);
            }
        }
        result.push_back(std::move(p));
    }
    std::stable_sort(result.begin(), result.end(), [](const Partition& a, const Partition& b) {
        if (a.homogeneous.size() != b.homogeneous.size()) {
            return a.homogeneous.size() > b.homogeneous.size();
        }
        return a.homogeneous < b.homogeneous;
    });
    return result;
}

}  // namespace dmt

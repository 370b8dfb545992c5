#include "dmt/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace dmt::stats {

namespace {

// Continued fraction for the incomplete beta (Numerical Recipes style).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("incomplete_beta: a and b must be > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double beta_quantile(double a, double b, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("beta_quantile: p must lie in [0,1]");
    }
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (incomplete_beta(a, b, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

BinomialInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                 double confidence) {
    if (trials == 0) {
        throw std::invalid_argument("clopper_pearson: trials must be > 0");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw std::invalid_argument("clopper_pearson: confidence must lie in (0,1)");
    }
    const double tail = (1.0 - confidence) / 2.0;
    const double k = static_cast<double>(successes);
    const double n = static_cast<double>(trials);
    BinomialInterval ci;
    ci.low = (successes == 0) ? 0.0 : beta_quantile(k, n - k + 1.0, tail);
    ci.high = (successes == trials) ? 1.0 : beta_quantile(k + 1.0, n - k, 1.0 - tail);
    return ci;
}

double binomial_standard_error(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) return 0.0;
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace dmt::stats

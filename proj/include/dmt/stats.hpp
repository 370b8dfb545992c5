#pragma once

#include <cstdint>

namespace dmt::stats {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation (Lentz), a,b > 0, x in [0,1].
double incomplete_beta(double a, double b, double x);

// Quantile of the Beta(a, b) distribution by bisection on incomplete_beta.
double beta_quantile(double a, double b, double p);

struct BinomialInterval {
    double low = 0.0;
    double high = 1.0;
};

// Exact (Clopper-Pearson) two-sided confidence interval for a binomial
// proportion at the given confidence level.
BinomialInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                 double confidence = 0.99);

// Normal-approximation standard error sqrt(p(1-p)/n) of an observed rate.
double binomial_standard_error(std::uint64_t successes, std::uint64_t trials);

}  // namespace dmt::stats

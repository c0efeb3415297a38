#pragma once

#include <cmath>
#include <numbers>

#include "qspec/random.hpp"

namespace qspec {

/**
 * Gaussian spectral filter p(tau w) = exp(-tau^2 w^2).
 *
 * Its dual time distribution is g(t) = exp(-t^2/4) / (2 sqrt(pi)), a normal
 * law with mean 0 and variance 2, with normalisation c = 2 pi and phase
 * theta_t = 0. Times are dimensionless; the physical evolution time is tau t.
 */
class GaussianFilter {
public:
    static constexpr double kNormalisation = 2.0 * std::numbers::pi;
    static constexpr double kSampleStddev = std::numbers::sqrt2;

    GaussianFilter(double tau, double cutoff);

    double tau() const noexcept { return tau_; }
    double cutoff() const noexcept { return cutoff_; }

    double p(double delta) const noexcept { return std::exp(-tau_ * tau_ * delta * delta); }
    static double g(double t) noexcept { return std::exp(-t * t / 4.0) / (2.0 * std::sqrt(std::numbers::pi)); }
    static double theta(double /*t*/) noexcept { return 0.0; }

    /// One draw from g; the sample is kept even when |t| > cutoff.
    static double sample_time(Rng& rng);

    bool inside(double t) const noexcept { return std::abs(t) <= cutoff_; }
    /// Half-max width 2 sqrt(ln 2) / tau of an isolated peak.
    double fwhm() const noexcept { return 2.0 * std::sqrt(std::numbers::ln2) / tau_; }

private:
    double tau_;
    double cutoff_;
};

/// exp(-T^2/4), an upper bound on erfc(T/2) and on the cutoff bias of G.
double truncation_bound(double cutoff);

/// Smallest T with truncation_bound(T) <= eps_T.
double cutoff_for_error(double eps_t);

struct EquivalenceReport {
    double ks_statistic = 0.0;
    double critical_value = 0.0;
    bool passed = false;
};

/**
 * Two-sample Kolmogorov-Smirnov comparison of {tau * sample_time()} against
 * direct draws from N(0, reference_variance) at the 1% level. The correct
 * reference variance for a scaled sampler is 2 tau^2.
 */
EquivalenceReport scaled_sampler_equivalence_check(const GaussianFilter& f, long n_draws, Rng& rng,
                                                   double reference_variance);
EquivalenceReport scaled_sampler_equivalence_check(const GaussianFilter& f, long n_draws, Rng& rng);

} // namespace qspec

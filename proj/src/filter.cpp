#include "qspec/filter.hpp"

#include <algorithm>
#include <vector>

#include "qspec/errors.hpp"

namespace qspec {

GaussianFilter::GaussianFilter(double tau, double cutoff) : tau_(tau), cutoff_(cutoff) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("filter tau must be positive");
    if (!(cutoff > 0.0) || std::isnan(cutoff)) throw InvalidArgument("filter cutoff T must be positive");
}

double GaussianFilter::sample_time(Rng& rng) {
    std::normal_distribution<double> dist(0.0, kSampleStddev);
    return dist(rng);
}

double truncation_bound(double cutoff) {
    if (!(cutoff > 0.0)) throw InvalidArgument("cutoff T must be positive");
    return std::exp(-cutoff * cutoff / 4.0);
}

double cutoff_for_error(double eps_t) {
    if (!(eps_t > 0.0 && eps_t < 1.0)) throw InvalidArgument("truncation error must lie in (0, 1)");
    return 2.0 * std::sqrt(std::log(1.0 / eps_t));
}

EquivalenceReport scaled_sampler_equivalence_check(const GaussianFilter& f, long n_draws, Rng& rng,
                                                   double reference_variance) {
    if (n_draws < 10000) throw InvalidArgument("equivalence check needs at least 10^4 draws");
    if (!(reference_variance > 0.0)) throw InvalidArgument("reference variance must be positive");
    const auto n = static_cast<std::size_t>(n_draws);
    std::vector<double> scaled(n);
    std::vector<double> direct(n);
    for (auto& x : scaled) x = f.tau() * GaussianFilter::sample_time(rng);
    std::normal_distribution<double> ref(0.0, std::sqrt(reference_variance));
    for (auto& x : direct) x = ref(rng);
    std::sort(scaled.begin(), scaled.end());
    std::sort(direct.begin(), direct.end());

    double d = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n && j < n) {
        const double x = std::min(scaled[i], direct[j]);
        while (i < n && scaled[i] <= x) ++i;
        while (j < n && direct[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) - static_cast<double>(j)) / static_cast<double>(n));
    }

    EquivalenceReport r;
    r.ks_statistic = d;
    const double nn = static_cast<double>(n);
    r.critical_value = 1.628 * std::sqrt((nn + nn) / (nn * nn));
    r.passed = d < r.critical_value;
    return r;
}

EquivalenceReport scaled_sampler_equivalence_check(const GaussianFilter& f, long n_draws, Rng& rng) {
    return scaled_sampler_equivalence_check(f, n_draws, rng, 2.0 * f.tau() * f.tau());
}

} // namespace qspec

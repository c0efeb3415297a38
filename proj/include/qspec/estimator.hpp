#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qspec/engine.hpp"
#include "qspec/filter.hpp"

namespace qspec {

/// Evenly spaced ascending grid min, min + r, ..., up to max (inclusive within r * 1e-9).
std::vector<double> make_grid(double min, double max, double resolution);

struct SamplingOptions {
    long n_samples = 0;
    long shots = 0;  ///< 0 selects exact expectations
    std::uint64_t seed = 0;
};

/**
 * Monte Carlo draws shared by every observable of one run.
 *
 * times holds all N_s dimensionless draws from g; values(i, k) is the
 * per-draw estimate of observable k at physical time tau * times[i], and
 * exactly 0 when |times[i]| exceeds the cutoff (such draws are kept, not
 * resampled).
 */
struct DrawSet {
    double tau = 0.0;
    double cutoff = 0.0;
    long shots = 0;
    std::uint64_t seed = 0;
    std::string engine;
    std::vector<double> times;
    std::vector<char> active;
    Eigen::MatrixXd values;

    long n_samples() const noexcept { return static_cast<long>(times.size()); }
    long n_truncated() const;
};

/// N_s draws from g using the "times" stream of `seed`.
std::vector<double> sample_times(long n_samples, std::uint64_t seed);

DrawSet sample_draws(const StateVector& psi0, const Engine& engine, const std::vector<PauliSum>& observables,
                     const GaussianFilter& filter, const SamplingOptions& options);

struct EstimateMeta {
    double tau = 0.0;
    double cutoff = 0.0;
    long n_samples = 0;
    long shots = 0;
    std::uint64_t seed = 0;
    long n_truncated = 0;
    std::string engine;
    std::vector<std::string> warnings;
};

struct SpectralEstimate {
    std::vector<double> omega;
    std::vector<cplx> g_hat;
    std::vector<double> std_error;  ///< standard error of the complex mean, sqrt(Var Re + Var Im) / sqrt(N_s)
    EstimateMeta meta;

    std::size_t size() const noexcept { return omega.size(); }
};

/// Sample mean of values[i] exp(i tau omega t_i) over all draws, per grid point.
SpectralEstimate assemble(const DrawSet& draws, Eigen::Index column, const std::vector<double>& omega);
SpectralEstimate assemble(const DrawSet& draws, const std::vector<double>& column_values, const std::vector<double>& omega);

SpectralEstimate estimate_G(const StateVector& psi0, const Engine& engine, const PauliSum& observable,
                            const GaussianFilter& filter, const std::vector<double>& omega,
                            const SamplingOptions& options);

void write_spectrum_csv(std::ostream& out, const SpectralEstimate& est);

struct PeakReport {
    double delta_hat = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double peak_value = 0.0;  ///< |G| at delta_hat
    int re_sign = 0;          ///< sign of Re G at delta_hat
    double fwhm_estimate = 0.0;  ///< NaN when a half-max crossing is off the grid
    double grid_resolution = 0.0;
};

/// argmax of |G| over grid points in [lo, hi]; needs at least 3 points there.
PeakReport find_peak(const SpectralEstimate& est, double lo, double hi);

/// Strict local maxima of |G| with |G| >= rel_threshold * max|G|, ascending in omega.
std::vector<PeakReport> find_local_peaks(const SpectralEstimate& est, double rel_threshold);

/// Full width at half maximum of |G| around grid index `peak`.
double half_max_width(const std::vector<double>& omega, const std::vector<double>& magnitude, std::size_t peak);

} // namespace qspec

#include "qspec/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "qspec/errors.hpp"
#include "qspec/io.hpp"
#include "qspec/measure.hpp"

namespace qspec {

std::vector<double> make_grid(double min, double max, double resolution) {
    if (!std::isfinite(min) || !std::isfinite(max)) throw InvalidArgument("omega range must be finite");
    if (!(resolution > 0.0) || !std::isfinite(resolution)) throw InvalidArgument("omega resolution must be > 0");
    if (!(min < max)) throw InvalidArgument("omega min must be below omega max");
    const double span = (max - min) / resolution;
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    if (count > 10'000'000) throw ResourceError("omega grid exceeds 10^7 points");
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = min + static_cast<double>(k) * resolution;
    return grid;
}

long DrawSet::n_truncated() const {
    return static_cast<long>(std::count(active.begin(), active.end(), char{0}));
}

std::vector<double> sample_times(long n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw InvalidArgument("N_s must be >= 1");
    Rng rng = make_stream(seed, streams::kTimes);
    std::vector<double> t(static_cast<std::size_t>(n_samples));
    for (auto& x : t) x = GaussianFilter::sample_time(rng);
    return t;
}

DrawSet sample_draws(const StateVector& psi0, const Engine& engine, const std::vector<PauliSum>& observables,
                     const GaussianFilter& filter, const SamplingOptions& options) {
    if (options.n_samples < 1) throw InvalidArgument("N_s must be >= 1");
    if (options.shots < 0) throw InvalidArgument("shots must be >= 0 (0 selects exact expectations)");
    if (observables.empty()) throw InvalidArgument("at least one observable is required");
    for (const auto& o : observables) {
        if (o.n_qubits() != engine.n_qubits()) throw DimensionMismatch("observable qubit count differs from engine");
    }

    DrawSet d;
    d.tau = filter.tau();
    d.cutoff = filter.cutoff();
    d.shots = options.shots;
    d.seed = options.seed;
    d.engine = engine.name();
    d.times = sample_times(options.n_samples, options.seed);
    d.active.resize(d.times.size());

    std::vector<double> physical;
    std::vector<std::size_t> active_index;
    for (std::size_t i = 0; i < d.times.size(); ++i) {
        d.active[i] = filter.inside(d.times[i]);
        if (d.active[i]) {
            physical.push_back(filter.tau() * d.times[i]);
            active_index.push_back(i);
        }
    }

    std::vector<PauliString> strings;
    std::map<PauliString, std::size_t> slot;
    for (const auto& o : observables) {
        for (const auto& t : o.terms()) {
            if (slot.emplace(t.string, strings.size()).second) strings.push_back(t.string);
        }
    }

    const Eigen::MatrixXd ideal = strings.empty() || physical.empty()
                                      ? Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(physical.size()),
                                                              static_cast<Eigen::Index>(strings.size()))
                                      : engine.expectations(psi0, physical, strings);

    const auto n_obs = static_cast<Eigen::Index>(observables.size());
    d.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.times.size()), n_obs);
    const auto n_active = static_cast<long>(active_index.size());

#pragma omp parallel for schedule(static)
    for (long a = 0; a < n_active; ++a) {
        const auto i = active_index[static_cast<std::size_t>(a)];
        Rng rng = make_stream(options.seed, streams::kShots, i);
        for (Eigen::Index k = 0; k < n_obs; ++k) {
            double acc = 0.0;
            for (const auto& t : observables[static_cast<std::size_t>(k)].terms()) {
                const double v = ideal(a, static_cast<Eigen::Index>(slot.at(t.string)));
                if (options.shots == 0 || t.string.is_identity()) {
                    acc += t.coefficient * v;
                } else {
                    acc += t.coefficient * sample_from_value(v, options.shots, rng);
                }
            }
            d.values(static_cast<Eigen::Index>(i), k) = acc;
        }
    }
    return d;
}

SpectralEstimate assemble(const DrawSet& draws, Eigen::Index column, const std::vector<double>& omega) {
    if (column < 0 || column >= draws.values.cols()) throw InvalidArgument("observable column out of range");
    std::vector<double> v(draws.times.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = draws.values(static_cast<Eigen::Index>(i), column);
    return assemble(draws, v, omega);
}

SpectralEstimate assemble(const DrawSet& draws, const std::vector<double>& values, const std::vector<double>& omega) {
    if (omega.empty()) throw InvalidArgument("omega grid is empty");
    for (std::size_t k = 1; k < omega.size(); ++k) {
        if (!(omega[k] > omega[k - 1])) throw InvalidArgument("omega grid must be strictly ascending");
    }
    if (values.size() != draws.times.size()) throw DimensionMismatch("per-draw values and times differ in length");
    const auto n = values.size();
    if (n == 0) throw InvalidArgument("N_s must be >= 1");

    SpectralEstimate est;
    est.omega = omega;
    est.g_hat.resize(omega.size());
    est.std_error.resize(omega.size());
    est.meta.tau = draws.tau;
    est.meta.cutoff = draws.cutoff;
    est.meta.n_samples = static_cast<long>(n);
    est.meta.shots = draws.shots;
    est.meta.seed = draws.seed;
    est.meta.n_truncated = draws.n_truncated();
    est.meta.engine = draws.engine;

    // |v e^{i phi}|^2 = v^2 for every omega, so the spread needs one sum.
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (draws.active[i]) sum_sq += values[i] * values[i];
    }
    const double nn = static_cast<double>(n);
    const auto m = static_cast<long>(omega.size());

#pragma omp parallel for schedule(static)
    for (long k = 0; k < m; ++k) {
        const double w = omega[static_cast<std::size_t>(k)] * draws.tau;
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!draws.active[i]) continue;
            const double phase = w * draws.times[i];
            re += values[i] * std::cos(phase);
            im += values[i] * std::sin(phase);
        }
        const cplx mean{re / nn, im / nn};
        const double var = n > 1 ? std::max(0.0, (sum_sq - nn * std::norm(mean)) / (nn - 1.0)) : 0.0;
        est.g_hat[static_cast<std::size_t>(k)] = mean;
        est.std_error[static_cast<std::size_t>(k)] = std::sqrt(var / nn);
    }
    return est;
}

SpectralEstimate estimate_G(const StateVector& psi0, const Engine& engine, const PauliSum& observable,
                            const GaussianFilter& filter, const std::vector<double>& omega,
                            const SamplingOptions& options) {
    if (omega.empty()) throw InvalidArgument("omega grid is empty");
    const DrawSet draws = sample_draws(psi0, engine, {observable}, filter, options);
    SpectralEstimate est = assemble(draws, 0, omega);
    if (observable.one_norm() > 1.0 + 1e-12) {
        est.meta.warnings.push_back("observable 1-norm " + format_double(observable.one_norm()) +
                                    " exceeds 1; the |G| <= 1 bound does not apply");
    }
    return est;
}

void write_spectrum_csv(std::ostream& out, const SpectralEstimate& est) {
    out << "omega,re,im,abs,stderr\n";
    for (std::size_t k = 0; k < est.size(); ++k) {
        out << format_double(est.omega[k]) << ',' << format_double(est.g_hat[k].real()) << ','
            << format_double(est.g_hat[k].imag()) << ',' << format_double(std::abs(est.g_hat[k])) << ','
            << format_double(est.std_error[k]) << '\n';
    }
}

double half_max_width(const std::vector<double>& omega, const std::vector<double>& mag, std::size_t peak) {
    const double half = mag[peak] / 2.0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double left = nan;
    for (std::size_t k = peak; k-- > 0;) {
        if (mag[k] <= half) {
            const double f = (half - mag[k]) / (mag[k + 1] - mag[k]);
            left = omega[k] + f * (omega[k + 1] - omega[k]);
            break;
        }
    }
    double right = nan;
    for (std::size_t k = peak + 1; k < mag.size(); ++k) {
        if (mag[k] <= half) {
            const double f = (mag[k - 1] - half) / (mag[k - 1] - mag[k]);
            right = omega[k - 1] + f * (omega[k] - omega[k - 1]);
            break;
        }
    }
    return right - left;
}

namespace {

double grid_resolution(const std::vector<double>& omega) {
    if (omega.size() < 2) return 0.0;
    double r = 0.0;
    for (std::size_t k = 1; k < omega.size(); ++k) r = std::max(r, omega[k] - omega[k - 1]);
    return r;
}

PeakReport report_at(const SpectralEstimate& est, const std::vector<double>& mag, std::size_t k, double lo, double hi) {
    PeakReport r;
    r.delta_hat = est.omega[k];
    r.window_lo = lo;
    r.window_hi = hi;
    r.peak_value = mag[k];
    const double re = est.g_hat[k].real();
    r.re_sign = re > 0.0 ? 1 : (re < 0.0 ? -1 : 0);
    r.fwhm_estimate = half_max_width(est.omega, mag, k);
    r.grid_resolution = grid_resolution(est.omega);
    return r;
}

std::vector<double> magnitudes(const SpectralEstimate& est) {
    std::vector<double> mag(est.size());
    for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(est.g_hat[k]);
    return mag;
}

} // namespace

PeakReport find_peak(const SpectralEstimate& est, double lo, double hi) {
    if (!(lo <= hi)) throw InvalidArgument("peak window must satisfy a_L <= a_R");
    const auto mag = magnitudes(est);
    std::size_t best = est.size();
    std::size_t inside = 0;
    for (std::size_t k = 0; k < est.size(); ++k) {
        if (est.omega[k] < lo || est.omega[k] > hi) continue;
        ++inside;
        if (best == est.size() || mag[k] > mag[best]) best = k;
    }
    if (inside < 3) {
        throw InvalidArgument("peak window [" + format_double(lo) + ", " + format_double(hi) + "] holds " +
                              std::to_string(inside) + " grid points, need >= 3");
    }
    return report_at(est, mag, best, lo, hi);
}

std::vector<PeakReport> find_local_peaks(const SpectralEstimate& est, double rel_threshold) {
    const auto mag = magnitudes(est);
    std::vector<PeakReport> out;
    if (mag.size() < 3) return out;
    const double top = *std::max_element(mag.begin(), mag.end());
    for (std::size_t k = 1; k + 1 < mag.size(); ++k) {
        if (mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] && mag[k] >= rel_threshold * top && mag[k] > 0.0) {
            out.push_back(report_at(est, mag, k, est.omega.front(), est.omega.back()));
        }
    }
    return out;
}

} // namespace qspec

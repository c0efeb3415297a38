#pragma once

#include <span>
#include <variant>
#include <vector>

#include "qspec/density.hpp"

namespace qspec {

/// Traceless expectations decay as exp(-lambda |t|) for physical time t.
struct GlobalDepolarizingModel {
    double lambda = 0.0;
};

using NoiseModel = std::variant<GlobalDepolarizingModel, LocalDepolarizingModel>;

void validate(const GlobalDepolarizingModel& model);

/// ideal * exp(-lambda |t|). Rejects observables with an identity component.
double apply_global_noise(double ideal, const PauliSum& observable, const GlobalDepolarizingModel& model, double t);

struct BenchmarkSample {
    long depth = 0;
    double value = 0.0;
};

/**
 * Expectation of `observable` after (U(dt) U^dagger(dt))^m for each depth m,
 * where U(dt) is one Trotter step. Under the local model every gate of both
 * U and U^dagger is followed by depolarising noise; under the global model
 * the noiseless value is damped by exp(-2 lambda m dt).
 */
std::vector<BenchmarkSample> benchmark_decay(const TrotterPlan& plan, const StateVector& psi0, const NoiseModel& model,
                                             const PauliSum& observable, const std::vector<long>& depths, double dt);

struct FitSample {
    double x = 0.0;
    double value = 0.0;
};

struct DecayFit {
    double lambda_hat = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
    std::vector<FitSample> samples;  ///< samples that entered the fit
};

/**
 * Fits |value| = A exp(-lambda x) by least squares on log|value| over the
 * samples with |value| > floor. r_squared = 1 - SS_res/SS_tot of the fitted
 * curve against |value|. lambda_hat is clipped at 0.
 */
DecayFit fit_lambda(const std::vector<FitSample>& samples, double floor = 1e-3);

/// Benchmark samples at time-equivalent x = 2 m dt.
std::vector<FitSample> to_fit_samples(const std::vector<BenchmarkSample>& bench, double dt);

/// values[i] * exp(lambda_hat * tau * |times[i]|) for dimensionless times.
std::vector<double> mitigate(std::span<const double> values, std::span<const double> times, double tau, double lambda_hat);

} // namespace qspec

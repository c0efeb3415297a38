#include "qspec/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qspec/errors.hpp"

namespace qspec {

void validate(const GlobalDepolarizingModel& model) {
    if (!(model.lambda >= 0.0) || !std::isfinite(model.lambda)) throw InvalidArgument("lambda must be >= 0");
}

double apply_global_noise(double ideal, const PauliSum& observable, const GlobalDepolarizingModel& model, double t) {
    validate(model);
    if (observable.has_identity_component()) {
        throw InvalidArgument("global depolarising model needs a traceless observable (identity component present)");
    }
    return ideal * std::exp(-model.lambda * std::abs(t));
}

std::vector<BenchmarkSample> benchmark_decay(const TrotterPlan& plan, const StateVector& psi0, const NoiseModel& model,
                                             const PauliSum& observable, const std::vector<long>& depths, double dt) {
    if (depths.empty()) throw InvalidArgument("benchmark needs at least one depth");
    for (long m : depths) {
        if (m < 0) throw InvalidArgument("benchmark depth must be >= 0");
    }
    const auto forward = plan.gates_fixed(dt, 1);
    std::vector<PauliRotation> round = forward;
    const auto back = inverse(forward);
    round.insert(round.end(), back.begin(), back.end());

    std::vector<BenchmarkSample> out;
    if (const auto* global = std::get_if<GlobalDepolarizingModel>(&model)) {
        validate(*global);
        for (long m : depths) {
            Eigen::VectorXcd v = psi0.amplitudes();
            for (long k = 0; k < m; ++k) apply_gates(v, round);
            const double ideal = expectation(v, observable);
            out.push_back({m, apply_global_noise(ideal, observable, *global, 2.0 * static_cast<double>(m) * dt)});
        }
        return out;
    }

    const auto& local = std::get<LocalDepolarizingModel>(model);
    validate(local);
    // Depths are visited in ascending order so one trajectory serves all of them.
    std::vector<std::size_t> order(depths.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return depths[a] < depths[b]; });
    std::vector<double> values(depths.size());
    DensityMatrix rho = DensityMatrix::pure(psi0);
    long reached = 0;
    for (auto idx : order) {
        for (; reached < depths[idx]; ++reached) apply_noisy_gates(rho, round, local);
        values[idx] = rho.expectation(observable);
    }
    for (std::size_t i = 0; i < depths.size(); ++i) out.push_back({depths[i], values[i]});
    return out;
}

DecayFit fit_lambda(const std::vector<FitSample>& samples, double floor) {
    DecayFit fit;
    for (const auto& s : samples) {
        if (std::isfinite(s.value) && std::abs(s.value) > floor) fit.samples.push_back(s);
    }
    if (fit.samples.size() < 3) {
        throw FitError("decay fit needs >= 3 samples above the floor, got " + std::to_string(fit.samples.size()));
    }
    const double n = static_cast<double>(fit.samples.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& s : fit.samples) {
        sx += s.x;
        sy += std::log(std::abs(s.value));
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& s : fit.samples) {
        sxx += (s.x - mx) * (s.x - mx);
        sxy += (s.x - mx) * (std::log(std::abs(s.value)) - my);
    }
    if (sxx == 0.0) throw FitError("decay fit needs at least two distinct x values");
    const double slope = sxy / sxx;
    fit.lambda_hat = std::max(0.0, -slope);
    // Intercept re-estimated for the clipped slope.
    double intercept = 0.0;
    for (const auto& s : fit.samples) intercept += std::log(std::abs(s.value)) + fit.lambda_hat * s.x;
    fit.amplitude = std::exp(intercept / n);

    double mean = 0.0;
    for (const auto& s : fit.samples) mean += std::abs(s.value);
    mean /= n;
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& s : fit.samples) {
        const double model = fit.amplitude * std::exp(-fit.lambda_hat * s.x);
        ss_res += (std::abs(s.value) - model) * (std::abs(s.value) - model);
        ss_tot += (std::abs(s.value) - mean) * (std::abs(s.value) - mean);
    }
    const double scale = std::max(1.0, mean * mean) * n;
    if (ss_tot <= 1e-24 * scale) {
        fit.r_squared = ss_res <= 1e-24 * scale ? 1.0 : 0.0;
    } else {
        fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
    }
    return fit;
}

std::vector<FitSample> to_fit_samples(const std::vector<BenchmarkSample>& bench, double dt) {
    std::vector<FitSample> out;
    out.reserve(bench.size());
    for (const auto& b : bench) out.push_back({2.0 * static_cast<double>(b.depth) * dt, b.value});
    return out;
}

std::vector<double> mitigate(std::span<const double> values, std::span<const double> times, double tau, double lambda_hat) {
    if (values.size() != times.size()) throw DimensionMismatch("values and times differ in length");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] * std::exp(lambda_hat * tau * std::abs(times[i]));
    return out;
}

} // namespace qspec

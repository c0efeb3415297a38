#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qspec/coherence.hpp"
#include "qspec/density.hpp"
#include "qspec/engine.hpp"
#include "qspec/errors.hpp"
#include "qspec/estimator.hpp"
#include "qspec/models.hpp"
#include "qspec/momentum.hpp"
#include "qspec/noise.hpp"
#include "support.hpp"

using namespace qspec;

namespace {

/// Kraus-form depolarising channel on one qubit, built from Kronecker products.
Eigen::MatrixXcd kraus_depolarize(const Eigen::MatrixXcd& rho, int n, int site, double p) {
    Eigen::MatrixXcd out = (1.0 - p) * rho;
    for (char c : {'X', 'Y', 'Z'}) {
        std::string s(static_cast<std::size_t>(n), 'I');
        s[static_cast<std::size_t>(site)] = c;
        const Eigen::MatrixXcd k = test::kron_pauli(s);
        out += (p / 3.0) * k * rho * k;
    }
    return out;
}

Eigen::MatrixXcd random_density(std::mt19937_64& rng, int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    Eigen::MatrixXcd a(d, d);
    std::normal_distribution<double> nd;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {nd(rng), nd(rng)};
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace();
}

StateVector plus_i(int n) {
    StatePrepSpec s;
    s.base = StatePrepSpec::Base::AllZero;
    for (int q = 0; q < n; ++q) s.operations.push_back({q, Gate::Rx, -std::numbers::pi / 2.0});
    return prepare_state(s, n);
}

std::vector<long> even_depths(long max) {
    std::vector<long> d;
    for (long m = 0; m <= max; m += 2) d.push_back(m);
    return d;
}

} // namespace

TEST(GlobalNoise, Examples) {
    const PauliSum y(1, {{1.0, PauliString("Y")}});
    EXPECT_EQ(apply_global_noise(0.8, y, {0.0}, 3.0), 0.8);
    EXPECT_NEAR(apply_global_noise(0.8, y, {0.1}, 2.0), 0.8 * std::exp(-0.2), 1e-15);
    EXPECT_NEAR(apply_global_noise(0.8, y, {0.1}, 2.0), 0.65498, 1e-5);
    EXPECT_LT(apply_global_noise(0.8, y, {0.1}, 1e4), 1e-300);
    EXPECT_THROW(apply_global_noise(0.8, PauliSum(1, {{1.0, PauliString("I")}, {1.0, PauliString("Z")}}), {0.1}, 1.0),
                 InvalidArgument);
    EXPECT_THROW(validate(GlobalDepolarizingModel{-0.1}), InvalidArgument);
}

TEST(GlobalNoise, SemigroupProperty) {
    const PauliSum z(1, {{1.0, PauliString("Z")}});
    const GlobalDepolarizingModel m{0.07};
    for (double t1 : {0.3, 1.7}) {
        for (double t2 : {0.5, 2.2}) {
            const double split = apply_global_noise(apply_global_noise(0.9, z, m, t1), z, m, t2);
            EXPECT_NEAR(split, apply_global_noise(0.9, z, m, t1 + t2), 1e-15);
        }
    }
}

TEST(DensityMatrix, RotationAndDepolarisingMatchDenseOracle) {
    std::mt19937_64 rng(6);
    const int n = 3;
    const Eigen::MatrixXcd rho0 = random_density(rng, n);
    DensityMatrix rho(n, rho0);
    const PauliString p("XYZ");
    rho.rotate(p, 0.37);
    const Eigen::MatrixXcd u = test::dense_propagator(test::kron_pauli("XYZ"), 0.37);
    Eigen::MatrixXcd expected = u * rho0 * u.adjoint();
    EXPECT_LT((rho.matrix() - expected).norm(), 1e-12);
    rho.depolarize(1, 0.2);
    expected = kraus_depolarize(expected, n, 1, 0.2);
    EXPECT_LT((rho.matrix() - expected).norm(), 1e-12);
}

TEST(DensityMatrix, NoiselessMatchesStatevector) {
    const auto h = build_tfim(4, 1.0, 2.0, 0.1, false);
    const TrotterPlan plan(h, 3);
    StatePrepSpec s;
    s.operations.push_back({1, Gate::Ry, 0.9});
    const auto psi = prepare_state(s, 4);
    const auto rho = evolve_density_local_noise(plan, DensityMatrix::pure(psi), 1.3, {0.0});
    const auto v = trotter2_evolve(plan, psi, 1.3).amplitudes();
    EXPECT_LT((rho.matrix() - v * v.adjoint()).norm(), 1e-10);
}

TEST(DensityMatrix, ChannelValidity) {
    std::mt19937_64 rng(12);
    const auto h = build_tfim(4, 1.0, 2.0, 0.1, false);
    const TrotterPlan plan(h, 2);
    for (int trial = 0; trial < 5; ++trial) {
        const auto rho = evolve_density_local_noise(plan, DensityMatrix(4, random_density(rng, 4)), 0.5 + trial, {0.02});
        EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
        EXPECT_LT((rho.matrix() - rho.matrix().adjoint()).norm(), 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
    }
}

TEST(DensityMatrix, FullyMixingChannelKillsPaulis) {
    const auto h = build_tfim(3, 1.0, 2.0, 0.1, false);
    const TrotterPlan plan(h, 4);
    const auto rho = evolve_density_local_noise(plan, DensityMatrix::pure(plus_i(3)), 1.0, {0.75});
    for (int q = 0; q < 3; ++q)
        for (char c : {'X', 'Y', 'Z'}) EXPECT_NEAR(rho.expectation(PauliString::single(3, q, c)), 0.0, 1e-12);
}

TEST(DensityMatrix, CapsAndValidation) {
    EXPECT_THROW(DensityMatrix::pure(prepare_state({}, 11)), ResourceError);
    EXPECT_THROW(validate(LocalDepolarizingModel{1.0}), InvalidArgument);
}

TEST(BenchmarkDecay, NoiselessIsConstant) {
    const auto h = build_tfim(5, 1.0, 2.0, 0.1, false);
    const TrotterPlan plan(h, 1);
    const auto sum_y = uniform_field(5, 'Y');
    const auto b = benchmark_decay(plan, plus_i(5), LocalDepolarizingModel{0.0}, sum_y, even_depths(10), 0.3);
    for (const auto& s : b) EXPECT_NEAR(s.value, 5.0, 1e-10);
}

TEST(BenchmarkDecay, GlobalModelIsExactExponential) {
    const auto h = build_tfim(5, 1.0, 2.0, 0.1, false);
    const TrotterPlan plan(h, 1);
    const auto sum_y = uniform_field(5, 'Y');
    const double dt = 1.0 / 3.0;
    const auto b = benchmark_decay(plan, plus_i(5), GlobalDepolarizingModel{0.05}, sum_y, even_depths(20), dt);
    for (const auto& s : b) EXPECT_NEAR(s.value, b.front().value * std::exp(-2.0 * 0.05 * s.depth * dt), 1e-12);
    const auto fit = fit_lambda(to_fit_samples(b, dt));
    EXPECT_NEAR(fit.lambda_hat, 0.05, 0.05 * 1e-6);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(BenchmarkDecay, LocalModelDecaysMonotonically) {
    const int n = 7;
    const auto h = build_tfim(n, 1.0, 2.0, 0.1, false);
    const TrotterPlan plan(h, 1);
    const auto b = benchmark_decay(plan, plus_i(n), LocalDepolarizingModel{0.005}, uniform_field(n, 'Y'), even_depths(12), 1.0 / 3.0);
    for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LT(b[i].value, b[i - 1].value);
    const auto fit = fit_lambda(to_fit_samples(b, 1.0 / 3.0));
    EXPECT_GE(fit.r_squared, 0.99);
}

TEST(FitLambda, Examples) {
    std::vector<FitSample> s;
    for (int k = 0; k < 12; ++k) s.push_back({2.0 * k, std::exp(-0.05 * 2.0 * k)});
    const auto f = fit_lambda(s);
    EXPECT_NEAR(f.lambda_hat, 0.05, 1e-6);
    EXPECT_NEAR(f.amplitude, 1.0, 1e-9);

    std::vector<FitSample> flat;
    for (int k = 0; k < 5; ++k) flat.push_back({double(k), 0.4});
    const auto c = fit_lambda(flat);
    EXPECT_EQ(c.lambda_hat, 0.0);
    EXPECT_EQ(c.r_squared, 1.0);

    std::vector<FitSample> tiny;
    for (int k = 0; k < 5; ++k) tiny.push_back({double(k), 1e-5});
    EXPECT_THROW(fit_lambda(tiny), FitError);
}

TEST(FitLambda, RecoversGlobalNoiseOutputs) {
    const PauliSum z(1, {{1.0, PauliString("Z")}});
    for (double lambda : {0.01, 0.2, 0.9}) {
        std::vector<FitSample> s;
        for (double t = 0.0; t <= 4.0; t += 0.5) s.push_back({t, apply_global_noise(0.7, z, {lambda}, t)});
        EXPECT_NEAR(fit_lambda(s).lambda_hat / lambda, 1.0, 1e-6);
    }
}

TEST(Mitigate, IdentityAndExactInverse) {
    const std::vector<double> v{0.5, -0.2, 0.0, 0.9};
    const std::vector<double> t{0.1, -1.0, 2.0, 3.5};
    EXPECT_EQ(mitigate(v, t, 2.0, 0.0), v);
    const PauliSum y(1, {{1.0, PauliString("Y")}});
    std::vector<double> noisy;
    for (std::size_t i = 0; i < v.size(); ++i) noisy.push_back(apply_global_noise(v[i], y, {0.3}, 2.0 * t[i]));
    const auto back = mitigate(noisy, t, 2.0, 0.3);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(back[i], v[i], 1e-10);
}

TEST(Mitigate, GlobalModelUnbiasedInFrequencyDomain) {
    const auto h = build_tfim(3, 1.0, 2.0, 0.0, true);
    StatePrepSpec p;
    p.operations.push_back({1, Gate::Ry, std::numbers::pi / 2.0});
    const auto psi = prepare_state(p, 3);
    const PauliSum o(3, {{1.0, PauliString("IYI")}});
    const GaussianFilter f(1.0, 4.0);
    const auto grid = make_grid(-6.0, 6.0, 0.5);
    auto ideal = std::make_shared<const ExactEngine>(h);
    const GlobalNoiseEngine noisy(ideal, {0.1});
    const auto draws = sample_draws(psi, noisy, {o}, f, {20000, 0, 2});
    std::vector<double> raw(draws.times.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = draws.values(static_cast<Eigen::Index>(i), 0);
    const auto est = assemble(draws, mitigate(raw, draws.times, f.tau(), 0.1), grid);
    const auto table = coherence_table(ideal->ed(), psi, o);
    int inside = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::abs(est.g_hat[k] - exact_G(table, f, grid[k])) <= 4.0 * est.std_error[k] + truncation_bound(4.0)) ++inside;
    }
    EXPECT_GE(inside, static_cast<int>(grid.size()) - 1);
}

TEST(Mitigate, LocalNoiseSiteRmseShrinksAtEveryTime) {
    // RMSE over the seven single-site <Y_x>, each mitigated with its own fitted decay constant.
    const int n = 7;
    const int spu = 3;
    const auto h = build_tfim(n, 1.0, 2.0, 0.1, false);
    const TrotterPlan plan(h, spu);
    const LocalDepolarizingModel model{0.005};
    std::vector<PauliString> strings;
    std::vector<double> lambdas;
    for (const auto& o : site_family(n, 'Y')) {
        strings.push_back(o.terms()[0].string);
        const auto bench = benchmark_decay(plan, plus_i(n), model, o, even_depths(20), 1.0 / spu);
        lambdas.push_back(fit_lambda(to_fit_samples(bench, 1.0 / spu)).lambda_hat);
    }

    StatePrepSpec p;
    p.operations.push_back({3, Gate::Ry, std::numbers::pi / 2.0});
    const auto psi = prepare_state(p, n);
    std::vector<double> times;
    for (double t = 0.25; t <= 5.0; t += 0.25) times.push_back(t);
    const auto ideal = TrotterEngine(h, spu).expectations(psi, times, strings);
    const auto noisy = LocalNoiseEngine(h, spu, model).expectations(psi, times, strings);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        double sq_noisy = 0.0;
        double sq_mit = 0.0;
        for (Eigen::Index x = 0; x < n; ++x) {
            sq_noisy += std::pow(noisy(r, x) - ideal(r, x), 2);
            sq_mit += std::pow(noisy(r, x) * std::exp(lambdas[static_cast<std::size_t>(x)] * times[i]) - ideal(r, x), 2);
        }
        EXPECT_LT(sq_mit, sq_noisy) << "t = " << times[i];
    }
}

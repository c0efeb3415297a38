#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <omp.h>

#include "qspec/coherence.hpp"
#include "qspec/engine.hpp"
#include "qspec/errors.hpp"
#include "qspec/estimator.hpp"
#include "qspec/models.hpp"
#include "qspec/resources.hpp"
#include "support.hpp"

using namespace qspec;

namespace {

struct TwoLevel {
    PauliSum h{1, {{0.5, PauliString("Z")}}};
    PauliSum x{1, {{1.0, PauliString("X")}}};
    StateVector psi = prepare_state(StatePrepSpec{}, 1);
};

double two_level_G(double tau, double w) {
    return 0.5 * std::exp(-tau * tau * (1 - w) * (1 - w)) + 0.5 * std::exp(-tau * tau * (1 + w) * (1 + w));
}

SpectralEstimate from_function(const std::vector<double>& grid, const std::function<double(double)>& f) {
    SpectralEstimate est;
    est.omega = grid;
    for (double w : grid) {
        est.g_hat.emplace_back(f(w), 0.0);
        est.std_error.push_back(0.0);
    }
    return est;
}

} // namespace

TEST(MakeGrid, InclusiveEvenGrid) {
    const auto g = make_grid(-1.0, 1.0, 0.25);
    ASSERT_EQ(g.size(), 9u);
    EXPECT_DOUBLE_EQ(g.front(), -1.0);
    EXPECT_NEAR(g.back(), 1.0, 1e-15);
    EXPECT_THROW(make_grid(0.0, 1.0, 0.0), InvalidArgument);
    EXPECT_THROW(make_grid(1.0, 0.0, 0.1), InvalidArgument);
}

TEST(EstimateG, IdentityObservablePeaksAtZero) {
    const PauliSum id(2, {{1.0, PauliString("II")}});
    const ExactEngine engine(build_tfim(2, 1.0, 1.0, 0.0, false));
    const auto psi = prepare_state(StatePrepSpec{}, 2);
    const GaussianFilter f(2.0, 8.0);
    const auto grid = make_grid(-2.0, 2.0, 0.05);
    const auto est = estimate_G(psi, engine, id, f, grid, {40000, 0, 3});
    const auto peak = find_peak(est, -1.0, 1.0);
    EXPECT_NEAR(peak.delta_hat, 0.0, 0.05 + 1e-12);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        EXPECT_LT(std::abs(est.g_hat[k] - f.p(grid[k])), 4.0 * est.std_error[k] + 1e-12) << grid[k];
    }
}

TEST(EstimateG, TwoLevelPeak) {
    TwoLevel s;
    const ExactEngine engine(s.h);
    const auto est = estimate_G(s.psi, engine, s.x, GaussianFilter(3.0, 6.0), make_grid(-2.0, 2.0, 0.005), {50000, 0, 1234});
    const auto peak = find_peak(est, 0.5, 1.5);
    EXPECT_LE(std::abs(peak.delta_hat - 1.0), 0.02);
    EXPECT_EQ(peak.re_sign, 1);
    EXPECT_NEAR(peak.fwhm_estimate, GaussianFilter(3.0, 6.0).fwhm(), 0.15 * GaussianFilter(3.0, 6.0).fwhm());
}

TEST(EstimateG, TwoLevelRealPartIsEven) {
    TwoLevel s;
    const ExactEngine engine(s.h);
    const auto est = estimate_G(s.psi, engine, s.x, GaussianFilter(2.0, 6.0), make_grid(-2.0, 2.0, 0.1), {5000, 0, 9});
    const std::size_t m = est.size();
    for (std::size_t k = 0; k < m; ++k) EXPECT_NEAR(est.g_hat[k].real(), est.g_hat[m - 1 - k].real(), 1e-12);
}

TEST(EstimateG, RejectsBadInputs) {
    TwoLevel s;
    const ExactEngine engine(s.h);
    const GaussianFilter f(1.0, 4.0);
    const auto grid = make_grid(-1.0, 1.0, 0.1);
    EXPECT_THROW(estimate_G(s.psi, engine, s.x, f, grid, {0, 0, 1}), InvalidArgument);
    EXPECT_THROW(estimate_G(s.psi, engine, s.x, f, grid, {10, -1, 1}), InvalidArgument);
    EXPECT_THROW(estimate_G(s.psi, engine, PauliSum(2, {{1.0, PauliString("XX")}}), f, grid, {10, 0, 1}), DimensionMismatch);
}

TEST(EstimateG, WarnsWhenOneNormExceedsOne) {
    TwoLevel s;
    const ExactEngine engine(s.h);
    const auto est = estimate_G(s.psi, engine, s.x.scaled(2.0), GaussianFilter(1.0, 4.0), make_grid(-1.0, 1.0, 0.5), {10, 0, 1});
    EXPECT_FALSE(est.meta.warnings.empty());
}

TEST(EstimateG, TruncatedDrawsAreKeptAsZero) {
    TwoLevel s;
    const ExactEngine engine(s.h);
    const GaussianFilter f(1.0, 0.5);
    const auto draws = sample_draws(s.psi, engine, {s.x}, f, {2000, 0, 4});
    EXPECT_EQ(draws.n_samples(), 2000);
    long outside = 0;
    for (std::size_t i = 0; i < draws.times.size(); ++i) {
        if (std::abs(draws.times[i]) > 0.5) {
            ++outside;
            EXPECT_EQ(draws.values(static_cast<Eigen::Index>(i), 0), 0.0);
        }
    }
    EXPECT_EQ(outside, draws.n_truncated());
    EXPECT_GT(outside, 1000);
}

TEST(EstimateG, DeterministicAcrossThreadCounts) {
    const auto h = build_heisenberg(5, -1.0, -0.01, true);
    const ExactEngine engine(h);
    StatePrepSpec p;
    p.operations.push_back({2, Gate::Ry, 1.0});
    const auto psi = prepare_state(p, 5);
    const PauliSum o(5, {{0.5, PauliString::single(5, 2, 'Y')}, {0.5, PauliString::single(5, 1, 'Z')}});
    const auto grid = make_grid(-3.0, 3.0, 0.1);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto a = estimate_G(psi, engine, o, GaussianFilter(2.0, 6.0), grid, {3000, 20, 77});
    omp_set_num_threads(4);
    const auto b = estimate_G(psi, engine, o, GaussianFilter(2.0, 6.0), grid, {3000, 20, 77});
    omp_set_num_threads(saved);
    std::ostringstream sa;
    std::ostringstream sb;
    write_spectrum_csv(sa, a);
    write_spectrum_csv(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(EstimateG, ShotsDoNotPerturbTimes) {
    TwoLevel s;
    const ExactEngine engine(s.h);
    const GaussianFilter f(1.0, 6.0);
    const auto exact = sample_draws(s.psi, engine, {s.x}, f, {500, 0, 10});
    const auto shots = sample_draws(s.psi, engine, {s.x}, f, {500, 30, 10});
    EXPECT_EQ(exact.times, shots.times);
    EXPECT_EQ(exact.times, sample_times(500, 10));
}

TEST(EstimateG, FiniteShotsStayUnbiased) {
    TwoLevel s;
    const ExactEngine engine(s.h);
    const GaussianFilter f(1.5, 6.0);
    const auto grid = make_grid(-2.0, 2.0, 0.5);
    const auto est = estimate_G(s.psi, engine, s.x, f, grid, {40000, 10, 5});
    int inside = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::abs(est.g_hat[k] - two_level_G(1.5, grid[k])) < 4.0 * est.std_error[k] + 1e-3) ++inside;
    }
    EXPECT_GE(inside, static_cast<int>(grid.size()) - 1);
}

TEST(SpectrumCsv, HeaderAndRows) {
    TwoLevel s;
    const ExactEngine engine(s.h);
    const auto est = estimate_G(s.psi, engine, s.x, GaussianFilter(1.0, 4.0), make_grid(0.0, 1.0, 0.5), {10, 0, 1});
    std::ostringstream out;
    write_spectrum_csv(out, est);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "omega,re,im,abs,stderr");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 3);
}

TEST(ExactG, Examples) {
    const auto single = CoherenceTable::from_transitions({{2.0, cplx(1.0, 0.0)}});
    const GaussianFilter f(3.0, 6.0);
    EXPECT_NEAR(std::abs(exact_G(single, f, 2.0) - 1.0), 0.0, 1e-15);
    EXPECT_LT(std::abs(exact_G(single, f, 2.0 + 10.0 / f.tau())), 1e-10);

    TwoLevel s;
    const auto table = coherence_table(diagonalize(s.h), s.psi, s.x);
    for (double w = -2.0; w <= 2.0; w += 0.05) EXPECT_NEAR(std::abs(exact_G(table, f, w) - two_level_G(3.0, w)), 0.0, 1e-12);
}

TEST(CoherenceTable, TwoLevelAndEigenstate) {
    TwoLevel s;
    const auto ed = diagonalize(s.h);
    const auto table = coherence_table(ed, s.psi, s.x);
    ASSERT_EQ(table.transitions().size(), 2u);
    EXPECT_NEAR(table.transitions()[1].delta, 1.0, 1e-14);
    EXPECT_NEAR(std::abs(table.transitions()[1].gamma - 0.5), 0.0, 1e-14);

    const auto up = StateVector::basis(1, 0);
    const auto diag = coherence_table(ed, up, PauliSum(1, {{1.0, PauliString("Z")}}));
    for (const auto& e : diag.entries()) EXPECT_EQ(e.delta, 0.0);
    EXPECT_NEAR(std::abs(diag.total() - 1.0), 0.0, 1e-14);
}

TEST(CoherenceTable, ReproducesTimeSignal) {
    std::mt19937_64 rng(13);
    const auto h = test::random_pauli_sum(rng, 4, 10, 3.0);
    const auto o = test::random_pauli_sum(rng, 4, 3, 1.0);
    const StateVector psi(4, test::random_state(rng, 4));
    const auto ed = diagonalize(h);
    const auto table = coherence_table(ed, psi, o);
    for (double t : {0.0, 0.6, -2.3, 7.0}) {
        cplx signal = 0.0;
        for (const auto& e : table.entries()) signal += e.gamma * std::exp(cplx(0.0, -e.delta * t));
        EXPECT_NEAR(signal.real(), expectation(exact_evolve(ed, psi, t), o), 1e-10);
        EXPECT_NEAR(signal.imag(), 0.0, 1e-10);
    }
}

TEST(CoherenceTable, CapAndMerging) {
    const auto t = CoherenceTable::from_transitions({{1.0, cplx(0.2)}, {1.0 + 1e-12, cplx(0.3)}, {3.0, cplx(0.1)}});
    ASSERT_EQ(t.transitions().size(), 2u);
    EXPECT_NEAR(t.transitions()[0].gamma.real(), 0.5, 1e-15);
    EXPECT_NEAR(t.transitions()[0].gap, 2.0, 1e-9);
    const auto ed = diagonalize(build_tfim(3, 1.0, 1.0, 0.0, true));
    const PauliSum x(3, {{1.0, PauliString("XII")}});
    EXPECT_THROW(coherence_table(ed, prepare_state({}, 3), x, {1e-10, 1e-9, 2}), ResourceError);
}

TEST(FindPeak, SyntheticBumpAndWindowChecks) {
    const auto grid = make_grid(0.0, 4.0, 0.01);
    const auto est = from_function(grid, [](double w) { return std::exp(-9.0 * (w - 2.0) * (w - 2.0)); });
    const auto p = find_peak(est, 1.0, 3.0);
    EXPECT_NEAR(p.delta_hat, 2.0, 0.01 + 1e-12);
    EXPECT_NEAR(p.fwhm_estimate, 2.0 * std::sqrt(std::numbers::ln2) / 3.0, 0.01);
    EXPECT_THROW(find_peak(est, 1.0, 1.015), InvalidArgument);
    EXPECT_THROW(find_peak(est, 2.0, 1.0), InvalidArgument);
}

TEST(FindPeak, ExactGWithinResolutionOfUniqueMaximum) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> pos(0.5, 9.5);
    const double r = 0.01;
    const auto grid = make_grid(0.0, 10.0, r);
    const GaussianFilter f(6.0, 6.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double d = pos(rng);
        const auto table = CoherenceTable::from_transitions({{d, cplx(0.6)}, {d + 1.0, cplx(0.2)}, {d - 1.0, cplx(-0.2)}});
        const auto est = from_function(grid, [&](double w) { return exact_G(table, f, w).real(); });
        EXPECT_LE(std::abs(find_peak(est, d - 0.5, d + 0.5).delta_hat - d), r);
    }
}

TEST(FindPeak, SharpeningWithTau) {
    const auto table = CoherenceTable::from_transitions({{1.0, cplx(1.0)}});
    const auto grid = make_grid(0.0, 2.0, 0.001);
    auto width = [&](double tau) {
        const GaussianFilter f(tau, 6.0);
        return find_peak(from_function(grid, [&](double w) { return exact_G(table, f, w).real(); }), 0.0, 2.0).fwhm_estimate;
    };
    EXPECT_NEAR(width(8.0) / width(4.0), 0.5, 0.05);
}

TEST(FindLocalPeaks, ThresholdRelativeToMaximum) {
    const auto grid = make_grid(-3.0, 3.0, 0.01);
    const auto est = from_function(grid, [](double w) {
        return std::exp(-16 * (w - 1) * (w - 1)) + 0.3 * std::exp(-16 * (w + 1) * (w + 1)) + 0.05 * std::exp(-16 * (w - 2.5) * (w - 2.5));
    });
    const auto peaks = find_local_peaks(est, 0.1);
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_NEAR(peaks[0].delta_hat, -1.0, 0.011);
    EXPECT_NEAR(peaks[1].delta_hat, 1.0, 0.011);
}

TEST(Resources, RequiredTau) {
    EXPECT_NEAR(required_tau(1.0, 0.1, 0.5), std::sqrt(std::log(4000.0)) / 0.9, 1e-12);
    EXPECT_NEAR(required_tau(1.0, 0.1, 0.5), 3.201, 2e-3);  // quoted value is rounded; exact 3.19993
    EXPECT_NEAR(required_tau(1.0, 0.1, 0.5, TauConstant::Ten), std::sqrt(std::log(2000.0)) / 0.9, 1e-12);
    EXPECT_EQ(tau_log_constant(TauConstant::Twenty), 20.0);
    EXPECT_EQ(tau_log_constant(TauConstant::Ten), 10.0);
    EXPECT_THROW(required_tau(1.0, 0.25, 0.5), DomainError);
    EXPECT_THROW(required_tau(1.0, 0.1, 1.5), DomainError);
    double prev = 0.0;
    for (double w : {1.0, 0.5, 0.2, 0.1, 0.01}) {
        const double t = required_tau(1.0, 0.1, w);
        EXPECT_GT(t, prev);
        prev = t;
    }
}

TEST(Resources, RequiredT) {
    EXPECT_NEAR(required_T(3.2, 0.1), 2.0 * std::sqrt(2.0 * std::log(std::sqrt(10.0) / 0.32)), 1e-12);
    EXPECT_NEAR(required_T(3.2, 0.1), 4.281, 1e-3);
    EXPECT_LT(required_T(3.2, 0.2), required_T(3.2, 0.1));
    EXPECT_THROW(required_T(10.0, 0.4), DomainError);
}

TEST(Resources, RequiredNs) {
    const long ns = required_Ns(0.1, 0.5, 3.201, 0.05);
    EXPECT_NEAR(static_cast<double>(ns), 3.34e5, 0.01e5);
    const double a = 200.0 * std::log(80.0) / (std::pow(0.1, 4) * 0.25 * std::pow(3.201, 4));
    EXPECT_EQ(ns, static_cast<long>(std::ceil(a)));
    const long half = required_Ns(0.05, 0.5, 3.201, 0.05);
    EXPECT_NEAR(static_cast<double>(half) / static_cast<double>(ns), 16.0, 1e-4);
    EXPECT_THROW(required_Ns(0.1, 0.5, 3.2, 4.0), DomainError);
    EXPECT_THROW(required_Ns(0.1, 0.5, 3.2, 1.0), DomainError);
}

TEST(SinglePeakCheck, SingleTransitionIsTightAtCentre) {
    const auto t = CoherenceTable::from_transitions({{3.0, cplx(0.4)}});
    const auto r = lemma1_check(t, 0, 0.1);
    EXPECT_TRUE(r.passed);
    EXPECT_GE(r.inner_ratio, 0.0);
    EXPECT_LE(r.inner_ratio, 0.3);
}

TEST(SinglePeakCheck, NegativeAndComplexWeightsArePhaseRotated) {
    const auto t = CoherenceTable::from_transitions({{1.0, cplx(0.0, -0.4)}, {3.0, cplx(-0.5)}});
    EXPECT_TRUE(lemma1_check(t, 0, 0.05 * 2.0).passed);
    EXPECT_TRUE(lemma1_check(t, 1, 0.05 * 2.0).passed);
}

TEST(SinglePeakCheck, RejectsPreconditionViolations) {
    const auto close = CoherenceTable::from_transitions({{1.0, cplx(0.4)}, {1.1, cplx(0.4)}});
    EXPECT_THROW(lemma1_check(close, 0, 0.05), DomainError);
    EXPECT_THROW(lemma1_check(close, 5, 0.01), DomainError);
}

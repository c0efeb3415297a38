#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "qspec/errors.hpp"
#include "qspec/filter.hpp"
#include "qspec/random.hpp"

using namespace qspec;
using boost::math::quadrature::gauss_kronrod;

TEST(GaussianFilter, PValueExamples) {
    EXPECT_DOUBLE_EQ(GaussianFilter(2.0, 6.0).p(0.0), 1.0);
    const GaussianFilter f(1.0, 6.0);
    EXPECT_NEAR(f.p(std::sqrt(std::numbers::ln2)), 0.5, 1e-15);
    EXPECT_NEAR(f.fwhm(), 2.0 * std::sqrt(std::numbers::ln2), 1e-15);
    for (double d : {0.1, 0.4, 1.3}) EXPECT_NEAR(f.p(2 * d), std::pow(f.p(d), 4), 1e-15);
}

TEST(GaussianFilter, DualIsNormalisedRealAndNonnegative) {
    const double mass = gauss_kronrod<double, 61>::integrate(GaussianFilter::g, -50.0, 50.0, 15, 1e-14);
    EXPECT_NEAR(mass, 1.0, 1e-10);
    for (double t : {-7.0, -1.0, 0.0, 2.5}) {
        EXPECT_GE(GaussianFilter::g(t), 0.0);
        EXPECT_EQ(GaussianFilter::theta(t), 0.0);
    }
}

TEST(GaussianFilter, FourierClosure) {
    // (c / 2 pi) * integral of g(t) exp(-i u tau t) dt reproduces p(u).
    for (double tau : {1.0, 3.0}) {
        const GaussianFilter f(tau, 6.0);
        for (double u : {0.0, 0.5, 1.0, 2.0}) {
            auto re = [&](double t) { return GaussianFilter::g(t) * std::cos(u * tau * t); };
            auto im = [&](double t) { return -GaussianFilter::g(t) * std::sin(u * tau * t); };
            const double r = gauss_kronrod<double, 61>::integrate(re, -50.0, 50.0, 20, 1e-14);
            const double i = gauss_kronrod<double, 61>::integrate(im, -50.0, 50.0, 20, 1e-14);
            const double scale = GaussianFilter::kNormalisation / (2.0 * std::numbers::pi);
            EXPECT_NEAR(scale * r, f.p(u), 1e-8) << tau << " " << u;
            EXPECT_NEAR(scale * i, 0.0, 1e-8);
        }
    }
}

TEST(GaussianFilter, SampleMomentsAndDeterminism) {
    auto rng = make_stream(42, streams::kTimes);
    const int n = 100000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = GaussianFilter::sample_time(rng);
        sum += t;
        sum2 += t * t;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, 0.0, 0.02);
    EXPECT_NEAR(sum2 / n - mean * mean, 2.0, 0.05);

    auto a = make_stream(7, streams::kTimes);
    auto b = make_stream(7, streams::kTimes);
    for (int k = 0; k < 100; ++k) EXPECT_EQ(GaussianFilter::sample_time(a), GaussianFilter::sample_time(b));
}

TEST(GaussianFilter, RejectsInvalidParameters) {
    EXPECT_THROW(GaussianFilter(0.0, 6.0), InvalidArgument);
    EXPECT_THROW(GaussianFilter(1.0, -1.0), InvalidArgument);
}

TEST(TruncationBound, Examples) {
    EXPECT_NEAR(truncation_bound(2.0), std::exp(-1.0), 1e-15);
    const double t = cutoff_for_error(1e-3);
    EXPECT_NEAR(t, 2.0 * std::sqrt(std::log(1e3)), 1e-12);
    EXPECT_NEAR(t, 5.257, 1e-3);
    EXPECT_NEAR(truncation_bound(t), 1e-3, 1e-15);
    double prev = truncation_bound(0.1);
    for (double x = 0.2; x < 8.0; x += 0.1) {
        EXPECT_LT(truncation_bound(x), prev);
        prev = truncation_bound(x);
    }
    EXPECT_THROW(truncation_bound(0.0), InvalidArgument);
}

TEST(TruncationBound, DominatesGaussianTailMass) {
    for (double t : {0.5, 1.0, 2.0, 3.0, 4.0, 6.0}) {
        EXPECT_LE(std::erfc(t / 2.0), truncation_bound(t));
    }
}

TEST(ScaledSampler, Equivalence) {
    auto rng = make_stream(3, "ks");
    EXPECT_TRUE(scaled_sampler_equivalence_check(GaussianFilter(1.0, 6.0), 20000, rng).passed);
    EXPECT_TRUE(scaled_sampler_equivalence_check(GaussianFilter(5.0, 6.0), 100000, rng).passed);
    const auto wrong = scaled_sampler_equivalence_check(GaussianFilter(5.0, 6.0), 100000, rng, 2.0);
    EXPECT_FALSE(wrong.passed);
    EXPECT_GT(wrong.ks_statistic, wrong.critical_value);
}

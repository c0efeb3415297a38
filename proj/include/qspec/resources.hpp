#pragma once

#include <cstddef>

#include "qspec/coherence.hpp"

namespace qspec {

/// Constant inside the logarithm of the tau bound. The single-peak lemma
/// uses 20; the cutoff/sample-count lemma states 10.
enum class TauConstant { Twenty, Ten };

double tau_log_constant(TauConstant c) noexcept;

/// tau = (1 / (0.9 gamma)) sqrt(ln(C / (eps^2 Gamma_j))). Requires gamma > 0,
/// 0 < eps <= 0.2 gamma and 0 < Gamma_j <= 1.
double required_tau(double gamma, double eps, double gamma_j, TauConstant c = TauConstant::Twenty);

/// T = 2 sqrt(2 ln(sqrt(10) / (tau eps))). Requires sqrt(10) / (tau eps) > 1.
double required_T(double tau, double eps);

/// ceil(200 ln(4 / delta) / (eps^4 Gamma_j^2 tau^4)). Requires positive arguments and delta < 1.
long required_Ns(double eps, double gamma_j, double tau, double delta);

struct Lemma1Report {
    std::size_t j = 0;
    double delta_j = 0.0;
    double weight = 0.0;  ///< |Gamma_j|
    double gap = 0.0;     ///< gamma_j used for tau and the outer region
    double eps = 0.0;
    double tau = 0.0;
    /// max over |w - Delta_j| <= eps/2 of (Gamma_j - G(w)) / (tau^2 eps^2 Gamma_j); must be <= 0.3
    double inner_ratio = 0.0;
    /// min over eps < |w - Delta_j| < 0.1 gamma_j of the same ratio; must be >= 0.8
    double outer_ratio = 0.0;
    long points = 0;
    bool inner_ok = false;
    bool outer_ok = false;
    bool passed = false;
};

/**
 * Dense omega-scan (step eps/20) of both single-peak inequalities around
 * transition j, with tau from required_tau. Weights are rotated by the
 * phase of Gamma_j so that Gamma_j > 0. An isolated transition uses
 * `isolated_gap` as gamma_j.
 */
Lemma1Report lemma1_check(const CoherenceTable& table, std::size_t j, double eps, double isolated_gap = 10.0);

} // namespace qspec

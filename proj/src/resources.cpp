#include "qspec/resources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qspec/errors.hpp"
#include "qspec/io.hpp"

namespace qspec {

double tau_log_constant(TauConstant c) noexcept { return c == TauConstant::Twenty ? 20.0 : 10.0; }

double required_tau(double gamma, double eps, double gamma_j, TauConstant c) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("required_tau: need gamma > 0");
    if (!(eps > 0.0)) throw DomainError("required_tau: need eps > 0");
    if (!(eps <= 0.2 * gamma)) {
        throw DomainError("required_tau: need eps <= 0.2 gamma (eps = " + format_double(eps) +
                          ", gamma = " + format_double(gamma) + ")");
    }
    if (!(gamma_j > 0.0 && gamma_j <= 1.0)) throw DomainError("required_tau: need 0 < Gamma_j <= 1");
    return std::sqrt(std::log(tau_log_constant(c) / (eps * eps * gamma_j))) / (0.9 * gamma);
}

double required_T(double tau, double eps) {
    if (!(tau > 0.0) || !(eps > 0.0)) throw DomainError("required_T: need tau > 0 and eps > 0");
    const double arg = std::sqrt(10.0) / (tau * eps);
    if (!(arg > 1.0)) throw DomainError("required_T: need sqrt(10) / (tau eps) > 1");
    return 2.0 * std::sqrt(2.0 * std::log(arg));
}

long required_Ns(double eps, double gamma_j, double tau, double delta) {
    if (!(eps > 0.0) || !(gamma_j > 0.0) || !(tau > 0.0)) {
        throw DomainError("required_Ns: need eps, Gamma_j and tau > 0");
    }
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("required_Ns: need 0 < delta < 1");
    const double bound = 200.0 * std::log(4.0 / delta) / (std::pow(eps, 4) * gamma_j * gamma_j * std::pow(tau, 4));
    if (!(bound < 9.0e18)) throw ResourceError("required_Ns: sample count overflows");
    return static_cast<long>(std::ceil(bound));
}

Lemma1Report lemma1_check(const CoherenceTable& table, std::size_t j, double eps, double isolated_gap) {
    const auto& tr = table.transitions();
    if (j >= tr.size()) throw DomainError("lemma1_check: transition index out of range");
    Lemma1Report r;
    r.j = j;
    r.delta_j = tr[j].delta;
    r.weight = std::abs(tr[j].gamma);
    r.gap = std::isfinite(tr[j].gap) ? tr[j].gap : isolated_gap;
    r.eps = eps;
    if (!(r.weight > 0.0)) throw DomainError("lemma1_check: need Gamma_j != 0");
    if (!(eps > 0.0 && eps <= 0.2 * r.gap)) throw DomainError("lemma1_check: need 0 < eps <= 0.2 gamma_j");
    r.tau = required_tau(r.gap, eps, r.weight);

    const cplx unit = std::conj(tr[j].gamma) / r.weight;
    std::vector<std::pair<double, double>> w;
    w.reserve(tr.size());
    for (const auto& t : tr) w.emplace_back(t.delta, (t.gamma * unit).real());
    const GaussianFilter f(r.tau, 1.0);
    const auto G = [&](double omega) {
        double acc = 0.0;
        for (const auto& [d, g] : w) acc += g * f.p(d - omega);
        return acc;
    };
    const double scale = r.tau * r.tau * eps * eps * r.weight;

    r.inner_ratio = -std::numeric_limits<double>::infinity();
    r.outer_ratio = std::numeric_limits<double>::infinity();
    const double step = eps / 20.0;
    const double reach = 0.1 * r.gap;
    const auto n_steps = static_cast<long>(std::ceil(reach / step));
    for (long s = -n_steps; s <= n_steps; ++s) {
        const double off = std::clamp(static_cast<double>(s) * step, -reach, reach);
        const double ratio = (r.weight - G(r.delta_j + off)) / scale;
        const double a = std::abs(off);
        if (a <= 0.5 * eps) r.inner_ratio = std::max(r.inner_ratio, ratio);
        if (a > eps && a < reach) r.outer_ratio = std::min(r.outer_ratio, ratio);
        ++r.points;
    }
    r.inner_ok = r.inner_ratio <= 0.3;
    // An empty outer region (0.1 gamma_j <= eps) holds vacuously.
    r.outer_ok = r.outer_ratio >= 0.8;
    r.passed = r.inner_ok && r.outer_ok;
    return r;
}

} // namespace qspec

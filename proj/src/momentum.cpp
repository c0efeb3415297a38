#include "qspec/momentum.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "qspec/errors.hpp"
#include "qspec/io.hpp"

namespace qspec {

std::vector<PauliSum> site_family(int n_qubits, char letter) {
    if (letter != 'X' && letter != 'Y' && letter != 'Z') {
        throw InvalidArgument(std::string("site family needs one Pauli letter X, Y or Z, got '") + letter + "'");
    }
    std::vector<PauliSum> out;
    for (int x = 0; x < n_qubits; ++x) {
        out.emplace_back(n_qubits, std::vector<PauliTerm>{{1.0, PauliString::single(n_qubits, x, letter)}});
    }
    return out;
}

SiteResolvedSpectra estimate_site_spectra(const StateVector& psi0, const Engine& engine, char letter,
                                          const GaussianFilter& filter, const std::vector<double>& omega,
                                          const SamplingOptions& options) {
    const auto family = site_family(engine.n_qubits(), letter);
    const DrawSet draws = sample_draws(psi0, engine, family, filter, options);
    return site_spectra_from_draws(draws, letter, omega);
}

SiteResolvedSpectra site_spectra_from_draws(const DrawSet& draws, char letter, const std::vector<double>& omega) {
    SiteResolvedSpectra s;
    s.letter = letter;
    for (Eigen::Index x = 0; x < draws.values.cols(); ++x) s.sites.push_back(assemble(draws, x, omega));
    return s;
}

MomentumSpectrum spatial_fourier(const SiteResolvedSpectra& spectra, bool remove_k0) {
    const int n = spectra.n_sites();
    if (n < 2) throw InvalidArgument("spatial Fourier transform needs >= 2 sites");
    const auto& omega = spectra.sites.front().omega;
    for (const auto& s : spectra.sites) {
        if (s.omega != omega) throw InvalidArgument("site spectra must share one omega grid");
    }
    MomentumSpectrum m;
    m.omega = omega;
    m.k0_removed = remove_k0;
    const auto nw = static_cast<Eigen::Index>(omega.size());
    m.g = Eigen::MatrixXcd::Zero(n, nw);
    for (int km = 0; km < n; ++km) {
        const double k = 2.0 * std::numbers::pi * km / n;
        m.k.push_back(k);
        if (remove_k0 && km == 0) continue;
        for (int x = 0; x < n; ++x) {
            // Phase from the integer product keeps k x exact modulo N.
            const double arg = -2.0 * std::numbers::pi * static_cast<double>((km * x) % n) / n;
            const cplx phase{std::cos(arg), std::sin(arg)};
            const auto& gx = spectra.sites[static_cast<std::size_t>(x)].g_hat;
            for (Eigen::Index w = 0; w < nw; ++w) m.g(km, w) += phase * gx[static_cast<std::size_t>(w)];
        }
    }
    return m;
}

std::vector<DispersionPoint> extract_dispersion(const MomentumSpectrum& m, double lo, double hi,
                                                double floor_fraction, bool skip_k0) {
    std::vector<Eigen::Index> cols;
    for (std::size_t w = 0; w < m.omega.size(); ++w) {
        if (m.omega[w] >= lo && m.omega[w] <= hi) cols.push_back(static_cast<Eigen::Index>(w));
    }
    if (cols.empty()) throw InvalidArgument("dispersion window contains no grid points");
    const Eigen::MatrixXd inten = m.intensity();
    const double floor = floor_fraction * (inten.size() ? inten.maxCoeff() : 0.0);

    std::vector<DispersionPoint> out;
    for (Eigen::Index km = 0; km < inten.rows(); ++km) {
        DispersionPoint p;
        p.k_index = static_cast<int>(km);
        p.k = m.k[static_cast<std::size_t>(km)];
        Eigen::Index best = cols.front();
        for (auto w : cols) {
            if (inten(km, w) > inten(km, best)) best = w;
        }
        p.omega_star = m.omega[static_cast<std::size_t>(best)];
        p.intensity = inten(km, best);
        p.present = !(skip_k0 && km == 0) && !(m.k0_removed && km == 0) && p.intensity > floor && p.intensity > 0.0;
        out.push_back(p);
    }
    return out;
}

void write_momentum_csv(std::ostream& out, const MomentumSpectrum& m) {
    out << "k_index,k,omega,intensity\n";
    for (Eigen::Index km = 0; km < m.g.rows(); ++km) {
        for (Eigen::Index w = 0; w < m.g.cols(); ++w) {
            out << km << ',' << format_double(m.k[static_cast<std::size_t>(km)]) << ','
                << format_double(m.omega[static_cast<std::size_t>(w)]) << ',' << format_double(std::abs(m.g(km, w)))
                << '\n';
        }
    }
}

void write_dispersion_csv(std::ostream& out, const std::vector<DispersionPoint>& points) {
    out << "k_index,k,omega_star,intensity\n";
    for (const auto& p : points) {
        out << p.k_index << ',' << format_double(p.k) << ',';
        if (p.present) {
            out << format_double(p.omega_star) << ',' << format_double(p.intensity);
        } else {
            out << "absent," << format_double(p.intensity);
        }
        out << '\n';
    }
}

} // namespace qspec

#pragma once

#include <iosfwd>
#include <vector>

#include "qspec/estimator.hpp"

namespace qspec {

/// One spectrum per site for O(x) = letter on site x, all built from the same draws.
struct SiteResolvedSpectra {
    char letter = 'Y';
    std::vector<SpectralEstimate> sites;

    int n_sites() const noexcept { return static_cast<int>(sites.size()); }
};

/// The per-site observable family; rejects anything but a single X, Y or Z letter.
std::vector<PauliSum> site_family(int n_qubits, char letter);

SiteResolvedSpectra estimate_site_spectra(const StateVector& psi0, const Engine& engine, char letter,
                                          const GaussianFilter& filter, const std::vector<double>& omega,
                                          const SamplingOptions& options);

/// Site spectra from an existing draw set whose columns are the site family.
SiteResolvedSpectra site_spectra_from_draws(const DrawSet& draws, char letter, const std::vector<double>& omega);

/**
 * G_k(omega) = sum_x exp(-i k x) G_x(omega) for k_m = 2 pi m / N (no 1/N).
 * g(m, w) indexes momentum m and grid point w.
 */
struct MomentumSpectrum {
    std::vector<double> k;
    std::vector<double> omega;
    Eigen::MatrixXcd g;
    bool k0_removed = false;

    Eigen::MatrixXd intensity() const { return g.cwiseAbs(); }
};

MomentumSpectrum spatial_fourier(const SiteResolvedSpectra& spectra, bool remove_k0 = false);

struct DispersionPoint {
    int k_index = 0;
    double k = 0.0;
    double omega_star = 0.0;
    double intensity = 0.0;
    bool present = false;
};

/**
 * Per-k argmax of |G_k| over grid points in [lo, hi]. Rows whose maximum is
 * below floor_fraction times the global maximum (all rows, all grid points)
 * are reported absent. With skip_k0 the k = 0 row is reported absent.
 */
std::vector<DispersionPoint> extract_dispersion(const MomentumSpectrum& m, double lo, double hi,
                                                double floor_fraction = 1e-3, bool skip_k0 = true);

void write_momentum_csv(std::ostream& out, const MomentumSpectrum& m);
void write_dispersion_csv(std::ostream& out, const std::vector<DispersionPoint>& points);

} // namespace qspec

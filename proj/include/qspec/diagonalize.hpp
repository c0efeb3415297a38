#pragma once

#include <span>
#include <vector>

#include "qspec/pauli.hpp"
#include "qspec/state.hpp"

namespace qspec {

struct DiagonalizeOptions {
    int max_qubits = 14;
    /// Split into Hamming-weight blocks when H commutes with sum_q Z_q.
    bool use_weight_sectors = true;
};

/**
 * Full eigendecomposition H = sum_n E_n |n><n|.
 *
 * Eigenvectors are stored per symmetry sector: when H conserves the number
 * of set bits, each Hamming-weight block is diagonalised on its own, and
 * |n> is supported on a single block. Eigenvalue indices n are global and
 * ascending.
 */
class EDResult {
public:
    struct Sector {
        std::vector<std::uint64_t> basis;  ///< basis-state indices, ascending
        std::vector<std::size_t> global;   ///< global eigen index of each column
        Eigen::VectorXd energies;          ///< ascending within the sector
        Eigen::MatrixXd real_vectors;      ///< used when the block is real
        Eigen::MatrixXcd complex_vectors;  ///< used otherwise
        bool is_real = true;

        Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(basis.size()); }
    };

    EDResult(int n_qubits, std::vector<Sector> sectors);

    int n_qubits() const noexcept { return n_qubits_; }
    Eigen::Index dimension() const noexcept { return Eigen::Index{1} << n_qubits_; }
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
    const std::vector<Sector>& sectors() const noexcept { return sectors_; }

    /// |n> embedded in the full 2^N space.
    Eigen::VectorXcd eigenvector(std::size_t n) const;

    /// c_n = <n|psi>.
    Eigen::VectorXcd to_eigenbasis(const Eigen::Ref<const Eigen::VectorXcd>& psi) const;
    Eigen::VectorXcd from_eigenbasis(const Eigen::Ref<const Eigen::VectorXcd>& coeffs) const;

    /// Columns are exp(-i H t_b) applied to the state with eigen-coefficients c0.
    Eigen::MatrixXcd evolve_batch(const Eigen::Ref<const Eigen::VectorXcd>& c0, std::span<const double> times) const;

    /// Largest |H v - E v| / max(1, |E|) over all eigenpairs; for tests.
    double max_residual(const PauliSum& h) const;

private:
    int n_qubits_;
    std::vector<Sector> sectors_;
    std::vector<double> eigenvalues_;
    std::vector<std::pair<std::size_t, Eigen::Index>> locate_;  ///< global -> (sector, column)
};

/// True when every matrix element of H between different Hamming weights vanishes.
bool conserves_hamming_weight(const PauliSum& h, double tol = 1e-12);

EDResult diagonalize(const PauliSum& h, const DiagonalizeOptions& options = {});

/// psi(t) = sum_n exp(-i E_n t) <n|psi0> |n>.
StateVector exact_evolve(const EDResult& ed, const StateVector& psi0, double t);

} // namespace qspec

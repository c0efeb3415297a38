#pragma once

#include "qspec/pauli.hpp"

namespace qspec {

/// J sum_i (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1}) + h_z sum_i Z_i on an n-site chain.
PauliSum build_heisenberg(int n, double J, double h_z, bool periodic);

/// J sum_i Z_i Z_{i+1} + h_x sum_i X_i + h_z sum_i Z_i.
PauliSum build_tfim(int n, double J, double h_x, double h_z, bool periodic);

/**
 * 1D Fermi-Hubbard chain (open boundary) under Jordan-Wigner.
 *
 * Mode layout: spin-up site i -> qubit i, spin-down site i -> qubit n_sites + i.
 * Occupation n_q = (I - Z_q) / 2.
 */
PauliSum build_fermi_hubbard_1d(int n_sites, double t_hop, double U);

/// Total particle number sum_q (I - Z_q) / 2 on n_qubits modes.
PauliSum number_operator(int n_qubits);

/// Sum of `letter` over all sites, scaled by `scale`.
PauliSum uniform_field(int n_qubits, char letter, double scale = 1.0);

} // namespace qspec

#pragma once

#include <vector>

#include "qspec/state.hpp"
#include "qspec/trotter.hpp"

namespace qspec {

/// Mixed state over N <= kMaxQubits qubits, stored densely.
class DensityMatrix {
public:
    static constexpr int kMaxQubits = 10;

    DensityMatrix(int n_qubits, Eigen::MatrixXcd rho);
    static DensityMatrix pure(const StateVector& psi);

    int n_qubits() const noexcept { return n_qubits_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
    double trace() const { return rho_.trace().real(); }

    /// rho <- exp(-i angle P) rho exp(i angle P).
    void rotate(const PauliString& p, double angle);
    /// rho <- (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z) on one qubit.
    void depolarize(int site, double p);

    double expectation(const PauliString& p) const;
    double expectation(const PauliSum& observable) const;

private:
    int n_qubits_;
    Eigen::MatrixXcd rho_;
};

struct LocalDepolarizingModel {
    double p_gate = 0.0;  ///< per touched qubit after every gate, in [0, 1)
};

void validate(const LocalDepolarizingModel& model);

/// Runs the gates, depolarising every qubit in a gate's support after it.
void apply_noisy_gates(DensityMatrix& rho, const std::vector<PauliRotation>& gates, const LocalDepolarizingModel& model);

DensityMatrix evolve_density_local_noise(const TrotterPlan& plan, const DensityMatrix& rho0, double t,
                                         const LocalDepolarizingModel& model);

} // namespace qspec

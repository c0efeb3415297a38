#pragma once

#include <optional>
#include <vector>

#include "qspec/pauli.hpp"

namespace qspec {

/// Normalised pure state over N qubits; amplitude index bit k is qubit k.
class StateVector {
public:
    static constexpr double kNormTolerance = 1e-10;

    /// Takes ownership of the amplitudes; throws unless the norm is 1 within kNormTolerance.
    StateVector(int n_qubits, Eigen::VectorXcd amplitudes);

    static StateVector basis(int n_qubits, std::uint64_t index);

    int n_qubits() const noexcept { return n_qubits_; }
    Eigen::Index dimension() const noexcept { return amplitudes_.size(); }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    cplx operator[](Eigen::Index i) const { return amplitudes_[i]; }

private:
    int n_qubits_;
    Eigen::VectorXcd amplitudes_;
};

enum class Gate { X, Y, Z, Rx, Ry, Rz };

struct GateOp {
    int site = 0;
    Gate gate = Gate::X;
    double theta = 0.0; ///< rotation angle; R_a(theta) = exp(-i theta sigma_a / 2)
};

/**
 * Initial-state recipe: a product base state followed by single-qubit gates.
 *
 * With `beta` set, the gate sequence B is applied as a perturbation instead:
 * |psi> is proportional to |base> + beta B |base>.
 */
struct StatePrepSpec {
    enum class Base { AllPlus, AllZero, Custom };

    Base base = Base::AllPlus;
    std::vector<cplx> custom_amplitudes;
    std::vector<GateOp> operations;
    std::optional<double> beta;
};

StateVector prepare_state(const StatePrepSpec& spec, int n_qubits);

/// Applies a 2x2 unitary [[u00, u01], [u10, u11]] on `site` in place.
void apply_single_qubit(Eigen::Ref<Eigen::VectorXcd> v, int site, const Eigen::Matrix2cd& u);
Eigen::Matrix2cd gate_matrix(Gate gate, double theta);

/// v <- exp(-i angle P) v.
void apply_pauli_rotation(Eigen::Ref<Eigen::VectorXcd> v, const PauliString& p, double angle);

/// <psi|O|psi>; the imaginary residue (below 1e-10 for Hermitian O) is discarded.
double expectation(const StateVector& psi, const PauliSum& observable);
double expectation(const Eigen::Ref<const Eigen::VectorXcd>& psi, const PauliSum& observable);

} // namespace qspec

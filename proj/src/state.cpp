#include "qspec/state.hpp"

#include <cmath>
#include <string>

#include "qspec/errors.hpp"

namespace qspec {

StateVector::StateVector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits < 1 || n_qubits > kMaxMaskQubits) throw InvalidArgument("invalid qubit count");
    if (amplitudes_.size() != (Eigen::Index{1} << n_qubits)) {
        throw DimensionMismatch("state has " + std::to_string(amplitudes_.size()) + " amplitudes, expected 2^" +
                                std::to_string(n_qubits));
    }
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
        throw InvalidArgument("state is not normalised (norm " + std::to_string(amplitudes_.norm()) + ")");
    }
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(n_qubits, std::move(v));
}

Eigen::Matrix2cd gate_matrix(Gate gate, double theta) {
    if (!std::isfinite(theta)) throw InvalidArgument("rotation angle must be finite");
    const cplx i{0.0, 1.0};
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Eigen::Matrix2cd u;
    switch (gate) {
    case Gate::X: u << 0, 1, 1, 0; break;
    case Gate::Y: u << 0, -i, i, 0; break;
    case Gate::Z: u << 1, 0, 0, -1; break;
    case Gate::Rx: u << c, -i * s, -i * s, c; break;
    case Gate::Ry: u << c, -s, s, c; break;
    case Gate::Rz: u << std::exp(-i * (theta / 2.0)), 0, 0, std::exp(i * (theta / 2.0)); break;
    }
    return u;
}

void apply_single_qubit(Eigen::Ref<Eigen::VectorXcd> v, int site, const Eigen::Matrix2cd& u) {
    const auto bit = std::uint64_t{1} << site;
    const auto dim = static_cast<std::uint64_t>(v.size());
    for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & bit) continue;
        const auto i0 = static_cast<Eigen::Index>(b);
        const auto i1 = static_cast<Eigen::Index>(b | bit);
        const cplx a0 = v[i0];
        const cplx a1 = v[i1];
        v[i0] = u(0, 0) * a0 + u(0, 1) * a1;
        v[i1] = u(1, 0) * a0 + u(1, 1) * a1;
    }
}

void apply_pauli_rotation(Eigen::Ref<Eigen::VectorXcd> v, const PauliString& p, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const auto x = p.x_mask();
    const auto dim = static_cast<std::uint64_t>(v.size());
    const cplx mis{0.0, -s};
    if (x == 0) {
        // Diagonal: exp(-i angle (+-1)).
        const cplx plus{c, -s};
        const cplx minus{c, s};
        for (std::uint64_t b = 0; b < dim; ++b) {
            const double sign = p.phase(b).real();
            v[static_cast<Eigen::Index>(b)] *= sign > 0 ? plus : minus;
        }
        return;
    }
    // Pairs (b, b^x) mix; visit each pair once from its smaller index.
    for (std::uint64_t b = 0; b < dim; ++b) {
        const std::uint64_t f = b ^ x;
        if (f < b) continue;
        const auto ib = static_cast<Eigen::Index>(b);
        const auto jf = static_cast<Eigen::Index>(f);
        const cplx vb = v[ib];
        const cplx vf = v[jf];
        // (P v)[f] = phase(b) v[b], (P v)[b] = phase(f) v[f]
        v[ib] = c * vb + mis * p.phase(f) * vf;
        v[jf] = c * vf + mis * p.phase(b) * vb;
    }
}

StateVector prepare_state(const StatePrepSpec& spec, int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxMaskQubits) throw InvalidArgument("invalid qubit count");
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::VectorXcd base;
    switch (spec.base) {
    case StatePrepSpec::Base::AllPlus:
        base = Eigen::VectorXcd::Constant(dim, cplx{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
        break;
    case StatePrepSpec::Base::AllZero:
        base = Eigen::VectorXcd::Zero(dim);
        base[0] = 1.0;
        break;
    case StatePrepSpec::Base::Custom: {
        if (static_cast<Eigen::Index>(spec.custom_amplitudes.size()) != dim) {
            throw DimensionMismatch("custom state needs " + std::to_string(dim) + " amplitudes, got " +
                                    std::to_string(spec.custom_amplitudes.size()));
        }
        base = Eigen::Map<const Eigen::VectorXcd>(spec.custom_amplitudes.data(), dim);
        const double norm = base.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("custom state has zero or invalid norm");
        base /= norm;
        break;
    }
    }

    Eigen::VectorXcd v = base;
    for (const auto& op : spec.operations) {
        if (op.site < 0 || op.site >= n_qubits) {
            throw InvalidArgument("state-prep site " + std::to_string(op.site) + " out of range for " +
                                  std::to_string(n_qubits) + " qubits");
        }
        apply_single_qubit(v, op.site, gate_matrix(op.gate, op.theta));
    }
    if (spec.beta) {
        if (!std::isfinite(*spec.beta)) throw InvalidArgument("beta must be finite");
        v = base + *spec.beta * v;
        const double norm = v.norm();
        if (!(norm > 1e-300)) throw InvalidArgument("perturbed state vanishes");
        v /= norm;
    }
    return StateVector(n_qubits, std::move(v));
}

double expectation(const Eigen::Ref<const Eigen::VectorXcd>& psi, const PauliSum& observable) {
    if (psi.size() != (Eigen::Index{1} << observable.n_qubits())) {
        throw DimensionMismatch("observable and state dimensions differ");
    }
    double acc = 0.0;
    for (const auto& t : observable.terms()) {
        acc += t.coefficient * (t.string.is_identity() ? psi.squaredNorm() : pauli_expectation(t.string, psi));
    }
    return acc;
}

double expectation(const StateVector& psi, const PauliSum& observable) {
    return expectation(psi.amplitudes(), observable);
}

} // namespace qspec

#include "qspec/engine.hpp"

#include <algorithm>
#include <cmath>

#include "qspec/errors.hpp"

namespace qspec {

namespace {

constexpr std::size_t kBatch = 32;

void check_strings(int n_qubits, const std::vector<PauliString>& strings) {
    for (const auto& s : strings) {
        if (s.n_qubits() != n_qubits) throw DimensionMismatch("observable string length differs from engine qubit count");
    }
}

void check_state(int n_qubits, const StateVector& psi0) {
    if (psi0.n_qubits() != n_qubits) throw DimensionMismatch("initial state qubit count differs from engine");
}

} // namespace

ExactEngine::ExactEngine(const PauliSum& h, const DiagonalizeOptions& options)
    : ed_(std::make_shared<const EDResult>(diagonalize(h, options))) {}

ExactEngine::ExactEngine(std::shared_ptr<const EDResult> ed) : ed_(std::move(ed)) {
    if (!ed_) throw InvalidArgument("null eigendecomposition");
}

Eigen::MatrixXd ExactEngine::expectations(const StateVector& psi0, std::span<const double> times,
                                          const std::vector<PauliString>& strings) const {
    check_state(n_qubits(), psi0);
    check_strings(n_qubits(), strings);
    const Eigen::VectorXcd c0 = ed_->to_eigenbasis(psi0.amplitudes());
    Eigen::MatrixXd out(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(strings.size()));
    const auto n_batches = static_cast<long>((times.size() + kBatch - 1) / kBatch);

#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < n_batches; ++b) {
        const auto begin = static_cast<std::size_t>(b) * kBatch;
        const auto count = std::min(kBatch, times.size() - begin);
        const Eigen::MatrixXcd states = ed_->evolve_batch(c0, times.subspan(begin, count));
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = 0; j < strings.size(); ++j) {
                out(static_cast<Eigen::Index>(begin + i), static_cast<Eigen::Index>(j)) =
                    pauli_expectation(strings[j], states.col(static_cast<Eigen::Index>(i)));
            }
        }
    }
    return out;
}

TrotterEngine::TrotterEngine(const PauliSum& h, int steps_per_unit) : plan_(h, steps_per_unit) {}

Eigen::MatrixXd TrotterEngine::expectations(const StateVector& psi0, std::span<const double> times,
                                            const std::vector<PauliString>& strings) const {
    check_state(n_qubits(), psi0);
    check_strings(n_qubits(), strings);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(strings.size()));
    const auto n = static_cast<long>(times.size());

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        Eigen::VectorXcd v = psi0.amplitudes();
        apply_gates(v, plan_.gates(times[static_cast<std::size_t>(i)]));
        for (std::size_t j = 0; j < strings.size(); ++j) {
            out(i, static_cast<Eigen::Index>(j)) = pauli_expectation(strings[j], v);
        }
    }
    return out;
}

LocalNoiseEngine::LocalNoiseEngine(const PauliSum& h, int steps_per_unit, LocalDepolarizingModel model)
    : plan_(h, steps_per_unit), model_(model) {
    validate(model_);
    if (plan_.n_qubits() > DensityMatrix::kMaxQubits) {
        throw ResourceError("local noise simulation capped at " + std::to_string(DensityMatrix::kMaxQubits) + " qubits");
    }
}

Eigen::MatrixXd LocalNoiseEngine::expectations(const StateVector& psi0, std::span<const double> times,
                                               const std::vector<PauliString>& strings) const {
    check_state(n_qubits(), psi0);
    check_strings(n_qubits(), strings);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(times.size()), static_cast<Eigen::Index>(strings.size()));
    const auto n = static_cast<long>(times.size());
    const DensityMatrix rho0 = DensityMatrix::pure(psi0);

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        const DensityMatrix rho = evolve_density_local_noise(plan_, rho0, times[static_cast<std::size_t>(i)], model_);
        for (std::size_t j = 0; j < strings.size(); ++j) out(i, static_cast<Eigen::Index>(j)) = rho.expectation(strings[j]);
    }
    return out;
}

GlobalNoiseEngine::GlobalNoiseEngine(std::shared_ptr<const Engine> inner, GlobalDepolarizingModel model)
    : inner_(std::move(inner)), model_(model) {
    if (!inner_) throw InvalidArgument("null inner engine");
    validate(model_);
}

Eigen::MatrixXd GlobalNoiseEngine::expectations(const StateVector& psi0, std::span<const double> times,
                                                const std::vector<PauliString>& strings) const {
    Eigen::MatrixXd out = inner_->expectations(psi0, times, strings);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double damp = std::exp(-model_.lambda * std::abs(times[static_cast<std::size_t>(i)]));
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            if (!strings[static_cast<std::size_t>(j)].is_identity()) out(i, j) *= damp;
        }
    }
    return out;
}

} // namespace qspec

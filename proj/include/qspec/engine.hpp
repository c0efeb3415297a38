#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qspec/diagonalize.hpp"
#include "qspec/noise.hpp"
#include "qspec/trotter.hpp"

namespace qspec {

/**
 * Time-evolution backend. expectations(psi0, times, strings)(i, j) is the
 * expectation of strings[j] at physical time times[i] starting from psi0.
 * Implementations are deterministic and may parallelise over times.
 */
class Engine {
public:
    virtual ~Engine() = default;
    virtual int n_qubits() const = 0;
    virtual std::string name() const = 0;
    virtual Eigen::MatrixXd expectations(const StateVector& psi0, std::span<const double> times,
                                         const std::vector<PauliString>& strings) const = 0;
};

/// Spectral propagation through one eigendecomposition reused for all times.
class ExactEngine final : public Engine {
public:
    explicit ExactEngine(const PauliSum& h, const DiagonalizeOptions& options = {});
    explicit ExactEngine(std::shared_ptr<const EDResult> ed);

    int n_qubits() const override { return ed_->n_qubits(); }
    std::string name() const override { return "exact"; }
    Eigen::MatrixXd expectations(const StateVector& psi0, std::span<const double> times,
                                 const std::vector<PauliString>& strings) const override;

    const EDResult& ed() const noexcept { return *ed_; }
    std::shared_ptr<const EDResult> shared_ed() const noexcept { return ed_; }

private:
    std::shared_ptr<const EDResult> ed_;
};

class TrotterEngine final : public Engine {
public:
    TrotterEngine(const PauliSum& h, int steps_per_unit);

    int n_qubits() const override { return plan_.n_qubits(); }
    std::string name() const override { return "trotter"; }
    Eigen::MatrixXd expectations(const StateVector& psi0, std::span<const double> times,
                                 const std::vector<PauliString>& strings) const override;

    const TrotterPlan& plan() const noexcept { return plan_; }

private:
    TrotterPlan plan_;
};

/// Trotter circuit on a density matrix with local depolarising noise after every gate.
class LocalNoiseEngine final : public Engine {
public:
    LocalNoiseEngine(const PauliSum& h, int steps_per_unit, LocalDepolarizingModel model);

    int n_qubits() const override { return plan_.n_qubits(); }
    std::string name() const override { return "trotter+local-noise"; }
    Eigen::MatrixXd expectations(const StateVector& psi0, std::span<const double> times,
                                 const std::vector<PauliString>& strings) const override;

private:
    TrotterPlan plan_;
    LocalDepolarizingModel model_;
};

/// Wraps another engine and damps every value by exp(-lambda |t|).
class GlobalNoiseEngine final : public Engine {
public:
    GlobalNoiseEngine(std::shared_ptr<const Engine> inner, GlobalDepolarizingModel model);

    int n_qubits() const override { return inner_->n_qubits(); }
    std::string name() const override { return inner_->name() + "+global-noise"; }
    Eigen::MatrixXd expectations(const StateVector& psi0, std::span<const double> times,
                                 const std::vector<PauliString>& strings) const override;

private:
    std::shared_ptr<const Engine> inner_;
    GlobalDepolarizingModel model_;
};

} // namespace qspec

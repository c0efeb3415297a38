#pragma once

#include <string>
#include <vector>

#include "qspec/pauli.hpp"
#include "qspec/state.hpp"

namespace qspec {

/// exp(-i angle P).
struct PauliRotation {
    PauliString string;
    double angle = 0.0;
};

struct TrotterGroup {
    std::string label;
    std::vector<PauliTerm> terms;  ///< pairwise commuting
};

/**
 * Partition of H into commuting groups for the symmetric second-order
 * product formula.
 *
 * Grouping: single-site terms by letter ("field:X", ...), identity
 * ("identity"), nearest-neighbour bonds by parity of their left site
 * ("even", "odd"), the closing bond of an odd periodic chain ("wrap"), and
 * anything else first-fit into "misc:<k>". One step of length dt applies
 * g_1(dt/2) ... g_{m-1}(dt/2) g_m(dt) g_{m-1}(dt/2) ... g_1(dt/2).
 */
class TrotterPlan {
public:
    TrotterPlan(const PauliSum& h, int steps_per_unit);

    int n_qubits() const noexcept { return n_qubits_; }
    int steps_per_unit() const noexcept { return steps_per_unit_; }
    const std::vector<TrotterGroup>& groups() const noexcept { return groups_; }

    /// ceil(|t| * steps_per_unit); zero only for t == 0.
    long step_count(double t) const;

    /// Full gate sequence for exp(-i H t), adjacent half steps of the outer group fused.
    std::vector<PauliRotation> gates(double t) const;
    /// `steps` steps of fixed length dt, without fusing across steps.
    std::vector<PauliRotation> gates_fixed(double dt, long steps) const;

private:
    std::vector<PauliRotation> sequence(double dt, long steps, bool fuse) const;

    int n_qubits_;
    int steps_per_unit_;
    std::vector<TrotterGroup> groups_;
};

/// Gate sequence of the inverse: reversed order, negated angles.
std::vector<PauliRotation> inverse(const std::vector<PauliRotation>& gates);

void apply_gates(Eigen::Ref<Eigen::VectorXcd> v, const std::vector<PauliRotation>& gates);

StateVector trotter2_evolve(const TrotterPlan& plan, const StateVector& psi0, double t);

} // namespace qspec

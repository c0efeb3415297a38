#pragma once

#include <iosfwd>
#include <limits>
#include <utility>
#include <vector>

#include "qspec/diagonalize.hpp"
#include "qspec/filter.hpp"

namespace qspec {

struct CoherenceEntry {
    std::size_t n_prime = 0;
    std::size_t n = 0;
    double delta = 0.0;  ///< E_{n'} - E_n
    cplx gamma;          ///< <n'|psi0><psi0|n> <n|O|n'>
};

/// Distinct transition energy with merged weight and distance to its neighbours.
struct Transition {
    double delta = 0.0;
    cplx gamma;
    double gap = std::numeric_limits<double>::infinity();
};

struct CoherenceOptions {
    double floor = 1e-10;            ///< entries with |Gamma| below are dropped
    double merge_tolerance = 1e-9;   ///< transitions closer than this are merged
    int max_qubits = 11;
};

/**
 * Coherences Gamma_{n'n} of an initial state and observable. With them,
 * <O>(t) = sum Gamma_{n'n} exp(-i Delta_{n'n} t) and the filtered detector
 * is G(omega) = sum Gamma_{n'n} p(tau (Delta_{n'n} - omega)).
 */
class CoherenceTable {
public:
    CoherenceTable(std::vector<CoherenceEntry> entries, double merge_tolerance = 1e-9);

    /// Table with one entry per (Delta, Gamma) pair, for synthetic spectra.
    static CoherenceTable from_transitions(const std::vector<std::pair<double, cplx>>& transitions,
                                           double merge_tolerance = 1e-9);

    const std::vector<CoherenceEntry>& entries() const noexcept { return entries_; }
    /// Ascending in delta.
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    cplx total() const;

private:
    std::vector<CoherenceEntry> entries_;
    std::vector<Transition> transitions_;
};

CoherenceTable coherence_table(const EDResult& ed, const StateVector& psi0, const PauliSum& observable,
                               const CoherenceOptions& options = {});

/// sum Gamma p(tau (Delta - omega)); complex in general, see Transition::gamma.
cplx exact_G(const CoherenceTable& table, const GaussianFilter& filter, double omega);

/// Transitions with |Gamma_j| >= min_weight.
std::vector<Transition> significant_transitions(const CoherenceTable& table, double min_weight);

void write_coherence_csv(std::ostream& out, const CoherenceTable& table);

} // namespace qspec

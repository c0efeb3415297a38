#pragma once

#include "qspec/random.hpp"
#include "qspec/state.hpp"

namespace qspec {

/**
 * Finite-shot estimate of a +-1-valued observable with mean `value`: the
 * number of +1 outcomes is Binomial(shots, (1 + value) / 2).
 */
double sample_from_value(double value, long shots, Rng& rng);

/// Finite-shot estimate of <psi|P|psi> for a non-identity Pauli string.
double sample_expectation(const StateVector& psi, const PauliString& p, long shots, Rng& rng);

} // namespace qspec

#include "qspec/measure.hpp"

#include <algorithm>
#include <cmath>

#include "qspec/errors.hpp"

namespace qspec {

double sample_from_value(double value, long shots, Rng& rng) {
    if (shots < 1) throw InvalidArgument("shots must be >= 1");
    if (!std::isfinite(value)) throw InvalidArgument("expectation value must be finite");
    const double prob = std::clamp((1.0 + value) / 2.0, 0.0, 1.0);
    std::binomial_distribution<long> dist(shots, prob);
    const long plus = dist(rng);
    return static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
}

double sample_expectation(const StateVector& psi, const PauliString& p, long shots, Rng& rng) {
    if (p.n_qubits() != psi.n_qubits()) throw DimensionMismatch("Pauli string and state qubit counts differ");
    if (p.is_identity()) throw InvalidArgument("identity string has no +-1 measurement outcomes to sample");
    return sample_from_value(pauli_expectation(p, psi.amplitudes()), shots, rng);
}

} // namespace qspec

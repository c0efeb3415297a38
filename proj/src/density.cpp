#include "qspec/density.hpp"

#include <cmath>
#include <string>

#include "qspec/errors.hpp"

namespace qspec {

DensityMatrix::DensityMatrix(int n_qubits, Eigen::MatrixXcd rho) : n_qubits_(n_qubits), rho_(std::move(rho)) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ResourceError("density-matrix simulation capped at " + std::to_string(kMaxQubits) + " qubits");
    }
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (rho_.rows() != dim || rho_.cols() != dim) throw DimensionMismatch("density matrix has wrong dimension");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    const auto& v = psi.amplitudes();
    return DensityMatrix(psi.n_qubits(), v * v.adjoint());
}

void DensityMatrix::rotate(const PauliString& p, double angle) {
    // Left factor U acts on every column; the right factor U^dagger = cos + i sin P
    // mixes column c with column c ^ x: (rho U^dagger)_c = cos rho_c + i sin phase(c) rho_{c^x}.
    for (Eigen::Index c = 0; c < rho_.cols(); ++c) apply_pauli_rotation(rho_.col(c), p, angle);
    const double co = std::cos(angle);
    const double si = std::sin(angle);
    const auto x = p.x_mask();
    const auto dim = static_cast<std::uint64_t>(rho_.cols());
    if (x == 0) {
        for (std::uint64_t c = 0; c < dim; ++c) rho_.col(static_cast<Eigen::Index>(c)) *= cplx{co, si * p.phase(c).real()};
        return;
    }
    Eigen::VectorXcd tmp(rho_.rows());
    for (std::uint64_t c = 0; c < dim; ++c) {
        const std::uint64_t f = c ^ x;
        if (f < c) continue;
        const auto ic = static_cast<Eigen::Index>(c);
        const auto jf = static_cast<Eigen::Index>(f);
        tmp = rho_.col(ic);
        rho_.col(ic) = co * tmp + cplx{0.0, si} * p.phase(c) * rho_.col(jf);
        rho_.col(jf) = co * rho_.col(jf) + cplx{0.0, si} * p.phase(f) * tmp;
    }
}

void DensityMatrix::depolarize(int site, double p) {
    if (p == 0.0) return;
    const auto bit = Eigen::Index{1} << site;
    const double keep = 1.0 - 2.0 * p / 3.0;
    const double swap = 2.0 * p / 3.0;
    const double off = 1.0 - 4.0 * p / 3.0;
    const Eigen::Index dim = rho_.rows();
    for (Eigen::Index c = 0; c < dim; ++c) {
        if (c & bit) continue;
        const Eigen::Index c1 = c | bit;
        for (Eigen::Index r = 0; r < dim; ++r) {
            if (r & bit) continue;
            const Eigen::Index r1 = r | bit;
            const cplx a = rho_(r, c);
            const cplx b = rho_(r1, c1);
            rho_(r, c) = keep * a + swap * b;
            rho_(r1, c1) = keep * b + swap * a;
            rho_(r1, c) *= off;
            rho_(r, c1) *= off;
        }
    }
}

double DensityMatrix::expectation(const PauliString& p) const {
    if (p.n_qubits() != n_qubits_) throw DimensionMismatch("observable and density matrix qubit counts differ");
    cplx acc{0.0, 0.0};
    const auto x = p.x_mask();
    for (Eigen::Index b = 0; b < rho_.rows(); ++b) {
        const auto ub = static_cast<std::uint64_t>(b);
        acc += p.phase(ub) * rho_(b, static_cast<Eigen::Index>(ub ^ x));
    }
    return acc.real();
}

double DensityMatrix::expectation(const PauliSum& observable) const {
    double acc = 0.0;
    for (const auto& t : observable.terms()) acc += t.coefficient * expectation(t.string);
    return acc;
}

void validate(const LocalDepolarizingModel& model) {
    if (!(model.p_gate >= 0.0 && model.p_gate < 1.0)) throw InvalidArgument("p_gate must lie in [0, 1)");
}

void apply_noisy_gates(DensityMatrix& rho, const std::vector<PauliRotation>& gates, const LocalDepolarizingModel& model) {
    validate(model);
    for (const auto& g : gates) {
        rho.rotate(g.string, g.angle);
        if (model.p_gate > 0.0) {
            for (int q : g.string.support()) rho.depolarize(q, model.p_gate);
        }
    }
}

DensityMatrix evolve_density_local_noise(const TrotterPlan& plan, const DensityMatrix& rho0, double t,
                                         const LocalDepolarizingModel& model) {
    if (plan.n_qubits() != rho0.n_qubits()) throw DimensionMismatch("plan and density matrix qubit counts differ");
    DensityMatrix rho = rho0;
    apply_noisy_gates(rho, plan.gates(t), model);
    return rho;
}

} // namespace qspec

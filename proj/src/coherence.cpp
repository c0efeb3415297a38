#include "qspec/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qspec/errors.hpp"
#include "qspec/io.hpp"

namespace qspec {

CoherenceTable::CoherenceTable(std::vector<CoherenceEntry> entries, double merge_tolerance)
    : entries_(std::move(entries)) {
    if (!(merge_tolerance >= 0.0)) throw InvalidArgument("merge tolerance must be >= 0");
    std::vector<std::size_t> order(entries_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return entries_[a].delta < entries_[b].delta; });

    // Chain merge: a cluster continues while consecutive energies differ by <= tolerance.
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() &&
               entries_[order[end]].delta - entries_[order[end - 1]].delta <= merge_tolerance) {
            ++end;
        }
        Transition t;
        double sum_delta = 0.0;
        for (std::size_t k = start; k < end; ++k) {
            sum_delta += entries_[order[k]].delta;
            t.gamma += entries_[order[k]].gamma;
        }
        t.delta = sum_delta / static_cast<double>(end - start);
        transitions_.push_back(t);
        start = end;
    }
    for (std::size_t j = 0; j < transitions_.size(); ++j) {
        double gap = std::numeric_limits<double>::infinity();
        if (j > 0) gap = std::min(gap, transitions_[j].delta - transitions_[j - 1].delta);
        if (j + 1 < transitions_.size()) gap = std::min(gap, transitions_[j + 1].delta - transitions_[j].delta);
        transitions_[j].gap = gap;
    }
}

CoherenceTable CoherenceTable::from_transitions(const std::vector<std::pair<double, cplx>>& transitions,
                                                double merge_tolerance) {
    std::vector<CoherenceEntry> entries;
    entries.reserve(transitions.size());
    for (std::size_t j = 0; j < transitions.size(); ++j) {
        entries.push_back({j, 0, transitions[j].first, transitions[j].second});
    }
    return CoherenceTable(std::move(entries), merge_tolerance);
}

cplx CoherenceTable::total() const {
    cplx acc{0.0, 0.0};
    for (const auto& e : entries_) acc += e.gamma;
    return acc;
}

CoherenceTable coherence_table(const EDResult& ed, const StateVector& psi0, const PauliSum& observable,
                               const CoherenceOptions& options) {
    if (ed.n_qubits() > options.max_qubits) {
        throw ResourceError("coherence table capped at " + std::to_string(options.max_qubits) + " qubits");
    }
    if (psi0.n_qubits() != ed.n_qubits() || observable.n_qubits() != ed.n_qubits()) {
        throw DimensionMismatch("state, observable and Hamiltonian qubit counts differ");
    }
    const Eigen::VectorXcd c = ed.to_eigenbasis(psi0.amplitudes());
    // Only eigenstates with weight in psi0 can carry a coherence above the floor.
    const double amp_floor = options.floor * 1e-3;
    std::vector<std::size_t> keep;
    for (Eigen::Index n = 0; n < c.size(); ++n) {
        if (std::abs(c[n]) > amp_floor) keep.push_back(static_cast<std::size_t>(n));
    }
    const auto dim = ed.dimension();
    const auto k = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXcd v(dim, k);
    for (Eigen::Index j = 0; j < k; ++j) v.col(j) = ed.eigenvector(keep[static_cast<std::size_t>(j)]);
    Eigen::MatrixXcd ov(dim, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::VectorXcd out(dim);
        apply_sum(observable, v.col(j), out);
        ov.col(j) = out;
    }
    // m(a, b) = <a|O|b> over the kept eigenstates.
    const Eigen::MatrixXcd m = v.adjoint() * ov;

    const auto& e = ed.eigenvalues();
    std::vector<CoherenceEntry> entries;
    for (Eigen::Index b = 0; b < k; ++b) {
        const auto np = keep[static_cast<std::size_t>(b)];
        for (Eigen::Index a = 0; a < k; ++a) {
            const auto n = keep[static_cast<std::size_t>(a)];
            const cplx gamma = c[static_cast<Eigen::Index>(np)] * std::conj(c[static_cast<Eigen::Index>(n)]) * m(a, b);
            if (std::abs(gamma) < options.floor) continue;
            entries.push_back({np, n, e[np] - e[n], gamma});
        }
    }
    return CoherenceTable(std::move(entries), options.merge_tolerance);
}

cplx exact_G(const CoherenceTable& table, const GaussianFilter& filter, double omega) {
    cplx acc{0.0, 0.0};
    for (const auto& t : table.transitions()) acc += t.gamma * filter.p(t.delta - omega);
    return acc;
}

std::vector<Transition> significant_transitions(const CoherenceTable& table, double min_weight) {
    std::vector<Transition> out;
    for (const auto& t : table.transitions()) {
        if (std::abs(t.gamma) >= min_weight) out.push_back(t);
    }
    return out;
}

void write_coherence_csv(std::ostream& out, const CoherenceTable& table) {
    out << "n_prime,n,delta,gamma_re,gamma_im\n";
    for (const auto& e : table.entries()) {
        out << e.n_prime << ',' << e.n << ',' << format_double(e.delta) << ',' << format_double(e.gamma.real()) << ','
            << format_double(e.gamma.imag()) << '\n';
    }
}

} // namespace qspec

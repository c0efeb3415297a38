#pragma once

// Independent dense oracles for the tests: Kronecker-product Pauli matrices
// and Eigen's Hermitian eigensolver.

#include <complex>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "qspec/pauli.hpp"

namespace qspec::test {

inline Eigen::Matrix2cd letter_matrix(char c) {
    using C = std::complex<double>;
    Eigen::Matrix2cd m;
    switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
    }
    return m;
}

/// Kronecker product with qubit 0 as the least significant index bit.
inline Eigen::MatrixXcd kron_pauli(const std::string& letters) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (char c : letters) {
        const Eigen::Matrix2cd m = letter_matrix(c);
        Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) = m(a, b) * out;
        out = next;
    }
    return out;
}

inline Eigen::MatrixXcd kron_sum(const PauliSum& s) {
    const Eigen::Index d = Eigen::Index{1} << s.n_qubits();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& t : s.terms()) out += t.coefficient * kron_pauli(t.string.letters());
    return out;
}

/// exp(-i H t) from a Hermitian eigendecomposition.
inline Eigen::MatrixXcd dense_propagator(const Eigen::MatrixXcd& h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phases = (std::complex<double>(0, -t) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline PauliSum random_pauli_sum(std::mt19937_64& rng, int n, int n_terms, double one_norm) {
    std::uniform_int_distribution<int> letter(0, 3);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<PauliTerm> terms;
    const char* letters = "IXYZ";
    for (int k = 0; k < n_terms; ++k) {
        std::string s;
        for (int q = 0; q < n; ++q) s.push_back(letters[letter(rng)]);
        terms.push_back({coef(rng), PauliString(s)});
    }
    PauliSum h(n, terms);
    return h.scaled(one_norm / h.one_norm());
}

inline Eigen::VectorXcd random_state(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(Eigen::Index{1} << n);
    for (auto& a : v) a = {nd(rng), nd(rng)};
    return v.normalized();
}

} // namespace qspec::test

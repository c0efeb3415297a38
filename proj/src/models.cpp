#include "qspec/models.hpp"

#include <string>

#include "qspec/errors.hpp"

namespace qspec {

namespace {

void require_chain(int n, const char* what) {
    if (n < 2) throw InvalidModel(std::string(what) + " needs at least 2 sites, got " + std::to_string(n));
    if (n > kMaxMaskQubits) throw InvalidModel(std::string(what) + " too large");
}

PauliString two_site(int n, int a, char la, int b, char lb) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(a)] = la;
    s[static_cast<std::size_t>(b)] = lb;
    return PauliString(s);
}

int bond_count(int n, bool periodic) {
    // A 2-site ring has a single bond; counting the wrap would double it.
    return periodic && n > 2 ? n : n - 1;
}

} // namespace

PauliSum build_heisenberg(int n, double J, double h_z, bool periodic) {
    require_chain(n, "Heisenberg chain");
    std::vector<PauliTerm> terms;
    for (int i = 0; i < bond_count(n, periodic); ++i) {
        const int j = (i + 1) % n;
        for (char l : {'X', 'Y', 'Z'}) terms.push_back({J, two_site(n, i, l, j, l)});
    }
    for (int i = 0; i < n; ++i) terms.push_back({h_z, PauliString::single(n, i, 'Z')});
    return PauliSum(n, std::move(terms));
}

PauliSum build_tfim(int n, double J, double h_x, double h_z, bool periodic) {
    require_chain(n, "Ising chain");
    std::vector<PauliTerm> terms;
    for (int i = 0; i < bond_count(n, periodic); ++i) terms.push_back({J, two_site(n, i, 'Z', (i + 1) % n, 'Z')});
    for (int i = 0; i < n; ++i) {
        terms.push_back({h_x, PauliString::single(n, i, 'X')});
        terms.push_back({h_z, PauliString::single(n, i, 'Z')});
    }
    return PauliSum(n, std::move(terms));
}

PauliSum build_fermi_hubbard_1d(int n_sites, double t_hop, double U) {
    require_chain(n_sites, "Fermi-Hubbard chain");
    const int nq = 2 * n_sites;
    if (nq > kMaxMaskQubits) throw InvalidModel("Fermi-Hubbard chain too large");
    std::vector<PauliTerm> terms;

    // c_p^dag c_q + h.c. = (X_p Z..Z X_q + Y_p Z..Z Y_q) / 2 for p < q.
    auto hop = [&](int p, int q) {
        for (char l : {'X', 'Y'}) {
            std::string s(static_cast<std::size_t>(nq), 'I');
            s[static_cast<std::size_t>(p)] = l;
            s[static_cast<std::size_t>(q)] = l;
            for (int k = p + 1; k < q; ++k) s[static_cast<std::size_t>(k)] = 'Z';
            terms.push_back({-t_hop / 2.0, PauliString(s)});
        }
    };
    for (int spin = 0; spin < 2; ++spin) {
        const int offset = spin * n_sites;
        for (int i = 0; i + 1 < n_sites; ++i) hop(offset + i, offset + i + 1);
    }

    // U n_up n_down = U/4 (I - Z_up - Z_down + Z_up Z_down)
    for (int i = 0; i < n_sites; ++i) {
        const int up = i;
        const int down = n_sites + i;
        terms.push_back({U / 4.0, PauliString::identity(nq)});
        terms.push_back({-U / 4.0, PauliString::single(nq, up, 'Z')});
        terms.push_back({-U / 4.0, PauliString::single(nq, down, 'Z')});
        terms.push_back({U / 4.0, two_site(nq, up, 'Z', down, 'Z')});
    }
    return PauliSum(nq, std::move(terms));
}

PauliSum number_operator(int n_qubits) {
    std::vector<PauliTerm> terms;
    terms.push_back({n_qubits / 2.0, PauliString::identity(n_qubits)});
    for (int q = 0; q < n_qubits; ++q) terms.push_back({-0.5, PauliString::single(n_qubits, q, 'Z')});
    return PauliSum(n_qubits, std::move(terms));
}

PauliSum uniform_field(int n_qubits, char letter, double scale) {
    std::vector<PauliTerm> terms;
    for (int q = 0; q < n_qubits; ++q) terms.push_back({scale, PauliString::single(n_qubits, q, letter)});
    return PauliSum(n_qubits, std::move(terms));
}

} // namespace qspec

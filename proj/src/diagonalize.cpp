#include "qspec/diagonalize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "qspec/errors.hpp"

namespace qspec {

namespace {

struct FlipGroup {
    std::uint64_t x;
    std::vector<const PauliTerm*> terms;

    cplx amplitude(std::uint64_t b) const {
        cplx a{0.0, 0.0};
        for (const auto* t : terms) a += t->coefficient * t->string.phase(b);
        return a;
    }
};

std::vector<FlipGroup> group_by_flip(const PauliSum& h) {
    std::map<std::uint64_t, std::vector<const PauliTerm*>> groups;
    for (const auto& t : h.terms()) groups[t.string.x_mask()].push_back(&t);
    std::vector<FlipGroup> out;
    for (auto& [x, terms] : groups) out.push_back({x, std::move(terms)});
    return out;
}

void solve_real(Eigen::MatrixXd& a, Eigen::VectorXd& w) {
    const auto n = static_cast<lapack_int>(a.rows());
    w.resize(a.rows());
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
    if (info != 0) throw Error("dsyevd failed with info " + std::to_string(info));
}

void solve_complex(Eigen::MatrixXcd& a, Eigen::VectorXd& w) {
    const auto n = static_cast<lapack_int>(a.rows());
    w.resize(a.rows());
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
    if (info != 0) throw Error("zheevd failed with info " + std::to_string(info));
}

EDResult::Sector diagonalize_block(const std::vector<FlipGroup>& groups, std::vector<std::uint64_t> basis,
                                   std::vector<std::int32_t>& local) {
    const auto d = static_cast<Eigen::Index>(basis.size());
    for (Eigen::Index i = 0; i < d; ++i) local[basis[static_cast<std::size_t>(i)]] = static_cast<std::int32_t>(i);

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
        const auto b = basis[static_cast<std::size_t>(col)];
        for (const auto& g : groups) {
            const cplx a = g.amplitude(b);
            if (a == cplx{0.0, 0.0}) continue;
            const auto row = local[b ^ g.x];
            if (row < 0) throw Error("sector basis is not closed under H");
            m(row, col) += a;
        }
    }

    EDResult::Sector s;
    s.basis = std::move(basis);
    s.is_real = m.imag().cwiseAbs().maxCoeff() == 0.0;
    if (s.is_real) {
        s.real_vectors = m.real();
        solve_real(s.real_vectors, s.energies);
    } else {
        s.complex_vectors = std::move(m);
        solve_complex(s.complex_vectors, s.energies);
    }
    for (auto b : s.basis) local[b] = -1;
    return s;
}

} // namespace

bool conserves_hamming_weight(const PauliSum& h, double tol) {
    const std::uint64_t dim = std::uint64_t{1} << h.n_qubits();
    for (const auto& g : group_by_flip(h)) {
        if (g.x == 0) continue;
        const int flips = std::popcount(g.x);
        if (flips & 1) return false;
        for (std::uint64_t b = 0; b < dim; ++b) {
            if (2 * std::popcount(b & g.x) == flips) continue;
            if (std::abs(g.amplitude(b)) > tol) return false;
        }
    }
    return true;
}

EDResult diagonalize(const PauliSum& h, const DiagonalizeOptions& options) {
    const int n = h.n_qubits();
    if (n > options.max_qubits) {
        throw ResourceError("exact diagonalisation capped at " + std::to_string(options.max_qubits) +
                            " qubits, Hamiltonian has " + std::to_string(n));
    }
    const std::uint64_t dim = std::uint64_t{1} << n;
    const auto groups = group_by_flip(h);
    std::vector<std::int32_t> local(dim, -1);

    std::vector<EDResult::Sector> sectors;
    if (options.use_weight_sectors && conserves_hamming_weight(h)) {
        std::vector<std::vector<std::uint64_t>> by_weight(static_cast<std::size_t>(n) + 1);
        for (std::uint64_t b = 0; b < dim; ++b) by_weight[static_cast<std::size_t>(std::popcount(b))].push_back(b);
        for (auto& basis : by_weight) sectors.push_back(diagonalize_block(groups, std::move(basis), local));
    } else {
        std::vector<std::uint64_t> basis(dim);
        std::iota(basis.begin(), basis.end(), std::uint64_t{0});
        sectors.push_back(diagonalize_block(groups, std::move(basis), local));
    }
    return EDResult(n, std::move(sectors));
}

EDResult::EDResult(int n_qubits, std::vector<Sector> sectors) : n_qubits_(n_qubits), sectors_(std::move(sectors)) {
    std::vector<std::pair<std::size_t, Eigen::Index>> order;
    for (std::size_t s = 0; s < sectors_.size(); ++s) {
        for (Eigen::Index c = 0; c < sectors_[s].size(); ++c) order.emplace_back(s, c);
    }
    if (static_cast<Eigen::Index>(order.size()) != dimension()) throw Error("sectors do not cover the Hilbert space");
    std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        return sectors_[a.first].energies[a.second] < sectors_[b.first].energies[b.second];
    });
    for (auto& s : sectors_) s.global.assign(s.basis.size(), 0);
    eigenvalues_.resize(order.size());
    for (std::size_t g = 0; g < order.size(); ++g) {
        auto& s = sectors_[order[g].first];
        s.global[static_cast<std::size_t>(order[g].second)] = g;
        eigenvalues_[g] = s.energies[order[g].second];
    }
    locate_ = std::move(order);
}

Eigen::VectorXcd EDResult::eigenvector(std::size_t n) const {
    const auto [si, col] = locate_.at(n);
    const auto& s = sectors_[si];
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dimension());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        v[static_cast<Eigen::Index>(s.basis[static_cast<std::size_t>(i)])] =
            s.is_real ? cplx(s.real_vectors(i, col), 0.0) : s.complex_vectors(i, col);
    }
    return v;
}

Eigen::VectorXcd EDResult::to_eigenbasis(const Eigen::Ref<const Eigen::VectorXcd>& psi) const {
    if (psi.size() != dimension()) throw DimensionMismatch("state dimension does not match Hamiltonian");
    Eigen::VectorXcd c(dimension());
    for (const auto& s : sectors_) {
        Eigen::VectorXcd part(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) part[i] = psi[static_cast<Eigen::Index>(s.basis[static_cast<std::size_t>(i)])];
        Eigen::VectorXcd proj;
        if (s.is_real) {
            proj = (s.real_vectors.transpose() * part.real()).cast<cplx>() +
                   cplx{0.0, 1.0} * (s.real_vectors.transpose() * part.imag()).cast<cplx>();
        } else {
            proj = s.complex_vectors.adjoint() * part;
        }
        for (Eigen::Index i = 0; i < s.size(); ++i) c[static_cast<Eigen::Index>(s.global[static_cast<std::size_t>(i)])] = proj[i];
    }
    return c;
}

Eigen::VectorXcd EDResult::from_eigenbasis(const Eigen::Ref<const Eigen::VectorXcd>& coeffs) const {
    const double t = 0.0;
    return evolve_batch(coeffs, std::span<const double>(&t, 1)).col(0);
}

Eigen::MatrixXcd EDResult::evolve_batch(const Eigen::Ref<const Eigen::VectorXcd>& c0, std::span<const double> times) const {
    if (c0.size() != dimension()) throw DimensionMismatch("coefficient vector does not match Hamiltonian");
    const auto nb = static_cast<Eigen::Index>(times.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dimension(), nb);
    for (const auto& s : sectors_) {
        Eigen::VectorXcd cs(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) cs[i] = c0[static_cast<Eigen::Index>(s.global[static_cast<std::size_t>(i)])];
        if (cs.squaredNorm() == 0.0) continue;

        Eigen::MatrixXcd phased(s.size(), nb);
        for (Eigen::Index b = 0; b < nb; ++b) {
            const double t = times[static_cast<std::size_t>(b)];
            for (Eigen::Index i = 0; i < s.size(); ++i) {
                const double arg = -s.energies[i] * t;
                phased(i, b) = cs[i] * cplx(std::cos(arg), std::sin(arg));
            }
        }
        Eigen::MatrixXcd evolved;
        if (s.is_real) {
            const Eigen::MatrixXd re = s.real_vectors * phased.real();
            const Eigen::MatrixXd im = s.real_vectors * phased.imag();
            evolved.resize(s.size(), nb);
            evolved.real() = re;
            evolved.imag() = im;
        } else {
            evolved = s.complex_vectors * phased;
        }
        for (Eigen::Index i = 0; i < s.size(); ++i) out.row(static_cast<Eigen::Index>(s.basis[static_cast<std::size_t>(i)])) = evolved.row(i);
    }
    return out;
}

double EDResult::max_residual(const PauliSum& h) const {
    double worst = 0.0;
    Eigen::VectorXcd hv(dimension());
    for (std::size_t n = 0; n < eigenvalues_.size(); ++n) {
        const Eigen::VectorXcd v = eigenvector(n);
        apply_sum(h, v, hv);
        const double r = (hv - eigenvalues_[n] * v).norm() / std::max(1.0, std::abs(eigenvalues_[n]));
        worst = std::max(worst, r);
    }
    return worst;
}

StateVector exact_evolve(const EDResult& ed, const StateVector& psi0, double t) {
    if (psi0.n_qubits() != ed.n_qubits()) throw DimensionMismatch("state and Hamiltonian qubit counts differ");
    const Eigen::VectorXcd c0 = ed.to_eigenbasis(psi0.amplitudes());
    Eigen::VectorXcd out = ed.evolve_batch(c0, std::span<const double>(&t, 1)).col(0);
    // Rounding drift only; keeps the StateVector norm invariant exact.
    out /= out.norm();
    return StateVector(psi0.n_qubits(), std::move(out));
}

} // namespace qspec

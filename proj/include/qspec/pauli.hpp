#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qspec {

using cplx = std::complex<double>;

/// Maximum qubit count representable by the bit-mask encoding.
inline constexpr int kMaxMaskQubits = 63;

/**
 * Tensor product of single-qubit Paulis. Letter k acts on qubit k; qubit k
 * is bit k of a basis-state index.
 *
 * Stored as (x, z) masks: X -> (1,0), Z -> (0,1), Y -> (1,1). Acting on a
 * basis state, P|b> = i^{#Y} (-1)^{popcount(b & z)} |b ^ x>.
 */
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(std::string_view letters);

    static PauliString identity(int n_qubits);
    static PauliString single(int n_qubits, int site, char letter);

    int n_qubits() const noexcept { return static_cast<int>(letters_.size()); }
    const std::string& letters() const noexcept { return letters_; }
    std::uint64_t x_mask() const noexcept { return x_; }
    std::uint64_t z_mask() const noexcept { return z_; }
    int y_count() const noexcept { return y_count_; }
    bool is_identity() const noexcept { return x_ == 0 && z_ == 0; }
    char at(int site) const { return letters_.at(static_cast<std::size_t>(site)); }

    /// Sites carrying a non-identity letter, ascending.
    std::vector<int> support() const;

    bool commutes_with(const PauliString& other) const noexcept;

    /// Phase picked up by basis state |b> (the target state is b ^ x_mask()).
    cplx phase(std::uint64_t b) const noexcept {
        static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const int sign = std::popcount(b & z_) & 1;
        const cplx p = kIPow[y_count_ & 3];
        return sign ? -p : p;
    }

    friend bool operator==(const PauliString& a, const PauliString& b) { return a.letters_ == b.letters_; }
    friend auto operator<=>(const PauliString& a, const PauliString& b) { return a.letters_ <=> b.letters_; }

private:
    std::string letters_;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
    int y_count_ = 0;
};

struct PauliTerm {
    double coefficient = 0.0;
    PauliString string;

    friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/**
 * Hermitian operator sum_l alpha_l P_l with real coefficients.
 *
 * Always canonical: terms sorted lexicographically by letters, duplicates
 * merged, merged coefficients with magnitude below kDropTolerance removed.
 */
class PauliSum {
public:
    static constexpr double kDropTolerance = 1e-14;

    explicit PauliSum(int n_qubits);
    PauliSum(int n_qubits, std::vector<PauliTerm> terms);

    int n_qubits() const noexcept { return n_qubits_; }
    const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    /// Sum of |alpha_l|; bounds the operator norm.
    double one_norm() const noexcept;
    bool has_identity_component() const noexcept;

    PauliSum& operator+=(const PauliSum& other);
    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    PauliSum scaled(double factor) const;

    friend bool operator==(const PauliSum&, const PauliSum&) = default;

private:
    void canonicalize();

    int n_qubits_;
    std::vector<PauliTerm> terms_;
};

/// Parse the text format: one "<coefficient> <letters>" term per line,
/// '#' starts a comment, blank lines ignored.
PauliSum parse_pauli_sum(std::string_view text);
PauliSum read_pauli_file(const std::string& path);
std::string format_pauli_sum(const PauliSum& sum);

/// Dense 2^N x 2^N matrix. Intended for N <= 12.
Eigen::MatrixXcd to_dense(const PauliSum& sum);

/// out = P * in for a single string.
void apply_pauli(const PauliString& p, const Eigen::Ref<const Eigen::VectorXcd>& in, Eigen::Ref<Eigen::VectorXcd> out);
/// out = H * in.
void apply_sum(const PauliSum& h, const Eigen::Ref<const Eigen::VectorXcd>& in, Eigen::Ref<Eigen::VectorXcd> out);

/// <v|P|v> for an unnormalised amplitude vector; real because P is Hermitian.
double pauli_expectation(const PauliString& p, const Eigen::Ref<const Eigen::VectorXcd>& v);

} // namespace qspec

#include "qspec/pauli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qspec/errors.hpp"

namespace qspec {

PauliString::PauliString(std::string_view letters) : letters_(letters) {
    if (letters_.size() > static_cast<std::size_t>(kMaxMaskQubits)) {
        throw InvalidArgument("Pauli string longer than " + std::to_string(kMaxMaskQubits) + " qubits");
    }
    for (std::size_t k = 0; k < letters_.size(); ++k) {
        const std::uint64_t bit = std::uint64_t{1} << k;
        switch (letters_[k]) {
        case 'I': break;
        case 'X': x_ |= bit; break;
        case 'Y': x_ |= bit; z_ |= bit; ++y_count_; break;
        case 'Z': z_ |= bit; break;
        default:
            throw InvalidArgument(std::string("invalid Pauli letter '") + letters_[k] + "'");
        }
    }
}

PauliString PauliString::identity(int n_qubits) {
    return PauliString(std::string(static_cast<std::size_t>(n_qubits), 'I'));
}

PauliString PauliString::single(int n_qubits, int site, char letter) {
    if (site < 0 || site >= n_qubits) {
        throw InvalidArgument("site " + std::to_string(site) + " out of range for " + std::to_string(n_qubits) +
                              " qubits");
    }
    std::string s(static_cast<std::size_t>(n_qubits), 'I');
    s[static_cast<std::size_t>(site)] = letter;
    return PauliString(s);
}

std::vector<int> PauliString::support() const {
    std::vector<int> sites;
    for (int k = 0; k < n_qubits(); ++k) {
        if (letters_[static_cast<std::size_t>(k)] != 'I') sites.push_back(k);
    }
    return sites;
}

bool PauliString::commutes_with(const PauliString& other) const noexcept {
    // Symplectic product: anticommuting positions counted mod 2.
    const int overlap = std::popcount(x_ & other.z_) + std::popcount(z_ & other.x_);
    return (overlap & 1) == 0;
}

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits <= 0 || n_qubits > kMaxMaskQubits) {
        throw InvalidArgument("qubit count must be in [1, " + std::to_string(kMaxMaskQubits) + "]");
    }
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms) : PauliSum(n_qubits) {
    for (const auto& t : terms) {
        if (t.string.n_qubits() != n_qubits) {
            throw InvalidArgument("Pauli string '" + t.string.letters() + "' has length " +
                                  std::to_string(t.string.n_qubits()) + ", expected " + std::to_string(n_qubits));
        }
        if (!std::isfinite(t.coefficient)) throw InvalidArgument("non-finite Pauli coefficient");
    }
    terms_ = std::move(terms);
    canonicalize();
}

void PauliSum::canonicalize() {
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const PauliTerm& a, const PauliTerm& b) { return a.string < b.string; });
    std::vector<PauliTerm> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().string == t.string) {
            merged.back().coefficient += t.coefficient;
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](const PauliTerm& t) { return std::abs(t.coefficient) < kDropTolerance; });
    terms_ = std::move(merged);
}

double PauliSum::one_norm() const noexcept {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coefficient);
    return s;
}

bool PauliSum::has_identity_component() const noexcept {
    return std::any_of(terms_.begin(), terms_.end(), [](const PauliTerm& t) { return t.string.is_identity(); });
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
    if (other.n_qubits_ != n_qubits_) throw DimensionMismatch("adding Pauli sums over different qubit counts");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    canonicalize();
    return *this;
}

PauliSum PauliSum::scaled(double factor) const {
    std::vector<PauliTerm> t = terms_;
    for (auto& term : t) term.coefficient *= factor;
    return PauliSum(n_qubits_, std::move(t));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

PauliSum parse_pauli_sum(std::string_view text) {
    std::vector<PauliTerm> terms;
    int n_qubits = -1;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto sep = line.find_first_of(" \t");
        if (sep == std::string_view::npos) throw ParseError(line_no, "expected '<coefficient> <letters>'");
        const std::string_view coeff_text = line.substr(0, sep);
        const std::string_view letters = trim(line.substr(sep));
        if (letters.find_first_of(" \t") != std::string_view::npos) {
            throw ParseError(line_no, "unexpected extra field after Pauli letters");
        }

        double coeff = 0.0;
        const auto [ptr, ec] = std::from_chars(coeff_text.data(), coeff_text.data() + coeff_text.size(), coeff);
        if (ec != std::errc{} || ptr != coeff_text.data() + coeff_text.size() || !std::isfinite(coeff)) {
            throw ParseError(line_no, "coefficient '" + std::string(coeff_text) + "' is not a finite real number");
        }
        if (letters.find_first_not_of("IXYZ") != std::string_view::npos) {
            throw ParseError(line_no, "invalid Pauli letters '" + std::string(letters) + "'");
        }
        if (n_qubits < 0) {
            n_qubits = static_cast<int>(letters.size());
            if (n_qubits > kMaxMaskQubits) throw ParseError(line_no, "too many qubits");
        } else if (static_cast<int>(letters.size()) != n_qubits) {
            throw ParseError(line_no, "string length " + std::to_string(letters.size()) + " differs from " +
                                          std::to_string(n_qubits));
        }
        terms.push_back({coeff, PauliString(letters)});
    }
    if (n_qubits < 0) throw ParseError(line_no, "no terms found");
    return PauliSum(n_qubits, std::move(terms));
}

PauliSum read_pauli_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open Pauli file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pauli_sum(ss.str());
}

std::string format_pauli_sum(const PauliSum& sum) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto& t : sum.terms()) out << t.coefficient << ' ' << t.string.letters() << '\n';
    return out.str();
}

Eigen::MatrixXcd to_dense(const PauliSum& sum) {
    const Eigen::Index dim = Eigen::Index{1} << sum.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : sum.terms()) {
        const auto x = t.string.x_mask();
        for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
            m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += t.coefficient * t.string.phase(b);
        }
    }
    return m;
}

void apply_pauli(const PauliString& p, const Eigen::Ref<const Eigen::VectorXcd>& in, Eigen::Ref<Eigen::VectorXcd> out) {
    const auto x = p.x_mask();
    const auto dim = static_cast<std::uint64_t>(in.size());
    for (std::uint64_t b = 0; b < dim; ++b) {
        out[static_cast<Eigen::Index>(b ^ x)] = p.phase(b) * in[static_cast<Eigen::Index>(b)];
    }
}

void apply_sum(const PauliSum& h, const Eigen::Ref<const Eigen::VectorXcd>& in, Eigen::Ref<Eigen::VectorXcd> out) {
    out.setZero();
    const auto dim = static_cast<std::uint64_t>(in.size());
    for (const auto& t : h.terms()) {
        const auto x = t.string.x_mask();
        for (std::uint64_t b = 0; b < dim; ++b) {
            out[static_cast<Eigen::Index>(b ^ x)] += t.coefficient * t.string.phase(b) * in[static_cast<Eigen::Index>(b)];
        }
    }
}

double pauli_expectation(const PauliString& p, const Eigen::Ref<const Eigen::VectorXcd>& v) {
    const auto x = p.x_mask();
    const auto z = p.z_mask();
    const auto dim = static_cast<std::uint64_t>(v.size());
    // <v|P|v> = i^{#Y} sum_b (-1)^{b.z} conj(v[b^x]) v[b]
    cplx acc{0.0, 0.0};
    if (x == 0) {
        double s = 0.0;
        for (std::uint64_t b = 0; b < dim; ++b) {
            const double w = std::norm(v[static_cast<Eigen::Index>(b)]);
            s += (std::popcount(b & z) & 1) ? -w : w;
        }
        acc = s;
    } else {
        for (std::uint64_t b = 0; b < dim; ++b) {
            const cplx term = std::conj(v[static_cast<Eigen::Index>(b ^ x)]) * v[static_cast<Eigen::Index>(b)];
            acc += (std::popcount(b & z) & 1) ? -term : term;
        }
    }
    static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return (kIPow[p.y_count() & 3] * acc).real();
}

} // namespace qspec

#include "qspec/trotter.hpp"

#include <algorithm>
#include <cmath>

#include "qspec/errors.hpp"

namespace qspec {

namespace {

std::string preferred_label(const PauliString& p) {
    const auto sites = p.support();
    const int n = p.n_qubits();
    if (sites.empty()) return "identity";
    if (sites.size() == 1) return std::string("field:") + p.at(sites[0]);
    if (sites.size() == 2) {
        const int a = sites[0];
        const int b = sites[1];
        if (b == a + 1) return a % 2 == 0 ? "even" : "odd";
        if (a == 0 && b == n - 1 && n > 2) {
            // Closing bond (n-1, 0): its parity slot is free only for even n.
            return n % 2 == 0 ? "odd" : "wrap";
        }
    }
    return "misc";
}

int label_rank(const std::string& label) {
    if (label.rfind("field:", 0) == 0) return 0;
    if (label == "identity") return 1;
    if (label == "even") return 2;
    if (label == "odd") return 3;
    if (label == "wrap") return 4;
    return 5;
}

bool commutes_with_group(const TrotterGroup& g, const PauliString& p) {
    return std::all_of(g.terms.begin(), g.terms.end(),
                       [&](const PauliTerm& t) { return t.string.commutes_with(p); });
}

} // namespace

TrotterPlan::TrotterPlan(const PauliSum& h, int steps_per_unit)
    : n_qubits_(h.n_qubits()), steps_per_unit_(steps_per_unit) {
    if (steps_per_unit < 1) throw InvalidArgument("Trotter steps per unit time must be >= 1");

    for (const auto& term : h.terms()) {
        const std::string label = preferred_label(term.string);
        TrotterGroup* target = nullptr;
        if (label != "misc") {
            for (auto& g : groups_) {
                if (g.label == label) target = &g;
            }
            if (target && !commutes_with_group(*target, term.string)) target = nullptr;
        }
        if (!target) {
            for (auto& g : groups_) {
                if (g.label.rfind("misc:", 0) == 0 && commutes_with_group(g, term.string)) {
                    target = &g;
                    break;
                }
            }
        }
        if (!target) {
            std::string name = label;
            if (label == "misc" || std::any_of(groups_.begin(), groups_.end(),
                                                [&](const TrotterGroup& g) { return g.label == label; })) {
                int k = 0;
                for (const auto& g : groups_) k += g.label.rfind("misc:", 0) == 0;
                name = "misc:" + std::to_string(k);
            }
            groups_.push_back({name, {}});
            target = &groups_.back();
        }
        target->terms.push_back(term);
    }

    std::stable_sort(groups_.begin(), groups_.end(), [](const TrotterGroup& a, const TrotterGroup& b) {
        const int ra = label_rank(a.label);
        const int rb = label_rank(b.label);
        return ra != rb ? ra < rb : (ra == 0 && a.label < b.label);
    });

    for (const auto& g : groups_) {
        for (std::size_t i = 0; i < g.terms.size(); ++i) {
            for (std::size_t j = i + 1; j < g.terms.size(); ++j) {
                if (!g.terms[i].string.commutes_with(g.terms[j].string)) {
                    throw Error("Trotter group " + g.label + " is not commuting");
                }
            }
        }
    }
}

long TrotterPlan::step_count(double t) const {
    if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
    if (t == 0.0) return 0;
    return std::max(1L, static_cast<long>(std::ceil(std::abs(t) * steps_per_unit_)));
}

std::vector<PauliRotation> TrotterPlan::gates(double t) const {
    const long n = step_count(t);
    if (n == 0) return {};
    return sequence(t / static_cast<double>(n), n, true);
}

std::vector<PauliRotation> TrotterPlan::gates_fixed(double dt, long steps) const {
    if (steps < 0) throw InvalidArgument("step count must be non-negative");
    return sequence(dt, steps, false);
}

std::vector<PauliRotation> TrotterPlan::sequence(double dt, long steps, bool fuse) const {
    const auto m = groups_.size();
    std::vector<PauliRotation> out;
    if (m == 0 || steps == 0) return out;

    // (group index, weight in units of dt)
    std::vector<std::pair<std::size_t, double>> slots;
    for (long s = 0; s < steps; ++s) {
        for (std::size_t g = 0; g + 1 < m; ++g) slots.emplace_back(g, 0.5);
        slots.emplace_back(m - 1, 1.0);
        for (std::size_t g = m - 1; g-- > 0;) slots.emplace_back(g, 0.5);
    }
    std::vector<std::pair<std::size_t, double>> merged;
    for (const auto& s : slots) {
        if (fuse && !merged.empty() && merged.back().first == s.first) {
            merged.back().second += s.second;
        } else {
            merged.push_back(s);
        }
    }
    for (const auto& [g, w] : merged) {
        for (const auto& term : groups_[g].terms) out.push_back({term.string, term.coefficient * w * dt});
    }
    return out;
}

std::vector<PauliRotation> inverse(const std::vector<PauliRotation>& gates) {
    std::vector<PauliRotation> out(gates.rbegin(), gates.rend());
    for (auto& g : out) g.angle = -g.angle;
    return out;
}

void apply_gates(Eigen::Ref<Eigen::VectorXcd> v, const std::vector<PauliRotation>& gates) {
    for (const auto& g : gates) apply_pauli_rotation(v, g.string, g.angle);
}

StateVector trotter2_evolve(const TrotterPlan& plan, const StateVector& psi0, double t) {
    if (psi0.n_qubits() != plan.n_qubits()) throw DimensionMismatch("state and plan qubit counts differ");
    Eigen::VectorXcd v = psi0.amplitudes();
    apply_gates(v, plan.gates(t));
    v /= v.norm();
    return StateVector(plan.n_qubits(), std::move(v));
}

} // namespace qspec

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qspec/coherence.hpp"
#include "qspec/random.hpp"

namespace qspec {

/// Abstract spectrum {Delta_j, Gamma_j} on [0, 10] with all gaps >= gamma_min and sum |Gamma_j| <= 1.
struct SyntheticSpectrum {
    std::vector<std::pair<double, double>> transitions;  ///< (Delta, Gamma), Delta ascending
    double gamma_min = 0.0;

    CoherenceTable table() const;
};

inline constexpr double kSyntheticRange = 10.0;

/**
 * Positions: n uniform draws on [0, 10 - (n-1) gamma_min], sorted, the k-th
 * shifted by k gamma_min. Weights: weight_floor plus a random share of the
 * remaining budget 1 - n weight_floor, with random signs.
 */
SyntheticSpectrum random_spectrum(Rng& rng, int n_transitions, double gamma_min, double weight_floor);

struct FixtureCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    /// "le": value <= tolerance, "ge": value >= tolerance, "lt_ref": value < reference.
    std::string relation = "le";
    double reference = 0.0;
    bool ok = false;
};

struct FixtureResult {
    std::string name;
    bool passed = false;
    std::vector<FixtureCheck> checks;
    std::vector<std::pair<std::string, double>> info;

    std::string to_json_line() const;
};

struct FixtureOptions {
    std::uint64_t seed = 1234;
    std::filesystem::path reference_dir;  ///< frozen ED references; empty -> compute on the fly
};

const std::vector<std::string>& fixture_names();
/// Fixtures that need large ED (11 and 13 qubits) and run only when named.
bool is_heavy_fixture(const std::string& name);

FixtureResult run_fixture(const std::string& name, const FixtureOptions& options = {});

/// heis7 ED reference: transitions with |Gamma| >= 0.02 as (Delta, Gamma).
std::vector<std::pair<double, cplx>> heis7_reference_transitions();
void write_reference_csv(const std::filesystem::path& path, const std::vector<std::pair<double, cplx>>& transitions);
std::vector<std::pair<double, cplx>> read_reference_csv(const std::filesystem::path& path);

} // namespace qspec

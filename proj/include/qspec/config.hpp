#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qspec/errors.hpp"
#include "qspec/state.hpp"

namespace qspec {

inline constexpr int kConfigSchema = 1;

/// Field-level configuration problem; `path` names the offending field.
class ConfigError : public Error {
public:
    ConfigError(const std::string& path, const std::string& what) : Error(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct ModelConfig {
    std::string type;  ///< heisenberg | tfim | fermi_hubbard | pauli_file
    double J = 1.0;
    double h_x = 0.0;
    double h_z = 0.0;
    double t_hop = 1.0;
    double U = 0.0;
    bool periodic = true;
    std::string path;
};

struct ObservableConfig {
    std::string type;  ///< single | family | pauli_file
    char letter = 'Y';
    int site = 0;
    std::string path;
};

struct AutoFilterConfig {
    double eps = 0.0;
    double delta = 0.05;
    std::optional<double> gamma;
    std::optional<double> gamma_j;
};

struct FilterConfig {
    std::optional<double> tau;
    std::optional<double> cutoff;
    std::optional<AutoFilterConfig> automatic;
};

struct OmegaConfig {
    double min = 0.0;
    double max = 0.0;
    double resolution = 0.0;
};

struct SamplingConfig {
    std::optional<long> n_samples;
    long shots = 0;  ///< 0: exact expectations
    std::uint64_t seed = 0;
};

struct EngineConfig {
    std::string type = "exact";  ///< exact | trotter
    int steps_per_unit = 0;
};

struct NoiseConfig {
    std::string model;  ///< global | local
    double lambda = 0.0;
    double p_gate = 0.0;
    bool mitigate = false;
    std::vector<long> depths;
    std::optional<double> dt;       ///< benchmark step; defaults to 1 / steps_per_unit
    std::string fit = "observable";  ///< observable | global
    std::optional<StatePrepSpec> benchmark_state;
};

struct PeakConfig {
    std::vector<std::pair<double, double>> windows;
    double threshold = 0.1;  ///< relative height for full-range local peaks
};

struct DispersionConfig {
    bool remove_k0 = true;
    std::optional<std::pair<double, double>> window;
    double floor = 1e-3;
};

struct RunConfig {
    int schema = kConfigSchema;
    ModelConfig model;
    int n = 0;
    StatePrepSpec state_prep;
    ObservableConfig observable;
    FilterConfig filter;
    OmegaConfig omega;
    SamplingConfig sampling;
    EngineConfig engine;
    std::optional<NoiseConfig> noise;
    PeakConfig peaks;
    DispersionConfig dispersion;
    std::string output_dir;
    nlohmann::ordered_json derived;  ///< informational; filled by auto-resolution
};

/// Strict parse: unknown fields, wrong types and out-of-range values raise ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
nlohmann::ordered_json to_json(const RunConfig& c);

nlohmann::ordered_json state_prep_to_json(const StatePrepSpec& s);

} // namespace qspec

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qspec/config.hpp"
#include "qspec/validation.hpp"

namespace qspec {

struct RunOptions {
    std::filesystem::path out_dir;             ///< overrides outputs.directory when set
    std::optional<std::uint64_t> seed;         ///< overrides sampling.seed
    std::filesystem::path base_dir;            ///< resolves relative pauli_file paths
};

/// Output files keyed by file name, written only after every computation succeeded.
using OutputSet = std::map<std::string, std::string>;

OutputSet run_spectrum(const RunConfig& config, const RunOptions& options);
OutputSet run_dispersion(const RunConfig& config, const RunOptions& options);
OutputSet run_noise_benchmark(const RunConfig& config, const RunOptions& options);

/// Atomically writes every file of the set into `dir`.
void write_outputs(const std::filesystem::path& dir, const OutputSet& files);

/// Directory for a run: the option override, else outputs.directory, else ".".
std::filesystem::path output_directory(const RunConfig& config, const RunOptions& options);

struct ValidateResult {
    std::vector<FixtureResult> results;
    bool all_passed = false;
    std::string jsonl;
};

ValidateResult run_validate(const std::vector<std::string>& names, const FixtureOptions& options);

} // namespace qspec

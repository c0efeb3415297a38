// qspec: batch front-end for filtered spectroscopy runs.
//
//   qspec spectrum    --config run.json [--out dir] [--seed n]
//   qspec dispersion  --config run.json [--out dir] [--seed n]
//   qspec noise-bench --config run.json [--out dir] [--seed n]
//   qspec validate    [--fixtures a,b] [--out dir] [--seed n]
//
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 resource cap.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "qspec/config.hpp"
#include "qspec/io.hpp"
#include "qspec/runner.hpp"

#ifndef QSPEC_REFERENCE_DIR
#define QSPEC_REFERENCE_DIR ""
#endif

namespace {

enum Exit { kOk = 0, kValidation = 1, kConfig = 2, kResource = 3 };

struct Args {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> fixtures;
    std::string reference_dir = QSPEC_REFERENCE_DIR;
    int workers = 0;
};

int run_config_verb(const std::string& verb, const Args& a) {
    const std::filesystem::path path(a.config);
    if (!std::filesystem::is_regular_file(path)) throw qspec::ConfigError("--config", "cannot open " + a.config);
    const auto config = qspec::parse_config_text(qspec::read_text_file(path));
    qspec::RunOptions opt;
    opt.out_dir = a.out;
    opt.seed = a.seed;
    opt.base_dir = path.parent_path();

    qspec::OutputSet files;
    if (verb == "spectrum") {
        files = qspec::run_spectrum(config, opt);
    } else if (verb == "dispersion") {
        files = qspec::run_dispersion(config, opt);
    } else {
        files = qspec::run_noise_benchmark(config, opt);
    }
    const auto dir = qspec::output_directory(config, opt);
    qspec::write_outputs(dir, files);
    for (const auto& [name, _] : files) std::cout << (dir / name).string() << '\n';
    return kOk;
}

int run_validate_verb(const Args& a) {
    std::vector<std::string> names = a.fixtures;
    if (names.size() == 1 && names.front() == "all") {
        names = qspec::fixture_names();
    } else if (names.empty()) {
        for (const auto& n : qspec::fixture_names()) {
            if (!qspec::is_heavy_fixture(n)) names.push_back(n);
        }
    }
    for (const auto& n : names) {
        const auto& known = qspec::fixture_names();
        if (std::find(known.begin(), known.end(), n) == known.end()) {
            throw qspec::ConfigError("--fixtures", "unknown fixture '" + n + "'");
        }
    }
    qspec::FixtureOptions opt;
    if (a.seed) opt.seed = *a.seed;
    opt.reference_dir = a.reference_dir;
    const auto result = qspec::run_validate(names, opt);
    std::cout << result.jsonl << std::flush;
    if (!a.out.empty()) qspec::write_outputs(a.out, {{"fixtures.jsonl", result.jsonl}});
    return result.all_passed ? kOk : kValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ancilla-free filtered spectroscopy"};
    app.require_subcommand(1);
    Args a;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", a.out, "output directory");
        sub->add_option("--seed", a.seed, "master seed override");
        sub->add_option("--workers", a.workers, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    };
    for (const char* verb : {"spectrum", "dispersion", "noise-bench"}) {
        auto* sub = app.add_subcommand(verb);
        sub->add_option("--config", a.config, "run configuration (JSON)")->required();
        add_common(sub);
    }
    auto* validate = app.add_subcommand("validate", "run validation fixtures");
    validate->add_option("--fixtures", a.fixtures, "fixture names, or 'all'")->delimiter(',');
    validate->add_option("--reference-dir", a.reference_dir, "frozen reference data");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }
    if (a.workers > 0) omp_set_num_threads(a.workers);

    const std::string verb = app.get_subcommands().front()->get_name();
    try {
        return verb == "validate" ? run_validate_verb(a) : run_config_verb(verb, a);
    } catch (const qspec::ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const qspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const qspec::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kConfig;
    } catch (const qspec::InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfig;
    } catch (const qspec::InvalidModel& e) {
        std::cerr << "invalid model: " << e.what() << '\n';
        return kConfig;
    } catch (const qspec::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfig;
    } catch (const qspec::DimensionMismatch& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
}

#include "qspec/runner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qspec/coherence.hpp"
#include "qspec/estimator.hpp"
#include "qspec/io.hpp"
#include "qspec/models.hpp"
#include "qspec/momentum.hpp"
#include "qspec/noise.hpp"
#include "qspec/resources.hpp"

namespace qspec {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kEdMaxQubits = 14;

std::filesystem::path resolve_path(const std::string& p, const RunOptions& o) {
    std::filesystem::path path(p);
    return path.is_relative() && !o.base_dir.empty() ? o.base_dir / path : path;
}

PauliSum build_model(const RunConfig& c, const RunOptions& o) {
    const auto& m = c.model;
    if (m.type == "heisenberg") return build_heisenberg(c.n, m.J, m.h_z, m.periodic);
    if (m.type == "tfim") return build_tfim(c.n, m.J, m.h_x, m.h_z, m.periodic);
    if (m.type == "fermi_hubbard") return build_fermi_hubbard_1d(c.n / 2, m.t_hop, m.U);
    PauliSum h = read_pauli_file(resolve_path(m.path, o).string());
    if (h.n_qubits() != c.n) {
        throw ConfigError("model.path", "file has " + std::to_string(h.n_qubits()) + " qubits, config n = " + std::to_string(c.n));
    }
    return h;
}

std::vector<PauliSum> build_observables(const RunConfig& c, const RunOptions& o) {
    const auto& ob = c.observable;
    if (ob.type == "single") {
        return {PauliSum(c.n, {{1.0, PauliString::single(c.n, ob.site, ob.letter)}})};
    }
    if (ob.type == "family") return site_family(c.n, ob.letter);
    PauliSum s = read_pauli_file(resolve_path(ob.path, o).string());
    if (s.n_qubits() != c.n) {
        throw ConfigError("observable.path", "file has " + std::to_string(s.n_qubits()) + " qubits, config n = " + std::to_string(c.n));
    }
    return {s};
}

/// Everything a verb needs, with auto-filter and seed overrides applied.
struct Resolved {
    RunConfig config;
    PauliSum h{1};
    StateVector psi = StateVector::basis(1, 0);
    std::vector<PauliSum> observables;
    std::optional<GaussianFilter> filter;
    std::shared_ptr<const EDResult> ed;  ///< set when an exact engine or auto filter needed ED
};

std::shared_ptr<const EDResult> ed_for(Resolved& r) {
    if (!r.ed) {
        if (r.config.n > kEdMaxQubits) {
            throw ResourceError("exact diagonalisation capped at " + std::to_string(kEdMaxQubits) + " qubits");
        }
        r.ed = std::make_shared<const EDResult>(diagonalize(r.h, {kEdMaxQubits, true}));
    }
    return r.ed;
}

void resolve_filter(Resolved& r) {
    auto& c = r.config;
    if (!c.filter.automatic) {
        r.filter.emplace(*c.filter.tau, *c.filter.cutoff);
        return;
    }
    const auto a = *c.filter.automatic;
    double gamma = 0.0;
    double gamma_j = 0.0;
    std::string source = "config";
    if (a.gamma && a.gamma_j) {
        gamma = *a.gamma;
        gamma_j = *a.gamma_j;
    } else {
        CoherenceOptions copt;
        if (c.n > copt.max_qubits) {
            throw ConfigError("filter.auto", "automatic tau needs the ED coherence table, which is capped at " +
                                                 std::to_string(copt.max_qubits) +
                                                 " qubits; set filter.auto.gamma and filter.auto.Gamma_j by hand");
        }
        const auto table = coherence_table(*ed_for(r), r.psi, r.observables.front(), copt);
        const Transition* best = nullptr;
        for (const auto& t : table.transitions()) {
            if (std::abs(t.delta) <= copt.merge_tolerance) continue;
            if (!best || std::abs(t.gamma) > std::abs(best->gamma)) best = &t;
        }
        if (!best) throw ConfigError("filter.auto", "the coherence table has no transition with non-zero energy");
        gamma = std::isfinite(best->gap) ? best->gap : c.omega.max - c.omega.min;
        gamma_j = std::min(1.0, std::abs(best->gamma));
        if (a.gamma) gamma = *a.gamma;
        if (a.gamma_j) gamma_j = *a.gamma_j;
        source = "ed";
    }
    double tau = 0.0;
    double cutoff = 0.0;
    long ns = 0;
    try {
        tau = required_tau(gamma, a.eps, gamma_j, TauConstant::Twenty);
        cutoff = required_T(tau, a.eps);
        ns = required_Ns(a.eps, gamma_j, tau, a.delta);
    } catch (const DomainError& e) {
        throw ConfigError("filter.auto", e.what());
    }
    r.filter.emplace(tau, cutoff);
    ojson d = c.derived.is_object() ? c.derived : ojson::object();
    d["auto_filter"] = {{"source", source},         {"gamma", gamma},         {"Gamma_j", gamma_j},
                        {"eps", a.eps},             {"delta", a.delta},       {"tau_log_constant", tau_log_constant(TauConstant::Twenty)},
                        {"required_N_s", ns}};
    c.derived = d;
    c.filter.automatic.reset();
    c.filter.tau = tau;
    c.filter.cutoff = cutoff;
    if (!c.sampling.n_samples) c.sampling.n_samples = ns;
}

Resolved resolve(const RunConfig& config, const RunOptions& o) {
    Resolved r;
    r.config = config;
    if (o.seed) r.config.sampling.seed = *o.seed;
    r.h = build_model(r.config, o);
    if (r.h.n_qubits() != r.config.n) throw ConfigError("n", "model qubit count differs from n");
    try {
        r.psi = prepare_state(r.config.state_prep, r.config.n);
    } catch (const InvalidArgument& e) {
        throw ConfigError("state_prep", e.what());
    } catch (const DimensionMismatch& e) {
        throw ConfigError("state_prep", e.what());
    }
    r.observables = build_observables(r.config, o);
    resolve_filter(r);
    return r;
}

std::shared_ptr<const Engine> base_engine(Resolved& r) {
    if (r.config.engine.type == "trotter") {
        return std::make_shared<const TrotterEngine>(r.h, r.config.engine.steps_per_unit);
    }
    return std::make_shared<const ExactEngine>(ed_for(r));
}

std::shared_ptr<const Engine> noisy_engine(Resolved& r, const std::shared_ptr<const Engine>& base) {
    const auto& nz = *r.config.noise;
    if (nz.model == "global") return std::make_shared<const GlobalNoiseEngine>(base, GlobalDepolarizingModel{nz.lambda});
    return std::make_shared<const LocalNoiseEngine>(r.h, r.config.engine.steps_per_unit, LocalDepolarizingModel{nz.p_gate});
}

SamplingOptions sampling(const Resolved& r) {
    return {*r.config.sampling.n_samples, r.config.sampling.shots, r.config.sampling.seed};
}

std::vector<double> grid(const Resolved& r) {
    return make_grid(r.config.omega.min, r.config.omega.max, r.config.omega.resolution);
}

std::string csv(const SpectralEstimate& est) {
    std::ostringstream out;
    write_spectrum_csv(out, est);
    return out.str();
}

ojson peak_json(const PeakReport& p) {
    ojson j;
    j["delta_hat"] = p.delta_hat;
    j["window"] = {p.window_lo, p.window_hi};
    j["peak_value"] = p.peak_value;
    j["re_sign"] = p.re_sign;
    j["fwhm_estimate"] = std::isfinite(p.fwhm_estimate) ? ojson(p.fwhm_estimate) : ojson(nullptr);
    j["grid_resolution"] = p.grid_resolution;
    return j;
}

ojson meta_json(const EstimateMeta& m) {
    ojson j;
    j["tau"] = m.tau;
    j["T"] = m.cutoff;
    j["N_s"] = m.n_samples;
    j["shots"] = m.shots;
    j["seed"] = m.seed;
    j["n_truncated"] = m.n_truncated;
    j["engine"] = m.engine;
    j["warnings"] = m.warnings;
    return j;
}

void add_one_norm_warning(SpectralEstimate& est, const PauliSum& o) {
    if (o.one_norm() > 1.0 + 1e-12) {
        est.meta.warnings.push_back("observable 1-norm " + format_double(o.one_norm()) +
                                    " exceeds 1; the |G| <= 1 bound does not apply");
    }
}

std::string manifest(const RunConfig& resolved, const RunConfig& original) {
    RunConfig m = resolved;
    m.output_dir = original.output_dir;
    return to_json(m).dump(2) + "\n";
}

void require_single(const Resolved& r, const char* verb) {
    if (r.config.observable.type == "family") {
        throw ConfigError("observable.type", std::string(verb) + " needs a single or pauli_file observable; use dispersion for families");
    }
}

} // namespace

std::filesystem::path output_directory(const RunConfig& config, const RunOptions& options) {
    if (!options.out_dir.empty()) return options.out_dir;
    if (!config.output_dir.empty()) return resolve_path(config.output_dir, options);
    return ".";
}

void write_outputs(const std::filesystem::path& dir, const OutputSet& files) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : files) write_file_atomic(dir / name, content);
}

OutputSet run_spectrum(const RunConfig& config, const RunOptions& options) {
    Resolved r = resolve(config, options);
    require_single(r, "spectrum");
    auto engine = base_engine(r);
    if (r.config.noise) engine = noisy_engine(r, engine);
    const auto& obs = r.observables.front();
    SpectralEstimate est = estimate_G(r.psi, *engine, obs, *r.filter, grid(r), sampling(r));

    ojson peaks;
    peaks["meta"] = meta_json(est.meta);
    ojson windows = ojson::array();
    for (const auto& [lo, hi] : r.config.peaks.windows) windows.push_back(peak_json(find_peak(est, lo, hi)));
    peaks["windows"] = windows;
    ojson local = ojson::array();
    for (const auto& p : find_local_peaks(est, r.config.peaks.threshold)) local.push_back(peak_json(p));
    peaks["full_range"] = local;

    OutputSet out;
    out["spectrum.csv"] = csv(est);
    out["peaks.json"] = peaks.dump(2) + "\n";
    const CoherenceOptions copt;
    if (r.config.n <= copt.max_qubits) {
        std::ostringstream ct;
        write_coherence_csv(ct, coherence_table(*ed_for(r), r.psi, obs, copt));
        out["coherence.csv"] = ct.str();
    }
    out["manifest.json"] = manifest(r.config, config);
    return out;
}

OutputSet run_dispersion(const RunConfig& config, const RunOptions& options) {
    Resolved r = resolve(config, options);
    if (r.config.observable.type != "family") throw ConfigError("observable.type", "dispersion needs a per-site family");
    if (r.config.n < 2) throw ConfigError("n", "dispersion needs >= 2 sites");
    auto engine = base_engine(r);
    if (r.config.noise) engine = noisy_engine(r, engine);
    const auto spectra = estimate_site_spectra(r.psi, *engine, r.config.observable.letter, *r.filter, grid(r), sampling(r));
    const auto raw = spatial_fourier(spectra, false);
    const auto win = r.config.dispersion.window.value_or(std::make_pair(r.config.omega.min, r.config.omega.max));
    const auto disp = extract_dispersion(raw, win.first, win.second, r.config.dispersion.floor, r.config.dispersion.remove_k0);

    OutputSet out;
    std::ostringstream m;
    write_momentum_csv(m, raw);
    out["momentum.csv"] = m.str();
    std::ostringstream d;
    write_dispersion_csv(d, disp);
    out["dispersion.csv"] = d.str();
    out["manifest.json"] = manifest(r.config, config);
    return out;
}

OutputSet run_noise_benchmark(const RunConfig& config, const RunOptions& options) {
    Resolved r = resolve(config, options);
    if (!r.config.noise) throw ConfigError("noise", "noise-bench needs a noise section");
    auto& nz = *r.config.noise;
    if (nz.depths.empty()) throw ConfigError("noise.depths", "noise-bench needs benchmark depths");
    if (!nz.dt) {
        if (r.config.engine.type != "trotter") throw ConfigError("noise.dt", "required unless engine.type = trotter");
        nz.dt = 1.0 / r.config.engine.steps_per_unit;
    }
    if (!nz.benchmark_state) {
        // |+i> on every qubit, so every single-site <Y> starts at 1.
        StatePrepSpec s;
        s.base = StatePrepSpec::Base::AllZero;
        for (int q = 0; q < r.config.n; ++q) s.operations.push_back({q, Gate::Rx, -std::numbers::pi / 2.0});
        nz.benchmark_state = s;
    }
    for (const auto& o : r.observables) {
        if (o.has_identity_component()) throw ConfigError("observable", "noise benchmarking needs a traceless observable");
    }
    const StateVector bench_state = prepare_state(*nz.benchmark_state, r.config.n);
    const TrotterPlan plan(r.h, std::max(1, r.config.engine.steps_per_unit));
    NoiseModel model;
    if (nz.model == "global") {
        model = GlobalDepolarizingModel{nz.lambda};
    } else {
        model = LocalDepolarizingModel{nz.p_gate};
    }

    PauliSum aggregate(r.config.n);
    for (const auto& o : r.observables) aggregate += o;

    auto fit_json = [](const DecayFit& f) {
        ojson j;
        j["lambda_hat"] = f.lambda_hat;
        j["r_squared"] = f.r_squared;
        j["n_samples"] = f.samples.size();
        return j;
    };
    auto bench_csv = [](const std::vector<BenchmarkSample>& b) {
        std::ostringstream s;
        s << "depth,value\n";
        for (const auto& x : b) s << x.depth << ',' << format_double(x.value) << '\n';
        return s.str();
    };

    OutputSet out;
    const auto agg_bench = benchmark_decay(plan, bench_state, model, aggregate, nz.depths, *nz.dt);
    DecayFit agg_fit;
    try {
        agg_fit = fit_lambda(to_fit_samples(agg_bench, *nz.dt));
    } catch (const FitError& e) {
        throw ConfigError("noise.depths", std::string("benchmark fit failed: ") + e.what());
    }
    out["benchmark.csv"] = bench_csv(agg_bench);
    out["decay_fit.json"] = fit_json(agg_fit).dump(2) + "\n";

    std::vector<double> lambdas(r.observables.size(), agg_fit.lambda_hat);
    if (nz.fit == "observable" && r.observables.size() > 1) {
        for (std::size_t k = 0; k < r.observables.size(); ++k) {
            const auto b = benchmark_decay(plan, bench_state, model, r.observables[k], nz.depths, *nz.dt);
            const auto f = fit_lambda(to_fit_samples(b, *nz.dt));
            lambdas[k] = f.lambda_hat;
            out["benchmark_" + std::to_string(k) + ".csv"] = bench_csv(b);
            out["decay_fit_" + std::to_string(k) + ".json"] = fit_json(f).dump(2) + "\n";
        }
    }

    const auto engine = noisy_engine(r, base_engine(r));
    const auto draws = sample_draws(r.psi, *engine, r.observables, *r.filter, sampling(r));
    const auto g = grid(r);
    const bool many = r.observables.size() > 1;
    for (std::size_t k = 0; k < r.observables.size(); ++k) {
        const std::string suffix = many ? "_" + std::to_string(k) : "";
        auto noisy = assemble(draws, static_cast<Eigen::Index>(k), g);
        add_one_norm_warning(noisy, r.observables[k]);
        out["spectrum_noisy" + suffix + ".csv"] = csv(noisy);
        if (nz.mitigate) {
            std::vector<double> raw(draws.times.size());
            for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = draws.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            const auto fixed = mitigate(raw, draws.times, draws.tau, lambdas[k]);
            out["spectrum_mitigated" + suffix + ".csv"] = csv(assemble(draws, fixed, g));
        }
    }
    out["manifest.json"] = manifest(r.config, config);
    return out;
}

ValidateResult run_validate(const std::vector<std::string>& names, const FixtureOptions& options) {
    ValidateResult v;
    v.all_passed = true;
    for (const auto& n : names) {
        auto res = run_fixture(n, options);
        v.all_passed = v.all_passed && res.passed;
        v.jsonl += res.to_json_line() + "\n";
        v.results.push_back(std::move(res));
    }
    return v;
}

} // namespace qspec

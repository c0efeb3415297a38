#include "qspec/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qspec/errors.hpp"
#include "qspec/estimator.hpp"
#include "qspec/io.hpp"
#include "qspec/models.hpp"
#include "qspec/momentum.hpp"
#include "qspec/noise.hpp"

namespace qspec {

CoherenceTable SyntheticSpectrum::table() const {
    std::vector<std::pair<double, cplx>> t;
    for (const auto& [d, g] : transitions) t.emplace_back(d, cplx{g, 0.0});
    return CoherenceTable::from_transitions(t);
}

SyntheticSpectrum random_spectrum(Rng& rng, int n, double gamma_min, double weight_floor) {
    if (n < 1) throw InvalidArgument("random_spectrum: need n_transitions >= 1");
    if (!(gamma_min >= 0.0) || (n - 1) * gamma_min > kSyntheticRange) {
        throw InvalidArgument("random_spectrum: cannot pack the transitions with that gap into [0, 10]");
    }
    if (!(weight_floor >= 0.0) || n * weight_floor > 1.0) {
        throw InvalidArgument("random_spectrum: weight floor times count exceeds 1");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double free = kSyntheticRange - (n - 1) * gamma_min;
    std::vector<double> pos(static_cast<std::size_t>(n));
    for (auto& p : pos) p = free * unit(rng);
    std::sort(pos.begin(), pos.end());

    std::vector<double> share(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& s : share) total += (s = unit(rng) + 1e-12);
    const double budget = (1.0 - n * weight_floor) * unit(rng);

    SyntheticSpectrum out;
    out.gamma_min = gamma_min;
    for (int k = 0; k < n; ++k) {
        const double w = weight_floor + budget * share[static_cast<std::size_t>(k)] / total;
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        out.transitions.emplace_back(pos[static_cast<std::size_t>(k)] + k * gamma_min, sign * w);
    }
    return out;
}

std::string FixtureResult::to_json_line() const {
    nlohmann::ordered_json j;
    j["name"] = name;
    j["passed"] = passed;
    nlohmann::ordered_json measured = nlohmann::ordered_json::object();
    nlohmann::ordered_json tolerances = nlohmann::ordered_json::object();
    for (const auto& c : checks) {
        measured[c.name] = c.value;
        if (c.relation == "lt_ref") {
            tolerances[c.name] = {{"below", c.reference}};
        } else {
            tolerances[c.name] = {{c.relation, c.tolerance}};
        }
    }
    j["measured"] = measured;
    j["tolerances"] = tolerances;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
    for (const auto& [k, v] : info) extra[k] = v;
    j["info"] = extra;
    return j.dump();
}

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names{"two_level", "heis7", "ising11", "ferro13", "noise7"};
    return names;
}

bool is_heavy_fixture(const std::string& name) { return name == "ising11" || name == "ferro13"; }

namespace {

FixtureCheck le(std::string name, double value, double tol) {
    return {std::move(name), value, tol, "le", 0.0, value <= tol};
}
FixtureCheck ge(std::string name, double value, double tol) {
    return {std::move(name), value, tol, "ge", 0.0, value >= tol};
}
FixtureCheck below(std::string name, double value, double reference) {
    return {std::move(name), value, 0.0, "lt_ref", reference, value < reference};
}

void finish(FixtureResult& r) {
    r.passed = !r.checks.empty() && std::all_of(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.ok; });
}

PauliSum single(int n, int site, char letter) {
    return PauliSum(n, {{1.0, PauliString::single(n, site, letter)}});
}

FixtureResult two_level(const FixtureOptions& o) {
    FixtureResult r{"two_level", false, {}, {}};
    const PauliSum h(1, {{0.5, PauliString("Z")}});
    const ExactEngine engine(h);
    const auto psi = prepare_state(StatePrepSpec{}, 1);
    const GaussianFilter f(3.0, 6.0);
    const auto est = estimate_G(psi, engine, single(1, 0, 'X'), f, make_grid(-2.0, 2.0, 0.005), {50000, 0, o.seed});
    const auto peak = find_peak(est, 0.5, 1.5);
    r.info.emplace_back("delta_hat", peak.delta_hat);
    r.info.emplace_back("fwhm", peak.fwhm_estimate);
    r.checks.push_back(le("abs_delta_error", std::abs(peak.delta_hat - 1.0), 0.02));
    finish(r);
    return r;
}

StateVector heis7_state() {
    StatePrepSpec s;
    s.operations.push_back({3, Gate::X, 0.0});
    return prepare_state(s, 7);
}

PauliSum heis7_hamiltonian() { return build_heisenberg(7, -1.0, -0.01, true); }

FixtureResult heis7(const FixtureOptions& o) {
    FixtureResult r{"heis7", false, {}, {}};
    const auto ref_path = o.reference_dir / "heis7_transitions.csv";
    const auto refs = !o.reference_dir.empty() && std::filesystem::exists(ref_path) ? read_reference_csv(ref_path)
                                                                                       : heis7_reference_transitions();
    const ExactEngine engine(heis7_hamiltonian());
    const auto psi = heis7_state();
    const auto obs = single(7, 3, 'Y');
    const auto grid = make_grid(-1.0, 1.0, 0.002);

    const GaussianFilter f8(8.0, 6.0);
    const auto est8 = estimate_G(psi, engine, obs, f8, grid, {100000, 0, o.seed});
    const auto peaks = find_local_peaks(est8, 0.1);
    const double tol = std::sqrt(std::numbers::ln2) / f8.tau();
    double worst = refs.empty() ? std::numeric_limits<double>::infinity() : 0.0;
    for (const auto& [delta, gamma] : refs) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : peaks) best = std::min(best, std::abs(p.delta_hat - delta));
        worst = std::max(worst, best);
    }
    r.info.emplace_back("n_reference_transitions", static_cast<double>(refs.size()));
    r.info.emplace_back("n_detected_peaks", static_cast<double>(peaks.size()));
    r.checks.push_back(le("max_peak_distance", worst, tol));

    // Width of the strongest peak at positive omega, tau = 8 vs tau = 4, on the same draws.
    const GaussianFilter f4(4.0, 6.0);
    const auto est4 = estimate_G(psi, engine, obs, f4, grid, {100000, 0, o.seed});
    const auto p8 = find_peak(est8, 0.0, 1.0);
    const auto p4 = find_peak(est4, 0.0, 1.0);
    const double ratio = p8.fwhm_estimate / p4.fwhm_estimate;
    r.info.emplace_back("fwhm_tau8", p8.fwhm_estimate);
    r.info.emplace_back("fwhm_tau4", p4.fwhm_estimate);
    r.checks.push_back(le("fwhm_ratio_deviation", std::abs(ratio - 0.5), 0.05));
    r.info.emplace_back("fwhm_ratio", ratio);
    finish(r);
    return r;
}

struct DispersionSetup {
    std::string name;
    PauliSum h;
    int site;
    long n_samples;
    double lo, hi;
    double (*reference)(double k);
};

FixtureResult dispersion(const DispersionSetup& s, const FixtureOptions& o) {
    FixtureResult r{s.name, false, {}, {}};
    const int n = s.h.n_qubits();
    const ExactEngine engine(s.h);
    StatePrepSpec prep;
    prep.operations.push_back({s.site, Gate::Ry, std::numbers::pi / 2.0});
    const auto psi = prepare_state(prep, n);
    const GaussianFilter f(4.0, 6.0);
    const auto spectra =
        estimate_site_spectra(psi, engine, 'Y', f, make_grid(0.0, s.hi, 0.02), {s.n_samples, 0, o.seed});
    const auto disp = extract_dispersion(spatial_fourier(spectra), s.lo, s.hi);
    double worst = 0.0;
    int present = 0;
    for (const auto& p : disp) {
        if (!p.present) continue;
        ++present;
        worst = std::max(worst, std::abs(p.omega_star - s.reference(p.k)));
    }
    r.info.emplace_back("fwhm", f.fwhm());
    r.checks.push_back(le("max_dispersion_deviation", worst, 0.8));
    r.checks.push_back(ge("k_rows_present", present, n - 1));
    finish(r);
    return r;
}

double tfim_dispersion(double k) { return 2.0 * std::sqrt(5.0 - 4.0 * std::cos(k)); }
double magnon_dispersion(double k) { return 4.0 * (1.0 - std::cos(k)); }

FixtureResult noise7(const FixtureOptions& o) {
    FixtureResult r{"noise7", false, {}, {}};
    const int n = 7;
    const int steps_per_unit = 3;
    const double dt = 1.0 / steps_per_unit;
    const auto h = build_tfim(n, 1.0, 2.0, 0.1, false);
    const TrotterPlan plan(h, steps_per_unit);
    std::vector<long> depths;
    for (long m = 0; m <= 20; m += 2) depths.push_back(m);

    // |+i> on every qubit: all single-site <Y> start at 1.
    StatePrepSpec bench_prep;
    bench_prep.base = StatePrepSpec::Base::AllZero;
    for (int q = 0; q < n; ++q) bench_prep.operations.push_back({q, Gate::Rx, -std::numbers::pi / 2.0});
    const auto bench_state = prepare_state(bench_prep, n);
    const auto sum_y = uniform_field(n, 'Y');

    const GlobalDepolarizingModel global{0.05};
    const auto gfit = fit_lambda(to_fit_samples(benchmark_decay(plan, bench_state, global, sum_y, depths, dt), dt));
    r.checks.push_back(le("global_lambda_rel_error", std::abs(gfit.lambda_hat - 0.05) / 0.05, 0.05));

    for (double p : {0.001, 0.005}) {
        const auto fit = fit_lambda(
            to_fit_samples(benchmark_decay(plan, bench_state, LocalDepolarizingModel{p}, sum_y, depths, dt), dt));
        const std::string tag = p == 0.001 ? "p0.001" : "p0.005";
        r.checks.push_back(ge("r_squared_" + tag, fit.r_squared, 0.99));
        r.info.emplace_back("lambda_hat_" + tag, fit.lambda_hat);
    }

    StatePrepSpec prep;
    prep.operations.push_back({3, Gate::Ry, std::numbers::pi / 2.0});
    const auto psi = prepare_state(prep, n);
    const auto obs = single(n, 3, 'Y');
    const GaussianFilter f(1.25, 4.0);
    const auto grid = make_grid(-8.0, 8.0, 0.05);
    const SamplingOptions so{1000, 0, o.seed};

    const auto ideal_engine = std::make_shared<const TrotterEngine>(h, steps_per_unit);
    const auto ideal = sample_draws(psi, *ideal_engine, {obs}, f, so);

    // Global model: mitigation with the true lambda inverts the damping per draw.
    const GlobalNoiseEngine global_engine(ideal_engine, global);
    const auto gdraws = sample_draws(psi, global_engine, {obs}, f, so);
    std::vector<double> graw(gdraws.times.size());
    for (std::size_t i = 0; i < graw.size(); ++i) graw[i] = gdraws.values(static_cast<Eigen::Index>(i), 0);
    const auto grec = mitigate(graw, gdraws.times, f.tau(), global.lambda);
    double gmax = 0.0;
    for (std::size_t i = 0; i < grec.size(); ++i) {
        gmax = std::max(gmax, std::abs(grec[i] - ideal.values(static_cast<Eigen::Index>(i), 0)));
    }
    r.checks.push_back(le("global_mitigation_max_error", gmax, 1e-10));

    // Local model, mitigated with the decay constant fitted for this observable.
    const LocalDepolarizingModel local{0.005};
    const auto ofit =
        fit_lambda(to_fit_samples(benchmark_decay(plan, bench_state, local, obs, depths, dt), dt));
    const LocalNoiseEngine noisy_engine(h, steps_per_unit, local);
    const auto noisy = sample_draws(psi, noisy_engine, {obs}, f, so);
    std::vector<double> raw(noisy.times.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = noisy.values(static_cast<Eigen::Index>(i), 0);
    const auto mitigated = mitigate(raw, noisy.times, f.tau(), ofit.lambda_hat);

    const auto g_ideal = assemble(ideal, 0, grid);
    const auto g_noisy = assemble(noisy, 0, grid);
    const auto g_mit = assemble(noisy, mitigated, grid);
    double err_noisy = 0.0;
    double err_mit = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        err_noisy += std::abs(g_noisy.g_hat[k] - g_ideal.g_hat[k]);
        err_mit += std::abs(g_mit.g_hat[k] - g_ideal.g_hat[k]);
    }
    err_noisy /= static_cast<double>(grid.size());
    err_mit /= static_cast<double>(grid.size());
    r.info.emplace_back("observable_lambda_hat", ofit.lambda_hat);
    r.info.emplace_back("noisy_spectrum_error", err_noisy);
    r.checks.push_back(below("mitigated_spectrum_error", err_mit, err_noisy));
    finish(r);
    return r;
}

} // namespace

FixtureResult run_fixture(const std::string& name, const FixtureOptions& options) {
    if (name == "two_level") return two_level(options);
    if (name == "heis7") return heis7(options);
    if (name == "ising11") {
        return dispersion({"ising11", build_tfim(11, 1.0, 2.0, 0.0, true), 5, 20000, 0.5, 8.0, tfim_dispersion}, options);
    }
    if (name == "ferro13") {
        return dispersion({"ferro13", build_heisenberg(13, -1.0, -0.01, true), 6, 10000, 0.0, 10.0, magnon_dispersion},
                          options);
    }
    if (name == "noise7") return noise7(options);
    throw InvalidArgument("unknown fixture '" + name + "'");
}

std::vector<std::pair<double, cplx>> heis7_reference_transitions() {
    const auto ed = diagonalize(heis7_hamiltonian());
    const auto table = coherence_table(ed, heis7_state(), single(7, 3, 'Y'));
    std::vector<std::pair<double, cplx>> out;
    for (const auto& t : significant_transitions(table, 0.02)) out.emplace_back(t.delta, t.gamma);
    return out;
}

void write_reference_csv(const std::filesystem::path& path, const std::vector<std::pair<double, cplx>>& transitions) {
    std::ostringstream out;
    out << "delta,gamma_re,gamma_im\n";
    for (const auto& [d, g] : transitions) {
        out << format_double(d) << ',' << format_double(g.real()) << ',' << format_double(g.imag()) << '\n';
    }
    write_file_atomic(path, out.str());
}

std::vector<std::pair<double, cplx>> read_reference_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    std::getline(in, line);
    std::vector<std::pair<double, cplx>> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double d = 0.0, re = 0.0, im = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream ls(line);
        if (!(ls >> d >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
            throw ParseError(lineno, "malformed reference row in " + path.string());
        }
        out.emplace_back(d, cplx{re, im});
    }
    return out;
}

} // namespace qspec

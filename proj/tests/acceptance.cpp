// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <json.hpp>
#include <omp.h>

#include "qspec/coherence.hpp"
#include "qspec/diagonalize.hpp"
#include "qspec/engine.hpp"
#include "qspec/estimator.hpp"
#include "qspec/io.hpp"
#include "qspec/models.hpp"
#include "qspec/resources.hpp"
#include "qspec/trotter.hpp"
#include "qspec/validation.hpp"
#include "support.hpp"

using namespace qspec;
namespace fs = std::filesystem;
using boost::math::quadrature::gauss_kronrod;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) {
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

FixtureOptions fixture_options() {
    FixtureOptions o;
    o.reference_dir = QSPEC_REFERENCE_DIR;
    return o;
}

std::string describe(const FixtureResult& r) {
    std::string s;
    for (const auto& c : r.checks) {
        if (!s.empty()) s += ", ";
        s += c.name + "=" + num(c.value);
        if (c.relation == "le") s += " (<= " + num(c.tolerance) + ")";
        if (c.relation == "ge") s += " (>= " + num(c.tolerance) + ")";
        if (c.relation == "lt_ref") s += " (< " + num(c.reference) + ")";
        if (!c.ok) s += " FAILED";
    }
    return s;
}

Outcome fixture_with_budget(const std::string& name, double budget_s) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_fixture(name, fixture_options());
    const double dt = seconds_since(t0);
    const bool in_time = budget_s <= 0.0 || dt < budget_s;
    std::string d = describe(r) + "; runtime " + num(dt) + " s";
    if (budget_s > 0.0) d += " (< " + num(budget_s) + " s)";
    return {r.passed && in_time, d};
}

// Quadrature of integral_{-T}^{T} signal(tau t) g(t) exp(i tau w t) dt.
std::complex<double> truncated_G(const std::function<std::complex<double>(double)>& signal, double tau, double cutoff,
                                 double w) {
    auto f = [&](double t, bool imag) {
        const auto v = signal(tau * t) * GaussianFilter::g(t) * std::exp(std::complex<double>(0.0, tau * w * t));
        return imag ? v.imag() : v.real();
    };
    const double re = gauss_kronrod<double, 61>::integrate([&](double t) { return f(t, false); }, -cutoff, cutoff, 20, 1e-13);
    const double im = gauss_kronrod<double, 61>::integrate([&](double t) { return f(t, true); }, -cutoff, cutoff, 20, 1e-13);
    return {re, im};
}

Outcome criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(derive_seed(1234, "criterion2"));
    const int n = 3;
    const auto h = test::random_pauli_sum(rng, n, 8, 2.0);
    const auto o = test::random_pauli_sum(rng, n, 4, 1.0);
    const StateVector psi(n, test::random_state(rng, n));
    const double tau = 2.0;
    const double cutoff = 3.0;

    // Oracle signal from Eigen's dense eigensolver.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(test::kron_sum(h));
    const Eigen::MatrixXcd om = test::kron_sum(o);
    const Eigen::VectorXcd c = es.eigenvectors().adjoint() * psi.amplitudes();
    const Eigen::MatrixXcd ob = es.eigenvectors().adjoint() * om * es.eigenvectors();
    auto signal = [&](double t) {
        const Eigen::VectorXcd ct =
            c.cwiseProduct((std::complex<double>(0.0, -t) * es.eigenvalues().cast<std::complex<double>>()).array().exp().matrix());
        return std::complex<double>(ct.dot(ob * ct).real(), 0.0);
    };

    const auto grid = make_grid(-3.8, 3.8, 0.4);
    const ExactEngine engine(h);
    const auto est = estimate_G(psi, engine, o, GaussianFilter(tau, cutoff), grid, {100000, 0, 1234});
    int inside = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::abs(est.g_hat[k] - truncated_G(signal, tau, cutoff, grid[k])) <= 4.0 * est.std_error[k]) ++inside;
    }
    const double dt = seconds_since(t0);
    const double frac = static_cast<double>(inside) / static_cast<double>(grid.size());
    return {frac >= 0.95 && dt < 60.0, std::to_string(inside) + "/" + std::to_string(grid.size()) +
                                           " grid points within 4 stderr (>= 95%); runtime " + num(dt) + " s (< 60 s)"};
}

Outcome criterion3() {
    Rng rng(derive_seed(1234, "criterion3"));
    const double tau = 2.0;
    const auto grid = make_grid(-1.0, 11.0, 0.25);
    long violations = 0;
    long points = 0;
    double worst_margin = -1e9;
    for (int s = 0; s < 20; ++s) {
        const auto spec = random_spectrum(rng, 1 + s % 8, 0.5, 0.05);
        const auto table = spec.table();
        auto signal = [&](double t) {
            std::complex<double> v = 0.0;
            for (const auto& [d, g] : spec.transitions) v += g * std::exp(std::complex<double>(0.0, -d * t));
            return v;
        };
        for (double cutoff : {1.0, 2.0, 3.0, 4.0}) {
            const GaussianFilter f(tau, cutoff);
            for (double w : grid) {
                // exact_G is normalised with c / (2 pi) = 1, matching the quadrature.
                const double err = std::abs(truncated_G(signal, tau, cutoff, w) - exact_G(table, f, w));
                const double bound = truncation_bound(cutoff);
                worst_margin = std::max(worst_margin, err - bound);
                ++points;
                if (err > bound) ++violations;
            }
        }
    }
    return {violations == 0, std::to_string(violations) + " violations over " + std::to_string(points) +
                                 " (spectrum, T, omega) points; max(err - bound) = " + num(worst_margin)};
}

Outcome criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(derive_seed(1234, "criterion4"));
    int passed = 0;
    double worst_inner = 0.0;
    double worst_outer = 1e9;
    for (int s = 0; s < 100; ++s) {
        const auto spec = random_spectrum(rng, 1 + s % 10, 0.5, 0.1);
        const auto table = spec.table();
        const std::size_t j = static_cast<std::size_t>(s) % table.transitions().size();
        const double gap = std::min(table.transitions()[j].gap, 10.0);
        const auto r = lemma1_check(table, j, 0.05 * gap);
        worst_inner = std::max(worst_inner, r.inner_ratio);
        worst_outer = std::min(worst_outer, r.outer_ratio);
        if (r.passed) ++passed;
    }
    const double dt = seconds_since(t0);
    return {passed == 100 && dt < 30.0, std::to_string(passed) + "/100 spectra pass; worst inner ratio " + num(worst_inner) +
                                            " (<= 0.3), worst outer ratio " + num(worst_outer) + " (>= 0.8); runtime " +
                                            num(dt) + " s (< 30 s)"};
}

Outcome criterion8() {
    const auto h = build_heisenberg(7, -1.0, -0.01, true);
    const auto ed = diagonalize(h);
    StatePrepSpec s;
    s.operations.push_back({3, Gate::Ry, 0.9});
    s.operations.push_back({1, Gate::Rx, 0.4});
    const auto psi = prepare_state(s, 7);
    const auto exact = exact_evolve(ed, psi, 1.0).amplitudes();
    auto err = [&](int steps) {
        return (trotter2_evolve(TrotterPlan(h, steps), psi, 1.0).amplitudes() - exact).norm();
    };
    const double e10 = err(10);
    const double e20 = err(20);
    const double ratio = e10 / e20;
    return {ratio >= 3.4 && ratio <= 4.6,
            "error(dt=0.1) = " + num(e10) + ", error(dt=0.05) = " + num(e20) + ", ratio " + num(ratio) + " (in [3.4, 4.6])"};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QSPEC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
    std::size_t count_b = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++count_b;
    if (names.size() != count_b || names.empty()) {
        why = "file sets differ in " + a.string();
        return false;
    }
    for (const auto& n : names) {
        if (read_text_file(a / n) != read_text_file(b / n)) {
            why = n + " differs";
            return false;
        }
    }
    return true;
}

Outcome criterion10() {
    const fs::path root = fs::temp_directory_path() / "qspec_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path configs = QSPEC_CONFIG_DIR;

    // Reduced sample counts keep the CLI runs short; the code paths are the full ones.
    struct Run {
        std::string verb;
        std::string config;
        long n_samples;
    };
    const std::vector<Run> runs{{"spectrum", "heis7.json", 20000},
                                {"dispersion", "ising11.json", 2000},
                                {"noise-bench", "noise7.json", 300}};
    int files = 0;
    for (const auto& r : runs) {
        auto j = nlohmann::json::parse(read_text_file(configs / r.config));
        j["sampling"]["N_s"] = r.n_samples;
        if (j["model"].contains("path")) j["model"]["path"] = (configs / j["model"]["path"].get<std::string>()).string();
        const fs::path cfg = root / r.config;
        write_file_atomic(cfg, j.dump(2));
        const fs::path one = root / (r.verb + "_w1");
        const fs::path four = root / (r.verb + "_w4");
        if (run_cli(r.verb + " --config " + cfg.string() + " --out " + one.string() + " --workers 1") != 0 ||
            run_cli(r.verb + " --config " + cfg.string() + " --out " + four.string() + " --workers 4") != 0) {
            return {false, r.verb + " run failed"};
        }
        std::string why;
        if (!same_tree(one, four, why)) return {false, r.verb + ": " + why};
        for ([[maybe_unused]] const auto& e : fs::directory_iterator(one)) ++files;
    }

    const fs::path v1 = root / "validate_w1";
    const fs::path v4 = root / "validate_w4";
    const int rc1 = run_cli("validate --fixtures two_level,heis7 --out " + v1.string() + " --workers 1");
    const int rc4 = run_cli("validate --fixtures two_level,heis7 --out " + v4.string() + " --workers 4");
    std::string why;
    if (rc1 != 0 || rc4 != 0 || !same_tree(v1, v4, why)) return {false, "validate: " + why};

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto a = run_fixture("noise7", fixture_options()).to_json_line();
    omp_set_num_threads(4);
    const auto b = run_fixture("noise7", fixture_options()).to_json_line();
    omp_set_num_threads(saved);
    if (a != b) return {false, "noise7 fixture JSON differs between 1 and 4 threads"};
    return {true, std::to_string(files) + " CLI output files, fixtures.jsonl and the noise7 fixture record are "
                  "bit-identical for 1 vs 4 workers"};
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    auto wanted = [&](int k) { return selected.empty() || std::find(selected.begin(), selected.end(), k) != selected.end(); };

    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "two-level peak recovery", [] { return fixture_with_budget("two_level", 10.0); }},
        {2, "estimator unbiasedness", criterion2},
        {3, "truncation bound", criterion3},
        {4, "single-peak lemma suite", criterion4},
        {5, "7-site Heisenberg transitions and FWHM scaling", [] { return fixture_with_budget("heis7", 300.0); }},
        {6, "11-site Ising dispersion", [] { return fixture_with_budget("ising11", 900.0); }},
        {7, "13-site ferromagnet magnon dispersion", [] { return fixture_with_budget("ferro13", 0.0); }},
        {8, "second-order Trotter convergence", criterion8},
        {9, "noise benchmarking, fits and mitigation", [] { return fixture_with_budget("noise7", 0.0); }},
        {10, "determinism across worker counts", criterion10},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!wanted(c.id)) continue;
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        if (!out.ok) ++failures;
        std::cout << (out.ok ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << " (" << c.title << "): " << out.detail
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}

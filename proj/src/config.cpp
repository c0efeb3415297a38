#include "qspec/config.hpp"

#include <cmath>
#include <set>

namespace qspec {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

/// Object reader that remembers which keys were consumed and rejects the rest.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where(), "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw ConfigError(at(key), "missing required field");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(at(key), "must be finite");
        return x;
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : (seen_.insert(key), fallback); }

    long integer(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
        return v.get<long>();
    }
    long integer(const std::string& key, long fallback) { return has(key) ? integer(key) : (seen_.insert(key), fallback); }

    std::uint64_t unsigned_integer(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ConfigError(at(key), "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        seen_.insert(key);
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const auto& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::string string(const std::string& key, const std::string& fallback) {
        return has(key) ? string(key) : (seen_.insert(key), fallback);
    }

    Fields object(const std::string& key) { return Fields(raw(key), at(key)); }

    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
        }
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    std::string where() const { return path_.empty() ? "<root>" : path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

char pauli_letter(const std::string& s, const std::string& path) {
    if (s.size() != 1 || (s[0] != 'X' && s[0] != 'Y' && s[0] != 'Z')) {
        throw ConfigError(path, "expected one of \"X\", \"Y\", \"Z\"");
    }
    return s[0];
}

Gate parse_gate(const std::string& s, const std::string& path) {
    if (s == "X") return Gate::X;
    if (s == "Y") return Gate::Y;
    if (s == "Z") return Gate::Z;
    if (s == "Rx") return Gate::Rx;
    if (s == "Ry") return Gate::Ry;
    if (s == "Rz") return Gate::Rz;
    throw ConfigError(path, "unknown gate '" + s + "' (X, Y, Z, Rx, Ry, Rz)");
}

const char* gate_name(Gate g) {
    switch (g) {
    case Gate::X: return "X";
    case Gate::Y: return "Y";
    case Gate::Z: return "Z";
    case Gate::Rx: return "Rx";
    case Gate::Ry: return "Ry";
    case Gate::Rz: return "Rz";
    }
    return "?";
}

bool is_rotation(Gate g) { return g == Gate::Rx || g == Gate::Ry || g == Gate::Rz; }

StatePrepSpec parse_state(Fields f, int n) {
    StatePrepSpec s;
    const auto base = f.string("base", "all_plus");
    if (base == "all_plus") {
        s.base = StatePrepSpec::Base::AllPlus;
    } else if (base == "all_zero") {
        s.base = StatePrepSpec::Base::AllZero;
    } else if (base == "custom") {
        s.base = StatePrepSpec::Base::Custom;
        const auto& amps = f.raw("amplitudes");
        if (!amps.is_array()) throw ConfigError(f.at("amplitudes"), "expected an array of [re, im] pairs");
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const auto& a = amps[i];
            const auto path = f.at("amplitudes") + "[" + std::to_string(i) + "]";
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
                throw ConfigError(path, "expected [re, im]");
            }
            s.custom_amplitudes.emplace_back(a[0].get<double>(), a[1].get<double>());
        }
    } else {
        throw ConfigError(f.at("base"), "expected all_plus, all_zero or custom");
    }
    if (s.base != StatePrepSpec::Base::Custom && f.has("amplitudes")) {
        throw ConfigError(f.at("amplitudes"), "only allowed with base \"custom\"");
    }
    if (f.has("operations")) {
        const auto& ops = f.raw("operations");
        if (!ops.is_array()) throw ConfigError(f.at("operations"), "expected an array");
        for (std::size_t i = 0; i < ops.size(); ++i) {
            Fields o(ops[i], f.at("operations") + "[" + std::to_string(i) + "]");
            GateOp op;
            op.site = static_cast<int>(o.integer("site"));
            if (op.site < 0 || op.site >= n) throw ConfigError(o.at("site"), "site out of range for n = " + std::to_string(n));
            op.gate = parse_gate(o.string("gate"), o.at("gate"));
            if (is_rotation(op.gate)) {
                op.theta = o.number("theta");
            } else if (o.has("theta")) {
                throw ConfigError(o.at("theta"), "only rotation gates take an angle");
            }
            o.done();
            s.operations.push_back(op);
        }
    }
    if (f.has("beta")) s.beta = f.number("beta");
    f.done();
    return s;
}

std::pair<double, double> parse_window(const json& w, const std::string& path) {
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
        throw ConfigError(path, "expected [lo, hi]");
    }
    const double lo = w[0].get<double>();
    const double hi = w[1].get<double>();
    if (!(lo < hi)) throw ConfigError(path, "window needs lo < hi");
    return {lo, hi};
}

} // namespace

RunConfig parse_config(const json& j) {
    Fields root(j, "");
    RunConfig c;
    c.schema = static_cast<int>(root.integer("schema"));
    if (c.schema != kConfigSchema) {
        throw ConfigError("schema", "unsupported schema version " + std::to_string(c.schema) + " (expected " +
                                        std::to_string(kConfigSchema) + ")");
    }
    c.n = static_cast<int>(root.integer("n"));
    if (c.n < 1 || c.n > 20) throw ConfigError("n", "qubit count must lie in [1, 20]");

    {
        auto m = root.object("model");
        c.model.type = m.string("type");
        if (c.model.type == "heisenberg") {
            c.model.J = m.number("J");
            c.model.h_z = m.number("h_z", 0.0);
            c.model.periodic = m.boolean("periodic", true);
        } else if (c.model.type == "tfim") {
            c.model.J = m.number("J");
            c.model.h_x = m.number("h_x");
            c.model.h_z = m.number("h_z", 0.0);
            c.model.periodic = m.boolean("periodic", true);
        } else if (c.model.type == "fermi_hubbard") {
            c.model.t_hop = m.number("t_hop");
            c.model.U = m.number("U");
            if (c.n % 2 != 0) throw ConfigError("n", "fermi_hubbard uses 2 qubits per site; n must be even");
        } else if (c.model.type == "pauli_file") {
            c.model.path = m.string("path");
        } else {
            throw ConfigError(m.at("type"), "expected heisenberg, tfim, fermi_hubbard or pauli_file");
        }
        m.done();
    }

    c.state_prep = root.has("state_prep") ? parse_state(root.object("state_prep"), c.n) : StatePrepSpec{};

    {
        auto o = root.object("observable");
        c.observable.type = o.string("type");
        if (c.observable.type == "single") {
            c.observable.letter = pauli_letter(o.string("letter"), o.at("letter"));
            c.observable.site = static_cast<int>(o.integer("site"));
            if (c.observable.site < 0 || c.observable.site >= c.n) throw ConfigError(o.at("site"), "site out of range");
        } else if (c.observable.type == "family") {
            c.observable.letter = pauli_letter(o.string("letter"), o.at("letter"));
        } else if (c.observable.type == "pauli_file") {
            c.observable.path = o.string("path");
        } else {
            throw ConfigError(o.at("type"), "expected single, family or pauli_file");
        }
        o.done();
    }

    {
        auto f = root.object("filter");
        if (f.has("auto")) {
            auto a = f.object("auto");
            AutoFilterConfig ac;
            ac.eps = a.number("eps");
            if (!(ac.eps > 0.0)) throw ConfigError(a.at("eps"), "must be > 0");
            ac.delta = a.number("delta", 0.05);
            if (!(ac.delta > 0.0 && ac.delta < 1.0)) throw ConfigError(a.at("delta"), "must lie in (0, 1)");
            if (a.has("gamma")) ac.gamma = a.number("gamma");
            if (a.has("Gamma_j")) ac.gamma_j = a.number("Gamma_j");
            if (ac.gamma && !(*ac.gamma > 0.0)) throw ConfigError(a.at("gamma"), "must be > 0");
            if (ac.gamma_j && !(*ac.gamma_j > 0.0 && *ac.gamma_j <= 1.0)) throw ConfigError(a.at("Gamma_j"), "must lie in (0, 1]");
            if (ac.gamma && !(ac.eps <= 0.2 * *ac.gamma)) throw ConfigError(a.at("eps"), "must satisfy eps <= 0.2 gamma");
            a.done();
            c.filter.automatic = ac;
            if (f.has("tau") || f.has("T")) throw ConfigError("filter", "give either tau/T or auto, not both");
        } else {
            c.filter.tau = f.number("tau");
            c.filter.cutoff = f.number("T");
            if (!(*c.filter.tau > 0.0)) throw ConfigError(f.at("tau"), "must be > 0");
            if (!(*c.filter.cutoff > 0.0)) throw ConfigError(f.at("T"), "must be > 0");
        }
        f.done();
    }

    {
        auto w = root.object("omega");
        c.omega.min = w.number("min");
        c.omega.max = w.number("max");
        c.omega.resolution = w.number("resolution");
        if (!(c.omega.resolution > 0.0)) throw ConfigError(w.at("resolution"), "must be > 0");
        if (!(c.omega.min < c.omega.max)) throw ConfigError(w.at("min"), "must be below omega.max");
        w.done();
    }

    {
        auto s = root.object("sampling");
        if (s.has("N_s")) {
            c.sampling.n_samples = s.integer("N_s");
            if (*c.sampling.n_samples < 1) throw ConfigError(s.at("N_s"), "must be >= 1");
        } else if (!c.filter.automatic) {
            s.integer("N_s");
        }
        c.sampling.shots = s.integer("shots", 0);
        if (c.sampling.shots < 0) throw ConfigError(s.at("shots"), "must be >= 0 (0 selects exact expectations)");
        c.sampling.seed = s.unsigned_integer("seed");
        s.done();
    }

    if (root.has("engine")) {
        auto e = root.object("engine");
        c.engine.type = e.string("type");
        if (c.engine.type == "trotter") {
            c.engine.steps_per_unit = static_cast<int>(e.integer("steps_per_unit"));
            if (c.engine.steps_per_unit < 1) throw ConfigError(e.at("steps_per_unit"), "must be >= 1");
        } else if (c.engine.type != "exact") {
            throw ConfigError(e.at("type"), "expected exact or trotter");
        }
        e.done();
    }

    if (root.has("noise")) {
        auto z = root.object("noise");
        NoiseConfig nc;
        nc.model = z.string("model");
        if (nc.model == "global") {
            nc.lambda = z.number("lambda");
            if (!(nc.lambda >= 0.0)) throw ConfigError(z.at("lambda"), "must be >= 0");
        } else if (nc.model == "local") {
            nc.p_gate = z.number("p_gate");
            if (!(nc.p_gate >= 0.0 && nc.p_gate < 1.0)) throw ConfigError(z.at("p_gate"), "must lie in [0, 1)");
            if (c.engine.type != "trotter") throw ConfigError(z.at("model"), "local noise needs engine.type = trotter");
        } else {
            throw ConfigError(z.at("model"), "expected global or local");
        }
        nc.mitigate = z.boolean("mitigate", false);
        if (z.has("depths")) {
            const auto& d = z.raw("depths");
            if (!d.is_array() || d.empty()) throw ConfigError(z.at("depths"), "expected a non-empty integer array");
            for (const auto& v : d) {
                if (!v.is_number_integer() || v.get<long>() < 0) throw ConfigError(z.at("depths"), "depths must be integers >= 0");
                nc.depths.push_back(v.get<long>());
            }
        }
        if (z.has("dt")) {
            nc.dt = z.number("dt");
            if (!(*nc.dt > 0.0)) throw ConfigError(z.at("dt"), "must be > 0");
        }
        nc.fit = z.string("fit", "observable");
        if (nc.fit != "observable" && nc.fit != "global") throw ConfigError(z.at("fit"), "expected observable or global");
        if (z.has("benchmark_state")) nc.benchmark_state = parse_state(z.object("benchmark_state"), c.n);
        z.done();
        c.noise = nc;
    }

    if (root.has("peaks")) {
        auto p = root.object("peaks");
        if (p.has("windows")) {
            const auto& w = p.raw("windows");
            if (!w.is_array()) throw ConfigError(p.at("windows"), "expected an array of [lo, hi]");
            for (std::size_t i = 0; i < w.size(); ++i) {
                c.peaks.windows.push_back(parse_window(w[i], p.at("windows") + "[" + std::to_string(i) + "]"));
            }
        }
        c.peaks.threshold = p.number("threshold", 0.1);
        if (!(c.peaks.threshold >= 0.0 && c.peaks.threshold <= 1.0)) throw ConfigError(p.at("threshold"), "must lie in [0, 1]");
        p.done();
    }

    if (root.has("dispersion")) {
        auto d = root.object("dispersion");
        c.dispersion.remove_k0 = d.boolean("remove_k0", true);
        if (d.has("window")) c.dispersion.window = parse_window(d.raw("window"), d.at("window"));
        c.dispersion.floor = d.number("floor", 1e-3);
        if (!(c.dispersion.floor >= 0.0 && c.dispersion.floor < 1.0)) throw ConfigError(d.at("floor"), "must lie in [0, 1)");
        d.done();
    }

    {
        auto o = root.object("outputs");
        c.output_dir = o.string("directory", "");
        o.done();
    }

    if (root.has("derived")) {
        const auto& d = root.raw("derived");
        if (!d.is_object()) throw ConfigError("derived", "expected an object");
        c.derived = ojson::parse(d.dump());
    }
    root.done();
    return c;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    RunConfig c = parse_config(j);
    // Keep the key order of the informational block so manifests round-trip byte for byte.
    if (c.derived.is_object()) c.derived = ojson::parse(text)["derived"];
    return c;
}

ojson state_prep_to_json(const StatePrepSpec& s) {
    ojson j;
    switch (s.base) {
    case StatePrepSpec::Base::AllPlus: j["base"] = "all_plus"; break;
    case StatePrepSpec::Base::AllZero: j["base"] = "all_zero"; break;
    case StatePrepSpec::Base::Custom: {
        j["base"] = "custom";
        ojson amps = ojson::array();
        for (const auto& a : s.custom_amplitudes) amps.push_back({a.real(), a.imag()});
        j["amplitudes"] = amps;
        break;
    }
    }
    ojson ops = ojson::array();
    for (const auto& op : s.operations) {
        ojson o;
        o["site"] = op.site;
        o["gate"] = gate_name(op.gate);
        if (is_rotation(op.gate)) o["theta"] = op.theta;
        ops.push_back(o);
    }
    j["operations"] = ops;
    if (s.beta) j["beta"] = *s.beta;
    return j;
}

ojson to_json(const RunConfig& c) {
    ojson j;
    j["schema"] = c.schema;
    j["n"] = c.n;
    ojson m;
    m["type"] = c.model.type;
    if (c.model.type == "heisenberg") {
        m["J"] = c.model.J;
        m["h_z"] = c.model.h_z;
        m["periodic"] = c.model.periodic;
    } else if (c.model.type == "tfim") {
        m["J"] = c.model.J;
        m["h_x"] = c.model.h_x;
        m["h_z"] = c.model.h_z;
        m["periodic"] = c.model.periodic;
    } else if (c.model.type == "fermi_hubbard") {
        m["t_hop"] = c.model.t_hop;
        m["U"] = c.model.U;
    } else {
        m["path"] = c.model.path;
    }
    j["model"] = m;
    j["state_prep"] = state_prep_to_json(c.state_prep);

    ojson o;
    o["type"] = c.observable.type;
    if (c.observable.type == "single") {
        o["letter"] = std::string(1, c.observable.letter);
        o["site"] = c.observable.site;
    } else if (c.observable.type == "family") {
        o["letter"] = std::string(1, c.observable.letter);
    } else {
        o["path"] = c.observable.path;
    }
    j["observable"] = o;

    ojson f;
    if (c.filter.automatic) {
        ojson a;
        a["eps"] = c.filter.automatic->eps;
        a["delta"] = c.filter.automatic->delta;
        if (c.filter.automatic->gamma) a["gamma"] = *c.filter.automatic->gamma;
        if (c.filter.automatic->gamma_j) a["Gamma_j"] = *c.filter.automatic->gamma_j;
        f["auto"] = a;
    } else {
        f["tau"] = c.filter.tau.value_or(0.0);
        f["T"] = c.filter.cutoff.value_or(0.0);
    }
    j["filter"] = f;
    j["omega"] = {{"min", c.omega.min}, {"max", c.omega.max}, {"resolution", c.omega.resolution}};

    ojson s;
    if (c.sampling.n_samples) s["N_s"] = *c.sampling.n_samples;
    s["shots"] = c.sampling.shots;
    s["seed"] = c.sampling.seed;
    j["sampling"] = s;

    ojson e;
    e["type"] = c.engine.type;
    if (c.engine.type == "trotter") e["steps_per_unit"] = c.engine.steps_per_unit;
    j["engine"] = e;

    if (c.noise) {
        ojson z;
        z["model"] = c.noise->model;
        if (c.noise->model == "global") {
            z["lambda"] = c.noise->lambda;
        } else {
            z["p_gate"] = c.noise->p_gate;
        }
        z["mitigate"] = c.noise->mitigate;
        if (!c.noise->depths.empty()) z["depths"] = c.noise->depths;
        if (c.noise->dt) z["dt"] = *c.noise->dt;
        z["fit"] = c.noise->fit;
        if (c.noise->benchmark_state) z["benchmark_state"] = state_prep_to_json(*c.noise->benchmark_state);
        j["noise"] = z;
    }

    ojson p;
    ojson wins = ojson::array();
    for (const auto& [lo, hi] : c.peaks.windows) wins.push_back({lo, hi});
    p["windows"] = wins;
    p["threshold"] = c.peaks.threshold;
    j["peaks"] = p;

    ojson d;
    d["remove_k0"] = c.dispersion.remove_k0;
    if (c.dispersion.window) d["window"] = {c.dispersion.window->first, c.dispersion.window->second};
    d["floor"] = c.dispersion.floor;
    j["dispersion"] = d;

    j["outputs"] = {{"directory", c.output_dir}};
    if (!c.derived.is_null()) j["derived"] = c.derived;
    return j;
}

} // namespace qspec

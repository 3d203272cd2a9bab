#include "nonstatq/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "nonstatq/errors.hpp"

namespace nonstatq {

namespace {

const std::map<ProfileKind, std::vector<std::string>>& profile_keys() {
    static const std::map<ProfileKind, std::vector<std::string>> keys{
        {ProfileKind::constant, {"value"}},
        {ProfileKind::exponential, {"amplitude", "rate"}},
        {ProfileKind::linear_ramp, {"start", "slope"}},
        {ProfileKind::sinusoidal, {"offset", "amplitude", "angular_frequency", "phase"}},
        {ProfileKind::power, {"scale", "rate", "exponent"}},
        {ProfileKind::tabulated, {"order", "fd_step"}},
    };
    return keys;
}

std::string join(std::string_view path, std::string_view key) {
    return path.empty() ? std::string(key) : std::string(path) + "." + std::string(key);
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
}

void check_keys(const toml::table& t, std::string_view path, const std::vector<std::string>& allowed) {
    for (auto&& [k, v] : t) {
        const std::string key(k.str());
        if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
        std::string msg = "unknown key";
        if (auto hint = did_you_mean(key, allowed)) msg += "; did you mean '" + *hint + "'?";
        fail(join(path, key), msg);
    }
}

const toml::table* sub_table(const toml::table& t, std::string_view key, std::string_view path) {
    const auto* node = t.get(key);
    if (!node) return nullptr;
    if (!node->is_table()) fail(join(path, key), "expected a table");
    return node->as_table();
}

std::optional<double> number(const toml::table& t, std::string_view key, std::string_view path) {
    const auto* node = t.get(key);
    if (!node) return std::nullopt;
    if (!node->is_number()) fail(join(path, key), "expected a number");
    return node->value<double>();
}

void read_number(const toml::table& t, std::string_view key, std::string_view path, double& out) {
    if (auto v = number(t, key, path)) out = *v;
}

void read_bool(const toml::table& t, std::string_view key, std::string_view path, bool& out) {
    const auto* node = t.get(key);
    if (!node) return;
    if (!node->is_boolean()) fail(join(path, key), "expected true or false");
    out = *node->value<bool>();
}

std::optional<std::string> string_value(const toml::table& t, std::string_view key,
                                        std::string_view path) {
    const auto* node = t.get(key);
    if (!node) return std::nullopt;
    if (!node->is_string()) fail(join(path, key), "expected a string");
    return *node->value<std::string>();
}

std::vector<double> number_list(const toml::node& node, const std::string& field) {
    if (!node.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : *node.as_array()) {
        if (!e.is_number()) fail(field, "expected an array of numbers");
        out.push_back(*e.value<double>());
    }
    return out;
}

cplx complex_value(const toml::node& node, const std::string& field) {
    if (node.is_number()) return {*node.value<double>(), 0.0};
    const auto v = number_list(node, field);
    if (v.size() != 2) fail(field, "expected a number or [re, im]");
    return {v[0], v[1]};
}

template <class Enum>
Enum parse_enum(const std::string& text, const std::vector<std::pair<std::string, Enum>>& names,
                const std::string& field) {
    std::vector<std::string> candidates;
    for (const auto& [n, e] : names) {
        if (n == text) return e;
        candidates.push_back(n);
    }
    std::string msg = "unknown value '" + text + "'";
    if (auto hint = did_you_mean(text, candidates)) msg += "; did you mean '" + *hint + "'?";
    fail(field, msg);
}

const std::vector<std::pair<std::string, ProfileKind>> kind_names{
    {"constant", ProfileKind::constant},     {"exponential", ProfileKind::exponential},
    {"linear_ramp", ProfileKind::linear_ramp}, {"sinusoidal", ProfileKind::sinusoidal},
    {"power", ProfileKind::power},           {"tabulated", ProfileKind::tabulated},
};

const std::vector<std::pair<std::string, Output>> output_names{
    {"envelope", Output::envelope}, {"quadratures", Output::quadratures},
    {"field", Output::field},       {"energy", Output::energy},
    {"wavefunction", Output::wavefunction}, {"choi_yeon", Output::choi_yeon},
    {"checks", Output::checks},
};

ProfileSpec parse_profile(const toml::node& node, const std::string& field) {
    if (node.is_number()) return ProfileSpec::constant(*node.value<double>());
    if (!node.is_table()) fail(field, "expected a number or an inline table with 'kind'");
    const auto& t = *node.as_table();
    const auto kind_text = string_value(t, "kind", field);
    if (!kind_text) fail(field + ".kind", "missing");
    ProfileSpec spec;
    spec.kind = parse_enum(*kind_text, kind_names, field + ".kind");
    spec.params.clear();

    auto allowed = profile_keys().at(spec.kind);
    allowed.push_back("kind");
    if (spec.kind == ProfileKind::tabulated) {
        allowed.push_back("times");
        allowed.push_back("values");
    }
    check_keys(t, field, allowed);

    for (const auto& key : profile_keys().at(spec.kind)) {
        const bool optional = key == "phase" || key == "order" || key == "fd_step";
        auto v = number(t, key, field);
        if (!v && !optional) fail(join(field, key), "missing");
        const double fallback = key == "order" ? 3.0 : 0.0;
        spec.params[key] = v.value_or(fallback);
    }
    if (spec.kind == ProfileKind::tabulated) {
        const auto* times = t.get("times");
        const auto* values = t.get("values");
        if (!times) fail(field + ".times", "missing");
        if (!values) fail(field + ".values", "missing");
        spec.times = number_list(*times, field + ".times");
        spec.values = number_list(*values, field + ".values");
    }
    try {
        (void)spec.build();
    } catch (const Error& e) {
        fail(field, e.what());
    }
    return spec;
}

ScenarioConfig from_table(const toml::table& root) {
    ScenarioConfig cfg;
    check_keys(root, "",
               {"name", "constants", "medium", "mode", "state", "initial_conditions", "time",
                "tolerances", "outputs", "conventions"});
    if (auto n = string_value(root, "name", "")) cfg.name = *n;

    if (const auto* t = sub_table(root, "constants", "")) {
        check_keys(*t, "constants", {"hbar", "eps0", "c"});
        read_number(*t, "hbar", "constants", cfg.constants.hbar);
        read_number(*t, "eps0", "constants", cfg.constants.eps0);
        read_number(*t, "c", "constants", cfg.constants.c);
    }
    if (const auto* t = sub_table(root, "medium", "")) {
        check_keys(*t, "medium", {"epsilon", "mu", "sigma"});
        if (const auto* n = t->get("epsilon")) cfg.permittivity = parse_profile(*n, "medium.epsilon");
        if (const auto* n = t->get("mu")) cfg.permeability = parse_profile(*n, "medium.mu");
        if (const auto* n = t->get("sigma")) cfg.conductivity = parse_profile(*n, "medium.sigma");
    }
    if (const auto* t = sub_table(root, "mode", "")) {
        check_keys(*t, "mode", {"omega0", "volume", "polarization"});
        read_number(*t, "omega0", "mode", cfg.mode.omega0);
        read_number(*t, "volume", "mode", cfg.mode.volume);
        if (auto p = string_value(*t, "polarization", "mode")) cfg.mode.polarization = *p;
    }
    if (const auto* t = sub_table(root, "state", "")) {
        check_keys(*t, "state", {"kind", "alpha", "n"});
        const auto kind = string_value(*t, "kind", "state").value_or("coherent");
        if (kind == "coherent") {
            if (t->get("n")) fail("state.n", "only valid for kind = \"fock\"");
            cplx alpha{1.0, 0.0};
            if (const auto* a = t->get("alpha")) alpha = complex_value(*a, "state.alpha");
            cfg.state = QuantumState::coherent(alpha);
        } else if (kind == "fock") {
            if (t->get("alpha")) fail("state.alpha", "only valid for kind = \"coherent\"");
            const auto* n = t->get("n");
            if (!n || !n->is_integer()) fail("state.n", "expected a nonnegative integer");
            cfg.state = QuantumState::fock(static_cast<int>(*n->value<std::int64_t>()));
        } else {
            std::string msg = "unknown value '" + kind + "'";
            if (auto hint = did_you_mean(kind, {"coherent", "fock"})) msg += "; did you mean '" + *hint + "'?";
            fail("state.kind", msg);
        }
    }
    if (const auto* t = sub_table(root, "initial_conditions", "")) {
        check_keys(*t, "initial_conditions", {"policy", "eps", "deps"});
        const auto policy = string_value(*t, "policy", "initial_conditions").value_or("glauber");
        cfg.ic_policy = parse_enum<IcPolicy>(
            policy, {{"glauber", IcPolicy::glauber}, {"explicit", IcPolicy::explicit_values},
                     {"exact", IcPolicy::exact}},
            "initial_conditions.policy");
        const bool expl = cfg.ic_policy == IcPolicy::explicit_values;
        for (const char* key : {"eps", "deps"}) {
            const auto* n = t->get(key);
            if (expl && !n) fail(join("initial_conditions", key), "required for policy = \"explicit\"");
            if (!expl && n) fail(join("initial_conditions", key), "only valid for policy = \"explicit\"");
        }
        if (expl) {
            cfg.explicit_ic.eps = complex_value(*t->get("eps"), "initial_conditions.eps");
            cfg.explicit_ic.deps = complex_value(*t->get("deps"), "initial_conditions.deps");
        }
    }
    if (const auto* t = sub_table(root, "time", "")) {
        check_keys(*t, "time", {"t_start", "t_end", "n_points"});
        read_number(*t, "t_start", "time", cfg.t_start);
        read_number(*t, "t_end", "time", cfg.t_end);
        if (const auto* n = t->get("n_points")) {
            if (!n->is_integer() || *n->value<std::int64_t>() < 2) fail("time.n_points", "expected an integer >= 2");
            cfg.n_points = static_cast<std::size_t>(*n->value<std::int64_t>());
        }
    }
    if (const auto* t = sub_table(root, "tolerances", "")) {
        check_keys(*t, "tolerances", {"ode_abs", "ode_rel", "check", "renormalize_wronskian"});
        read_number(*t, "ode_abs", "tolerances", cfg.ode_abs);
        read_number(*t, "ode_rel", "tolerances", cfg.ode_rel);
        read_number(*t, "check", "tolerances", cfg.check_tol);
        read_bool(*t, "renormalize_wronskian", "tolerances", cfg.renormalize_wronskian);
    }
    if (const auto* t = sub_table(root, "outputs", "")) {
        check_keys(*t, "outputs", {"select", "field_x", "wavefunction_times", "exact", "choi_yeon_M0",
                                   "reference_frequency"});
        if (const auto* s = t->get("select")) {
            if (!s->is_array()) fail("outputs.select", "expected an array of strings");
            cfg.outputs.clear();
            for (const auto& e : *s->as_array()) {
                if (!e.is_string()) fail("outputs.select", "expected an array of strings");
                cfg.outputs.insert(parse_enum(*e.value<std::string>(), output_names, "outputs.select"));
            }
        }
        if (const auto* x = t->get("field_x")) cfg.field_x = number_list(*x, "outputs.field_x");
        if (const auto* w = t->get("wavefunction_times")) {
            cfg.wavefunction_times = number_list(*w, "outputs.wavefunction_times");
        }
        if (auto e = string_value(*t, "exact", "outputs")) {
            cfg.exact = parse_enum<ExactCase>(
                *e, {{"stationary", ExactCase::stationary}, {"hyperbolic", ExactCase::hyperbolic}},
                "outputs.exact");
        }
        read_number(*t, "choi_yeon_M0", "outputs", cfg.choi_yeon_M0);
        if (auto f = number(*t, "reference_frequency", "outputs")) cfg.reference_frequency = *f;
    }
    if (const auto* t = sub_table(root, "conventions", "")) {
        check_keys(*t, "conventions", {"include_eps_dot_in_gamma", "e_mean_half_lambda"});
        read_bool(*t, "include_eps_dot_in_gamma", "conventions", cfg.conventions.include_eps_dot_in_gamma);
        read_bool(*t, "e_mean_half_lambda", "conventions", cfg.conventions.e_mean_half_lambda);
    }
    cfg.validate();
    return cfg;
}

}  // namespace

ProfileSpec ProfileSpec::constant(double value) {
    ProfileSpec s;
    s.params = {{"value", value}};
    return s;
}

TimeFunction ProfileSpec::build() const {
    auto p = [this](const char* key) {
        auto it = params.find(key);
        if (it == params.end()) throw DomainError(std::string("profile parameter '") + key + "' missing");
        return it->second;
    };
    switch (kind) {
        case ProfileKind::constant: return TimeFunction::constant(p("value"));
        case ProfileKind::exponential: return TimeFunction::exponential(p("amplitude"), p("rate"));
        case ProfileKind::linear_ramp: return TimeFunction::linear_ramp(p("start"), p("slope"));
        case ProfileKind::sinusoidal:
            return TimeFunction::sinusoidal(p("offset"), p("amplitude"), p("angular_frequency"),
                                            p("phase"));
        case ProfileKind::power: return TimeFunction::power(p("scale"), p("rate"), p("exponent"));
        case ProfileKind::tabulated: {
            const double order = p("order");
            if (order != 1.0 && order != 3.0) throw DomainError("tabulated order must be 1 or 3");
            return TimeFunction::tabulated(times, values, static_cast<int>(order), p("fd_step"));
        }
    }
    throw DomainError("unknown profile kind");
}

const char* to_string(IcPolicy p) {
    switch (p) {
        case IcPolicy::glauber: return "glauber";
        case IcPolicy::explicit_values: return "explicit";
        case IcPolicy::exact: return "exact";
    }
    return "?";
}

const char* to_string(ExactCase c) {
    return c == ExactCase::stationary ? "stationary" : "hyperbolic";
}

const char* to_string(Output o) {
    for (const auto& [n, e] : output_names) {
        if (e == o) return n.c_str();
    }
    return "?";
}

MediumProfile ScenarioConfig::medium() const {
    return MediumProfile(permittivity.build(), permeability.build(), conductivity.build(),
                         conventions.include_eps_dot_in_gamma);
}

IntegratorOptions ScenarioConfig::integrator_options() const {
    IntegratorOptions o;
    o.abs_tol = ode_abs;
    o.rel_tol = ode_rel;
    o.renormalize_wronskian = renormalize_wronskian;
    return o;
}

std::vector<double> ScenarioConfig::grid() const { return linspace(t_start, t_end, n_points); }

void ScenarioConfig::validate() const {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) fail(field, "must be positive and finite");
    };
    positive(constants.hbar, "constants.hbar");
    positive(constants.eps0, "constants.eps0");
    positive(constants.c, "constants.c");
    positive(mode.omega0, "mode.omega0");
    positive(mode.volume, "mode.volume");
    if (!std::isfinite(t_start)) fail("time.t_start", "must be finite");
    if (!(t_end > t_start) || !std::isfinite(t_end)) fail("time.t_end", "must exceed time.t_start");
    if (n_points < 2) fail("time.n_points", "must be at least 2");
    positive(ode_abs, "tolerances.ode_abs");
    positive(ode_rel, "tolerances.ode_rel");
    positive(check_tol, "tolerances.check");
    positive(choi_yeon_M0, "outputs.choi_yeon_M0");
    if (reference_frequency) positive(*reference_frequency, "outputs.reference_frequency");
    if (outputs.empty()) fail("outputs.select", "select at least one output");
    if (state.kind == QuantumState::Kind::fock && (state.n < 0 || state.n > max_fock_number)) {
        fail("state.n", "must lie in [0, " + std::to_string(max_fock_number) + "]");
    }
    for (double t : wavefunction_times) {
        if (t < t_start || t > t_end) fail("outputs.wavefunction_times", "times must lie in [t_start, t_end]");
    }
    if (outputs.count(Output::choi_yeon) && n_points < 5) {
        fail("time.n_points", "choi_yeon output needs at least 5 points");
    }
    if (ic_policy == IcPolicy::exact && !exact) {
        fail("initial_conditions.policy", "policy = \"exact\" needs outputs.exact");
    }

    MediumProfile profile;
    try {
        profile = medium();
        const auto [lo, hi] = profile.domain();
        if (t_start < lo || t_end > hi) fail("time", "interval leaves the medium profile domain");
        (void)medium_state(profile, mode, constants, t_start);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail("medium", e.what());
    }

    if (ic_policy == IcPolicy::explicit_values) {
        const double drift = std::abs(wronskian(explicit_ic.eps, explicit_ic.deps) - cplx{0.0, -2.0});
        if (drift > 1e-9) {
            fail("initial_conditions", "Wronskian eps conj(deps) - conj(eps) deps must equal -2i; |w + 2i| = " +
                                           std::to_string(drift));
        }
    }
    if (ic_policy == IcPolicy::glauber) {
        const auto st = medium_state(profile, mode, constants, t_start);
        if (!(st.big_omega_sq > 0.0)) {
            fail("initial_conditions.policy", "glauber needs Omega^2(t_start) > 0");
        }
    }
}

ScenarioConfig parse_scenario_string(std::string_view text, std::string_view source) {
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        const auto& b = e.source().begin;
        std::ostringstream msg;
        msg << source << ":" << b.line << ":" << b.column << ": " << e.description();
        throw ConfigError(msg.str());
    }
    return from_table(root);
}

ScenarioConfig parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_string(buf.str(), path.string());
}

std::optional<std::string> did_you_mean(std::string_view key, const std::vector<std::string>& candidates) {
    std::optional<std::string> best;
    std::size_t best_d = 3;
    for (const auto& c : candidates) {
        std::vector<std::size_t> row(c.size() + 1);
        for (std::size_t j = 0; j <= c.size(); ++j) row[j] = j;
        for (std::size_t i = 1; i <= key.size(); ++i) {
            std::size_t diag = row[0];
            row[0] = i;
            for (std::size_t j = 1; j <= c.size(); ++j) {
                const std::size_t up = row[j];
                row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (key[i - 1] == c[j - 1] ? 0 : 1)});
                diag = up;
            }
        }
        if (row[c.size()] < best_d) {
            best_d = row[c.size()];
            best = c;
        }
    }
    return best;
}

ScenarioConfig builtin_vacuum() {
    ScenarioConfig c;
    c.name = "vacuum";
    c.t_end = 50.0;
    c.n_points = 501;
    c.exact = ExactCase::stationary;
    c.ode_abs = 1e-12;
    c.ode_rel = 1e-12;
    return c;
}

ScenarioConfig builtin_stationary_conductive() {
    ScenarioConfig c = builtin_vacuum();
    c.name = "stationary-conductive";
    c.conductivity = ProfileSpec::constant(0.2);
    return c;
}

ScenarioConfig builtin_hyperbolic_decay() {
    ScenarioConfig c = builtin_vacuum();
    c.name = "hyperbolic-decay";
    c.permeability.kind = ProfileKind::power;
    c.permeability.params = {{"scale", 1.0}, {"rate", c.mode.omega0}, {"exponent", 2.0}};
    c.exact = ExactCase::hyperbolic;
    c.ic_policy = IcPolicy::exact;
    return c;
}

std::vector<ScenarioConfig> builtin_scenarios() {
    return {builtin_vacuum(), builtin_stationary_conductive(), builtin_hyperbolic_decay()};
}

InitialConditions resolve_initial_conditions(const ScenarioConfig& cfg) {
    switch (cfg.ic_policy) {
        case IcPolicy::explicit_values: return cfg.explicit_ic;
        case IcPolicy::exact: {
            const auto s = exact_sample(cfg, cfg.t_start);
            return {s.eps, s.deps};
        }
        case IcPolicy::glauber: break;
    }
    const auto st = medium_state(cfg.medium(), cfg.mode, cfg.constants, cfg.t_start);
    if (!(st.big_omega_sq > 0.0)) {
        throw ConfigError("initial_conditions.policy: glauber needs Omega^2(t_start) > 0");
    }
    return glauber_initial_conditions(std::sqrt(st.big_omega_sq));
}

EnvelopeSample exact_sample(const ScenarioConfig& cfg, double t) {
    if (!cfg.exact) throw DomainError("scenario has no exact solution configured");
    const auto profile = cfg.medium();
    EnvelopeSample s;
    if (*cfg.exact == ExactCase::stationary) {
        const auto st = medium_state(profile, cfg.mode, cfg.constants, cfg.t_start);
        s = stationary_envelope(st.big_omega_sq, t - cfg.t_start);
    } else {
        s = hyperbolic_decay_envelope(cfg.mode.omega0, t);
    }
    s.t = t;
    return attach_medium(s, profile, cfg.mode, cfg.constants);
}

double resolved_reference_frequency(const ScenarioConfig& cfg) {
    if (cfg.reference_frequency) return *cfg.reference_frequency;
    const auto st = medium_state(cfg.medium(), cfg.mode, cfg.constants, cfg.t_start);
    if (!(st.big_omega_sq > 0.0)) {
        throw ConfigError("outputs.reference_frequency: required when Omega^2(t_start) <= 0");
    }
    return std::sqrt(st.big_omega_sq);
}

}  // namespace nonstatq

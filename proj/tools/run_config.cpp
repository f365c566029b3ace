#include "run_config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "frames/circle_model.hpp"
#include "frames/sphere_model.hpp"

namespace frames::cli {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& where) {
    if (j.is_string() && (j == "inf" || j == "infinity")) return kInf;
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

double positive(const json& j, const std::string& where) {
    const double v = number(j, where);
    if (!(v > 0.0)) throw ConfigError(where + ": must be positive");
    return v;
}

int integer(const json& j, const std::string& where, int lo) {
    if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
    const auto v = j.get<long long>();
    if (v < lo || v > 1'000'000'000) throw ConfigError(where + ": out of range");
    return static_cast<int>(v);
}

std::vector<double> numbers(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(positive(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

void check_model(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError(where + ": model needs a kind");
    try {
        (void)make_model(j);
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace

void Tolerances::scale(double s) {
    for (double* v : {&partition, &moment, &parseval, &reconstruction, &upper_slack, &lp_residual, &slope, &besov_slope,
                      &homogeneity, &line_tight, &line_norm, &line_integral})
        *v *= s;
}

RunConfig default_config() {
    RunConfig c;
    c.model = {{"kind", "sphere2"}, {"max_degree", 16}, {"gauss_latitudes", 97}, {"longitudes", 193}};
    c.suite_models = {json{{"kind", "circle"}, {"max_degree", 64}, {"quadrature_size", 4096}},
                      json{{"kind", "sphere2"}, {"max_degree", 32}, {"gauss_latitudes", 193}, {"longitudes", 385}}};
    c.lp_p = {1.0, 2.0, kInf};
    c.kernel.p = {1.0, 2.0, kInf};
    return c;
}

RunConfig parse_config(const json& j) {
    RunConfig c = default_config();
    check_keys(j, "config", {"schema", "seed", "model", "suite_models", "levels", "lattice", "cubature", "frame", "kernel", "lp", "besov",
                             "line", "tolerances"});
    if (j.contains("schema") && j["schema"] != 1) throw ConfigError("config: schema must be 1");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || (!j["seed"].is_number_unsigned() && j["seed"].get<long long>() < 0))
            throw ConfigError("seed: expected a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("model")) {
        check_model(j["model"], "model");
        c.model = j["model"];
    }
    if (j.contains("suite_models")) {
        if (!j["suite_models"].is_array() || j["suite_models"].empty()) throw ConfigError("suite_models: expected a non-empty array");
        c.suite_models.clear();
        for (std::size_t i = 0; i < j["suite_models"].size(); ++i) {
            check_model(j["suite_models"][i], "suite_models[" + std::to_string(i) + "]");
            c.suite_models.push_back(j["suite_models"][i]);
        }
    }
    if (j.contains("levels")) c.levels = integer(j["levels"], "levels", 1);
    if (j.contains("lattice")) {
        check_keys(j["lattice"], "lattice", {"r"});
        if (j["lattice"].contains("r")) c.lattice_r = positive(j["lattice"]["r"], "lattice.r");
    }
    if (j.contains("cubature")) {
        const auto& s = j["cubature"];
        check_keys(s, "cubature", {"omega", "a"});
        if (s.contains("omega")) c.cubature_omega = positive(s["omega"], "cubature.omega");
        if (s.contains("a")) c.cubature_a = positive(s["a"], "cubature.a");
    }
    if (j.contains("frame")) {
        const auto& s = j["frame"];
        check_keys(s, "frame", {"omega", "delta", "c", "parseval_a", "functions"});
        if (s.contains("omega")) c.frame.omega = positive(s["omega"], "frame.omega");
        if (s.contains("delta")) {
            c.frame.delta = positive(s["delta"], "frame.delta");
            if (c.frame.delta >= 1.0) throw ConfigError("frame.delta: must lie in (0, 1)");
        }
        if (s.contains("c")) c.frame.c = positive(s["c"], "frame.c");
        if (s.contains("parseval_a")) c.frame.parseval_a = positive(s["parseval_a"], "frame.parseval_a");
        if (s.contains("functions")) c.frame.functions = integer(s["functions"], "frame.functions", 1);
    }
    if (j.contains("kernel")) {
        const auto& s = j["kernel"];
        check_keys(s, "kernel", {"model", "level", "N", "t", "p"});
        if (s.contains("model")) {
            check_model(s["model"], "kernel.model");
            c.kernel.model = s["model"];
        }
        if (s.contains("level")) c.kernel.level = integer(s["level"], "kernel.level", 0);
        if (s.contains("N")) c.kernel.N = integer(s["N"], "kernel.N", 0);
        if (s.contains("t")) c.kernel.t = numbers(s["t"], "kernel.t");
        if (s.contains("p")) c.kernel.p = numbers(s["p"], "kernel.p");
    }
    if (j.contains("lp")) {
        check_keys(j["lp"], "lp", {"p"});
        if (j["lp"].contains("p")) c.lp_p = numbers(j["lp"]["p"], "lp.p");
    }
    for (double p : c.lp_p)
        if (p < 1.0) throw ConfigError("lp.p: exponents must be >= 1");
    for (double p : c.kernel.p)
        if (p < 1.0) throw ConfigError("kernel.p: exponents must be >= 1");
    if (j.contains("besov")) {
        const auto& s = j["besov"];
        check_keys(s, "besov", {"alpha", "p", "q", "family"});
        if (s.contains("alpha")) c.besov.alpha = positive(s["alpha"], "besov.alpha");
        if (s.contains("p")) c.besov.p = positive(s["p"], "besov.p");
        if (s.contains("q")) c.besov.q = positive(s["q"], "besov.q");
        if (s.contains("family")) c.besov.family = integer(s["family"], "besov.family", 2);
    }
    if (j.contains("line")) {
        const auto& s = j["line"];
        check_keys(s, "line", {"omega", "eps", "T", "seeds", "shannon_band", "shannon_levels", "functions", "cubature_band", "gamma", "jitter",
                               "cubature_frame"});
        if (s.contains("omega")) c.line.omega = positive(s["omega"], "line.omega");
        if (s.contains("eps")) c.line.eps = numbers(s["eps"], "line.eps");
        if (s.contains("T")) c.line.T = positive(s["T"], "line.T");
        if (s.contains("seeds")) c.line.seeds = integer(s["seeds"], "line.seeds", 1);
        if (s.contains("shannon_band")) c.line.shannon_band = positive(s["shannon_band"], "line.shannon_band");
        if (s.contains("shannon_levels")) c.line.shannon_levels = integer(s["shannon_levels"], "line.shannon_levels", 1);
        if (s.contains("functions")) c.line.functions = integer(s["functions"], "line.functions", 1);
        if (s.contains("cubature_band")) c.line.cubature_band = positive(s["cubature_band"], "line.cubature_band");
        if (s.contains("gamma")) c.line.gamma = positive(s["gamma"], "line.gamma");
        if (s.contains("jitter")) c.line.jitter = positive(s["jitter"], "line.jitter");
        if (s.contains("cubature_frame")) {
            if (!s["cubature_frame"].is_boolean()) throw ConfigError("line.cubature_frame: expected a boolean");
            c.line.cubature_frame = s["cubature_frame"].get<bool>();
        }
        for (double e : c.line.eps)
            if (e >= 1.0) throw ConfigError("line.eps: values must lie in (0, 1)");
        if (c.line.gamma >= 1.0) throw ConfigError("line.gamma: must lie in (0, 1)");
        if (c.line.jitter > 1.0) throw ConfigError("line.jitter: must lie in (0, 1]");
    }
    if (j.contains("tolerances")) {
        const auto& s = j["tolerances"];
        Tolerances& t = c.tol;
        const std::vector<std::pair<std::string, double*>> fields{
            {"partition", &t.partition},         {"moment", &t.moment},
            {"parseval", &t.parseval},           {"reconstruction", &t.reconstruction},
            {"upper_slack", &t.upper_slack},     {"lp_residual", &t.lp_residual},
            {"slope", &t.slope},                 {"envelope_spread", &t.envelope_spread},
            {"weight_ratio", &t.weight_ratio},   {"besov_spread", &t.besov_spread},
            {"besov_slope", &t.besov_slope},     {"homogeneity", &t.homogeneity},
            {"line_tight", &t.line_tight},       {"line_norm", &t.line_norm},
            {"line_integral", &t.line_integral}, {"line_weight_ratio", &t.line_weight_ratio}};
        std::set<std::string> names;
        for (const auto& f : fields) names.insert(f.first);
        check_keys(s, "tolerances", names);
        for (const auto& [name, ptr] : fields)
            if (s.contains(name)) *ptr = positive(s[name], "tolerances." + name);
    }
    c.hash = fnv1a_hex(j.dump());
    return c;
}

ModelPtr make_model(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ConfigError("model: kind must be a string");
    const std::string kind = j["kind"];
    if (kind == "circle") {
        check_keys(j, "circle model", {"kind", "max_degree", "quadrature_size"});
        if (!j.contains("max_degree")) throw ConfigError("circle model: max_degree is required");
        CircleConfig cfg;
        cfg.max_degree = integer(j["max_degree"], "circle model.max_degree", 0);
        cfg.quadrature_size = j.contains("quadrature_size") ? integer(j["quadrature_size"], "circle model.quadrature_size", 1)
                                                            : 4 * cfg.max_degree + 1;
        return make_circle_model(cfg);
    }
    if (kind == "sphere2") {
        check_keys(j, "sphere model", {"kind", "max_degree", "gauss_latitudes", "longitudes"});
        if (!j.contains("max_degree")) throw ConfigError("sphere model: max_degree is required");
        SphereConfig cfg = minimal_sphere_config(integer(j["max_degree"], "sphere model.max_degree", 0));
        if (j.contains("gauss_latitudes")) cfg.gauss_latitudes = integer(j["gauss_latitudes"], "sphere model.gauss_latitudes", 1);
        if (j.contains("longitudes")) cfg.longitudes = integer(j["longitudes"], "sphere model.longitudes", 1);
        return make_sphere_model(cfg);
    }
    throw ConfigError("model: unknown kind '" + kind + "' (expected circle or sphere2)");
}

ModelPtr make_fine_model(const SpectralModel& model) {
    const int d = 2 * model.max_degree();
    if (model.kind() == ManifoldKind::circle) return make_circle_model({d, 32 * std::max(d, 1)});
    return make_sphere_model({d, 6 * d + 1, 12 * d + 1});
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace frames::cli

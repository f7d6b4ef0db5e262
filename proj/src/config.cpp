#include "nncalc/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "nncalc/expr.hpp"

namespace nncalc {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double numeric_value(const std::string& value, const std::string& key, int line) {
    try {
        return eval_constant_expression(value);
    } catch (const Error& e) {
        throw ConfigError("line " + std::to_string(line) + ": bad value for '" + key +
                          "': " + e.what());
    }
}

int integer_value(const std::string& value, const std::string& key, int line) {
    double v = numeric_value(value, key, line);
    double r = std::round(v);
    if (std::fabs(v - r) > 1e-9 || std::fabs(r) > 1e9)
        throw ConfigError("line " + std::to_string(line) + ": '" + key +
                          "' must be an integer");
    return static_cast<int>(r);
}

bool bool_value(const std::string& value, const std::string& key, int line) {
    if (value == "true")
        return true;
    if (value == "false")
        return false;
    throw ConfigError("line " + std::to_string(line) + ": '" + key +
                      "' must be true or false");
}

FamilyConfig& family_slot(std::vector<FamilyConfig>& families, const std::string& label) {
    for (auto& f : families)
        if (f.label == label)
            return f;
    families.push_back(FamilyConfig{label, "", "", "1"});
    return families.back();
}

} // namespace

double eval_constant_expression(const std::string& source) {
    expr::Expr e = expr::Expr::parse(source, std::initializer_list<std::string>{});
    return e.evaluate(std::span<const double>{});
}

void ProblemConfig::validate() const {
    if (trim(lagrangian).empty())
        throw ConfigError("config: missing lagrangian");
    if (!(a > 0.0) || !(b > 0.0) || !(a < b))
        throw ConfigError("config: interval requires 0 < a < b");
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw ConfigError("config: boundary values must be positive");
    if (numeric.grid_n < 5)
        throw ConfigError("config: grid_n must be at least 5");
    if (!(numeric.tol > 0.0))
        throw ConfigError("config: tol must be positive");
    if (numeric.max_iter < 1)
        throw ConfigError("config: max_iter must be at least 1");
    if (!(numeric.fd_step > 0.0) || !(numeric.s_step > 0.0))
        throw ConfigError("config: fd_step and s_step must be positive");
    if (!(numeric.invariance_tol > 0.0))
        throw ConfigError("config: invariance_tol must be positive");
    std::set<std::string> labels;
    for (const auto& f : families) {
        if (f.label.empty())
            throw ConfigError("config: family with empty label");
        if (!labels.insert(f.label).second)
            throw ConfigError("config: duplicate family label '" + f.label + "'");
        if (trim(f.T).empty() || trim(f.X).empty())
            throw ConfigError("config: family '" + f.label + "' must define T and X");
    }
}

ProblemConfig load_problem_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");

    ProblemConfig cfg;
    cfg.name = std::filesystem::path(path).stem().string();

    std::set<std::string> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#')
            continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");

        if (key.rfind("family.", 0) == 0) {
            std::string rest = key.substr(7);
            std::size_t dot = rest.rfind('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 >= rest.size())
                throw ConfigError("line " + std::to_string(line) +
                                  ": family keys look like family.<label>.<T|X|gauge>");
            std::string label = rest.substr(0, dot);
            std::string field = rest.substr(dot + 1);
            FamilyConfig& fam = family_slot(cfg.families, label);
            if (field == "T")
                fam.T = value;
            else if (field == "X")
                fam.X = value;
            else if (field == "gauge")
                fam.gauge = value;
            else
                throw ConfigError("line " + std::to_string(line) + ": unknown family field '" +
                                  field + "'");
            continue;
        }

        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");

        if (key == "lagrangian")
            cfg.lagrangian = value;
        else if (key == "a")
            cfg.a = numeric_value(value, key, line);
        else if (key == "b")
            cfg.b = numeric_value(value, key, line);
        else if (key == "alpha")
            cfg.alpha = numeric_value(value, key, line);
        else if (key == "beta")
            cfg.beta = numeric_value(value, key, line);
        else if (key == "autonomous")
            cfg.autonomous = bool_value(value, key, line);
        else if (key == "x_free")
            cfg.x_free = bool_value(value, key, line);
        else if (key == "grid_n")
            cfg.numeric.grid_n = integer_value(value, key, line);
        else if (key == "max_iter")
            cfg.numeric.max_iter = integer_value(value, key, line);
        else if (key == "tol")
            cfg.numeric.tol = numeric_value(value, key, line);
        else if (key == "fd_step")
            cfg.numeric.fd_step = numeric_value(value, key, line);
        else if (key == "s_step")
            cfg.numeric.s_step = numeric_value(value, key, line);
        else if (key == "invariance_tol")
            cfg.numeric.invariance_tol = numeric_value(value, key, line);
        else
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }

    cfg.validate();
    return cfg;
}

const std::vector<ProblemConfig>& builtin_catalog() {
    static const std::vector<ProblemConfig> catalog = [] {
        const double e1 = std::exp(1.0);
        std::vector<ProblemConfig> v;

        ProblemConfig power;
        power.name = "power";
        power.lagrangian = "v ~* v";
        power.a = 1.0;
        power.b = e1;
        power.alpha = 1.0;
        power.beta = std::exp(2.0);
        power.autonomous = true;
        power.x_free = true;
        power.families = {
            {"time-shift", "t ~+ s", "x", "1"},
            {"space-shift", "t", "x ~+ s", "1"},
            // x gets tilted by t^(ln s); the classical square of x is the
            // exact gauge term that restores invariance
            {"gauged-tilt", "t", "x ~+ (s ~* t)", "x ~+ x"},
            {"tilt-no-gauge", "t", "x ~+ (s ~* t)", "1"},
            // collapses every curve to 1 at s = 1, so it is rejected by the
            // identity check rather than by the invariance defect
            {"space-scale", "t", "x ~* s", "1"},
        };
        v.push_back(power);

        ProblemConfig energy;
        energy.name = "autonomous-energy";
        energy.lagrangian = "(v ~* v) ~+ x";
        energy.a = 1.0;
        energy.b = e1;
        energy.alpha = 1.0;
        energy.beta = e1;
        energy.autonomous = true;
        energy.x_free = false;
        energy.families = {{"time-shift", "t ~+ s", "x", "1"}};
        v.push_back(energy);

        ProblemConfig momentum;
        momentum.name = "x-free-momentum";
        momentum.lagrangian = "(t ~* v) ~+ (v ~* v)";
        momentum.a = 1.0;
        momentum.b = e1;
        momentum.alpha = 1.0;
        momentum.beta = e1;
        momentum.autonomous = false;
        momentum.x_free = true;
        momentum.families = {{"space-shift", "t", "x ~+ s", "1"}};
        v.push_back(momentum);

        ProblemConfig coupled;
        coupled.name = "coupled";
        coupled.lagrangian = "(v ~* v) ~+ (x ~* x)";
        coupled.a = 1.0;
        coupled.b = e1;
        coupled.alpha = 1.0;
        coupled.beta = e1;
        coupled.autonomous = true;
        coupled.x_free = false;
        coupled.families = {
            {"time-shift", "t ~+ s", "x", "1"},
            // not a symmetry here: the Lagrangian depends on x
            {"space-shift", "t", "x ~+ s", "1"},
        };
        v.push_back(coupled);

        return v;
    }();
    return catalog;
}

const ProblemConfig* find_builtin(std::string_view name) {
    for (const auto& cfg : builtin_catalog())
        if (cfg.name == name)
            return &cfg;
    return nullptr;
}

VariationalProblem make_problem(const ProblemConfig& cfg) {
    cfg.validate();
    expr::Expr L = expr::Expr::parse(cfg.lagrangian, {"t", "x", "v"});
    ProblemFlags flags;
    flags.autonomous = cfg.autonomous.value_or(!L.references("t"));
    flags.x_free = cfg.x_free.value_or(!L.references("x"));
    TernaryField field{[L](double t, double x, double v) {
        double args[3] = {t, x, v};
        return L.evaluate(std::span<const double>(args));
    }};
    return VariationalProblem(std::move(field), PosReal(cfg.a), PosReal(cfg.b),
                              PosReal(cfg.alpha), PosReal(cfg.beta), flags);
}

TransformationFamily make_family(const FamilyConfig& fam) {
    return TransformationFamily::from_strings(fam.label, fam.T, fam.X, fam.gauge);
}

} // namespace nncalc

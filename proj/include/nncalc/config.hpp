#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nncalc/noether.hpp"
#include "nncalc/variational.hpp"

namespace nncalc {

struct FamilyConfig {
    std::string label;
    std::string T;
    std::string X;
    std::string gauge = "1";
};

struct NumericConfig {
    int grid_n = 201;
    double tol = 1e-8;
    int max_iter = 50;
    double fd_step = kDefaultFdStep;
    double s_step = kDefaultSStep;
    double invariance_tol = kDefaultInvarianceTol;
};

// Full description of a run: problem data as expression text plus numeric
// parameters and an optional list of transformation families.
struct ProblemConfig {
    std::string name;
    std::string lagrangian;
    double a = 1.0;
    double b = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    std::optional<bool> autonomous; // unset: derived from the expression
    std::optional<bool> x_free;
    std::vector<FamilyConfig> families;
    NumericConfig numeric;

    void validate() const; // throws ConfigError
};

// Evaluates a variable-free expression ("e ^ 2", "1e-4", ...).
double eval_constant_expression(const std::string& source);

// Loads the line-oriented `key = value` format documented in the README.
ProblemConfig load_problem_config(const std::string& path);

// Built-in quick-start problems: power, autonomous-energy, x-free-momentum,
// coupled, each with its stock families.
const std::vector<ProblemConfig>& builtin_catalog();
const ProblemConfig* find_builtin(std::string_view name);

// Parses the Lagrangian and constructs the problem; flags left unset in the
// config are derived syntactically and then spot-checked numerically.
VariationalProblem make_problem(const ProblemConfig& cfg);

TransformationFamily make_family(const FamilyConfig& fam);

} // namespace nncalc

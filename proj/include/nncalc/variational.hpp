#pragma once

#include <vector>

#include "nncalc/analysis.hpp"
#include "nncalc/arith.hpp"

namespace nncalc {

struct ProblemFlags {
    bool autonomous = false; // Lagrangian does not depend on t
    bool x_free = false;     // Lagrangian does not depend on x
};

// Fixed-endpoint problem: minimize the multiplicative integral of
// L(t, x(t), x~(t)) over positive C^2 curves x on [a, b] with
// x(a) = alpha, x(b) = beta.
class VariationalProblem {
public:
    // Declared flags are spot-checked against the evaluator at a fixed set
    // of pseudo-random points; a contradiction throws InvariantError.
    VariationalProblem(TernaryField lagrangian, PosReal a, PosReal b,
                       PosReal alpha, PosReal beta, ProblemFlags flags = {});

    const TernaryField& lagrangian() const { return lagrangian_; }
    PosReal a() const { return a_; }
    PosReal b() const { return b_; }
    PosReal alpha() const { return alpha_; }
    PosReal beta() const { return beta_; }
    ProblemFlags flags() const { return flags_; }

    double log_a() const { return log_a_; }
    double log_b() const { return log_b_; }
    double log_alpha() const { return log_alpha_; }
    double log_beta() const { return log_beta_; }

    // Conjugated Lagrangian ell(tau, xi, nu) = ln L(e^tau, e^xi, e^nu) and
    // its log-space partials (central differences with spacing `step`).
    double log_lagrangian(double tau, double xi, double nu) const;
    double log_partial_t(double tau, double xi, double nu, double step) const;
    double log_partial_x(double tau, double xi, double nu, double step) const;
    double log_partial_v(double tau, double xi, double nu, double step) const;

private:
    TernaryField lagrangian_;
    PosReal a_, b_, alpha_, beta_;
    ProblemFlags flags_;
    double log_a_, log_b_, log_alpha_, log_beta_;
};

// Positive sampled curve on a log-uniform grid. The stored t, x, v doubles
// are the canonical data (they are what CSV output carries); log views are
// derived from them. Velocity samples are fourth-order finite-difference
// estimates of the bigeometric derivative, which agree with the centered
// second-order difference of ln x to discretization order.
class Trajectory {
public:
    // Velocities derived from the values.
    static Trajectory from_values(std::vector<double> t, std::vector<double> x);

    // Explicit velocity samples; validated for consistency with the values.
    static Trajectory from_samples(std::vector<double> t, std::vector<double> x,
                                   std::vector<double> v);

    std::size_t size() const { return t_.size(); }
    double tau_step() const { return h_; }

    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& v() const { return v_; }

    const std::vector<double>& log_t() const { return log_t_; }
    const std::vector<double>& log_x() const { return log_x_; }
    const std::vector<double>& log_v() const { return log_v_; }

    PosReal time(std::size_t i) const { return PosReal(t_[i]); }
    PosReal value(std::size_t i) const { return PosReal(x_[i]); }
    PosReal nn_velocity(std::size_t i) const { return PosReal(v_[i]); }

    // Endpoint values must match the boundary data within 1e-10 in log space.
    void check_boundary(const VariationalProblem& p) const;

private:
    Trajectory(std::vector<double> t, std::vector<double> x, std::vector<double> v);

    std::vector<double> t_, x_, v_;
    std::vector<double> log_t_, log_x_, log_v_;
    double h_ = 0.0;
};

struct SolveOptions {
    double tol = 1e-8;      // sup-norm target for the discrete residual
    int max_iter = 50;      // Newton iterations
    double fd_step = kDefaultFdStep;
};

struct SolveStats {
    int iterations = 0;
    double el_residual_sup = 0.0;
};

// Solves the two-point boundary value problem for the extremal equation by
// conjugating to (tau, xi) coordinates, discretizing the classical
// stationarity system with central differences on the log-uniform grid
// (midpoint fluxes for the momentum term), and running damped Newton with a
// colored finite-difference tridiagonal Jacobian from the straight-line
// initial guess.
Trajectory solve_extremal(const VariationalProblem& p, int n,
                          const SolveOptions& opts = {}, SolveStats* stats = nullptr);

// Log-space extremal-equation residual per interior node; identically the
// quantity the solver drives to zero, recomputed from the trajectory values.
std::vector<double> el_residual(const VariationalProblem& p, const Trajectory& traj,
                                double fd_step = kDefaultFdStep);

// Log-space residual of the rate identity
//   dL/dt-partial = d/dt { L ominus momentum odot velocity }
// per interior node, evaluated along the trajectory.
std::vector<double> dbr_residual(const VariationalProblem& p, const Trajectory& traj,
                                 double fd_step = kDefaultFdStep);

// Per-node energy-style trace L ominus momentum odot velocity; requires an
// autonomous problem. Constant along extremals.
std::vector<PosReal> erdmann_trace(const VariationalProblem& p, const Trajectory& traj,
                                   double fd_step = kDefaultFdStep);

// Velocity gradient dL/dv-partial at a point.
PosReal momentum(const VariationalProblem& p, PosReal t, PosReal x, PosReal v,
                 double fd_step = kDefaultFdStep);

// H(t, x, v, p) = L(t, x, v) ominus p odot v.
PosReal hamiltonian_value(const VariationalProblem& p, PosReal t, PosReal x, PosReal v,
                          PosReal pm);

} // namespace nncalc

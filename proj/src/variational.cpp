#include "nncalc/variational.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <string>

namespace nncalc {

namespace {

constexpr double kBoundaryTol = 1e-10;

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::fabs(x));
    return m;
}

// Fourth-order finite-difference estimate of d(ln x)/d(tau) on a uniform
// grid; five-point one-sided stencils at the edge nodes.
std::vector<double> log_velocity_samples(const std::vector<double>& xi, double h) {
    const std::size_t n = xi.size();
    std::vector<double> nu(n);
    for (std::size_t i = 2; i + 2 < n; ++i)
        nu[i] = (-xi[i + 2] + 8.0 * xi[i + 1] - 8.0 * xi[i - 1] + xi[i - 2]) / (12.0 * h);
    nu[0] = (-25.0 * xi[0] + 48.0 * xi[1] - 36.0 * xi[2] + 16.0 * xi[3] - 3.0 * xi[4]) /
            (12.0 * h);
    nu[1] = (-3.0 * xi[0] - 10.0 * xi[1] + 18.0 * xi[2] - 6.0 * xi[3] + xi[4]) / (12.0 * h);
    nu[n - 1] = (25.0 * xi[n - 1] - 48.0 * xi[n - 2] + 36.0 * xi[n - 3] -
                 16.0 * xi[n - 4] + 3.0 * xi[n - 5]) /
                (12.0 * h);
    nu[n - 2] = (3.0 * xi[n - 1] + 10.0 * xi[n - 2] - 18.0 * xi[n - 3] + 6.0 * xi[n - 4] -
                 xi[n - 5]) /
                (12.0 * h);
    return nu;
}

// Second-order conjugated stationarity residual at the interior nodes:
//   r_i = [p(i+1/2) - p(i-1/2)] / h - ell_xi(tau_i, xi_i, D0 xi_i)
// with midpoint momentum fluxes p(i+1/2) = ell_nu evaluated at the cell
// midpoint. This is the quantity the solver drives to zero and the one
// el_residual reports.
void discrete_el_residual(const VariationalProblem& p, std::span<const double> tau,
                          double h, std::span<const double> xi, double fd,
                          std::span<double> out) {
    const std::size_t n = xi.size();
    std::vector<double> flux(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double tm = 0.5 * (tau[i] + tau[i + 1]);
        double xm = 0.5 * (xi[i] + xi[i + 1]);
        double nm = (xi[i + 1] - xi[i]) / h;
        flux[i] = p.log_partial_v(tm, xm, nm, fd);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double nu = (xi[i + 1] - xi[i - 1]) / (2.0 * h);
        out[i - 1] = (flux[i] - flux[i - 1]) / h - p.log_partial_x(tau[i], xi[i], nu, fd);
    }
}

// Tridiagonal solve (Thomas). Throws DegenerateError on a vanishing pivot.
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& dia,
                       std::vector<double>& sup, std::vector<double>& rhs) {
    const std::size_t m = dia.size();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (std::fabs(dia[i]) < 1e-300)
            throw DegenerateError("singular Jacobian: the problem is degenerate");
        double w = sub[i + 1] / dia[i];
        dia[i + 1] -= w * sup[i];
        rhs[i + 1] -= w * rhs[i];
    }
    if (std::fabs(dia[m - 1]) < 1e-300)
        throw DegenerateError("singular Jacobian: the problem is degenerate");
    rhs[m - 1] /= dia[m - 1];
    for (std::size_t i = m - 1; i-- > 0;)
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / dia[i];
}

void ensure_on_problem(const VariationalProblem& p, const Trajectory& traj) {
    if (std::fabs(traj.log_t().front() - p.log_a()) > 1e-9 ||
        std::fabs(traj.log_t().back() - p.log_b()) > 1e-9)
        throw PreconditionError("trajectory grid does not cover the problem interval");
    traj.check_boundary(p);
}

// Per-node log traces along a trajectory: Lagrangian value, momentum, and
// the energy-style combination ell - P * nu.
struct LogTraces {
    std::vector<double> ell, P, lnH;
};

LogTraces traces_along(const VariationalProblem& p, const Trajectory& traj, double fd) {
    const std::size_t n = traj.size();
    LogTraces tr{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        double tau = traj.log_t()[j], xi = traj.log_x()[j], nu = traj.log_v()[j];
        tr.ell[j] = p.log_lagrangian(tau, xi, nu);
        tr.P[j] = p.log_partial_v(tau, xi, nu, fd);
        tr.lnH[j] = tr.ell[j] - tr.P[j] * nu;
    }
    return tr;
}

} // namespace

VariationalProblem::VariationalProblem(TernaryField lagrangian, PosReal a, PosReal b,
                                       PosReal alpha, PosReal beta, ProblemFlags flags)
    : lagrangian_(std::move(lagrangian)), a_(a), b_(b), alpha_(alpha), beta_(beta),
      flags_(flags), log_a_(conjugate(a)), log_b_(conjugate(b)),
      log_alpha_(conjugate(alpha)), log_beta_(conjugate(beta)) {
    if (!(a_.value() < b_.value()))
        throw InvariantError("problem interval requires a < b");

    // spot-check the declared structure flags
    std::mt19937 rng(2026u);
    std::uniform_real_distribution<double> in_tau(log_a_, log_b_);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int k = 0; k < 8; ++k) {
        double tau1 = in_tau(rng), tau2 = in_tau(rng);
        double xi1 = unit(rng), xi2 = unit(rng);
        double nu = unit(rng);
        if (flags_.autonomous &&
            std::fabs(log_lagrangian(tau1, xi1, nu) - log_lagrangian(tau2, xi1, nu)) > 1e-10)
            throw InvariantError("problem declared autonomous but the Lagrangian varies with t");
        if (flags_.x_free &&
            std::fabs(log_lagrangian(tau1, xi1, nu) - log_lagrangian(tau1, xi2, nu)) > 1e-10)
            throw InvariantError("problem declared x-free but the Lagrangian varies with x");
    }
}

double VariationalProblem::log_lagrangian(double tau, double xi, double nu) const {
    return log_field_value(lagrangian_, tau, xi, nu);
}

double VariationalProblem::log_partial_t(double tau, double xi, double nu, double step) const {
    return log_nn_partial(lagrangian_, Coord::T, tau, xi, nu, step);
}

double VariationalProblem::log_partial_x(double tau, double xi, double nu, double step) const {
    return log_nn_partial(lagrangian_, Coord::X, tau, xi, nu, step);
}

double VariationalProblem::log_partial_v(double tau, double xi, double nu, double step) const {
    return log_nn_partial(lagrangian_, Coord::V, tau, xi, nu, step);
}

Trajectory::Trajectory(std::vector<double> t, std::vector<double> x, std::vector<double> v)
    : t_(std::move(t)), x_(std::move(x)), v_(std::move(v)) {
    const std::size_t n = t_.size();
    if (n < 5)
        throw PreconditionError("trajectory needs at least 5 nodes");
    if (x_.size() != n || v_.size() != n)
        throw PreconditionError("trajectory arrays must have equal length");
    log_t_.resize(n);
    log_x_.resize(n);
    log_v_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(t_[i] > 0.0) || !std::isfinite(t_[i]) || !(x_[i] > 0.0) ||
            !std::isfinite(x_[i]) || !(v_[i] > 0.0) || !std::isfinite(v_[i]))
            throw InvariantError("trajectory samples must be strictly positive and finite");
        log_t_[i] = std::log(t_[i]);
        log_x_[i] = std::log(x_[i]);
        log_v_[i] = std::log(v_[i]);
    }
    h_ = (log_t_.back() - log_t_.front()) / static_cast<double>(n - 1);
    if (!(h_ > 0.0))
        throw InvariantError("trajectory grid must be increasing");
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs(log_t_[i] - (log_t_.front() + static_cast<double>(i) * h_)) >
            1e-9 * std::max(1.0, std::fabs(log_t_[i])))
            throw InvariantError("trajectory grid must be uniform in ln t");
}

Trajectory Trajectory::from_values(std::vector<double> t, std::vector<double> x) {
    const std::size_t n = t.size();
    if (n < 5)
        throw PreconditionError("trajectory needs at least 5 nodes");
    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !std::isfinite(x[i]))
            throw InvariantError("trajectory values must be strictly positive and finite");
        xi[i] = std::log(x[i]);
    }
    double h = (std::log(t.back()) - std::log(t.front())) / static_cast<double>(n - 1);
    std::vector<double> nu = log_velocity_samples(xi, h);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::exp(nu[i]);
    return Trajectory(std::move(t), std::move(x), std::move(v));
}

Trajectory Trajectory::from_samples(std::vector<double> t, std::vector<double> x,
                                    std::vector<double> v) {
    Trajectory traj(std::move(t), std::move(x), std::move(v));
    // velocities must agree with the centered difference of ln x to
    // discretization order; the bound is scaled by a third-difference
    // estimate of the data's own curvature
    const std::size_t n = traj.size();
    double h = traj.tau_step();
    double m3 = 0.0;
    for (std::size_t i = 0; i + 3 < n; ++i)
        m3 = std::max(m3, std::fabs(traj.log_x_[i + 3] - 3.0 * traj.log_x_[i + 2] +
                                    3.0 * traj.log_x_[i + 1] - traj.log_x_[i]) /
                              (h * h * h));
    double tol = std::max(1e-6, 2.0 * h * h * (1.0 + m3));
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double d0 = (traj.log_x_[i + 1] - traj.log_x_[i - 1]) / (2.0 * h);
        if (std::fabs(traj.log_v_[i] - d0) > tol)
            throw InvariantError(
                "trajectory velocities are inconsistent with the sampled values");
    }
    return traj;
}

void Trajectory::check_boundary(const VariationalProblem& p) const {
    if (std::fabs(log_x_.front() - p.log_alpha()) > kBoundaryTol ||
        std::fabs(log_x_.back() - p.log_beta()) > kBoundaryTol)
        throw InvariantError("trajectory endpoints do not match the boundary values");
}

Trajectory solve_extremal(const VariationalProblem& p, int n, const SolveOptions& opts,
                          SolveStats* stats) {
    if (n < 5)
        throw PreconditionError("solve_extremal: grid needs at least 5 nodes");
    if (!(opts.tol > 0.0))
        throw PreconditionError("solve_extremal: tolerance must be positive");
    if (opts.max_iter < 1)
        throw PreconditionError("solve_extremal: max_iter must be at least 1");

    const double tau_a = p.log_a(), tau_b = p.log_b();
    const double h = (tau_b - tau_a) / static_cast<double>(n - 1);
    std::vector<double> tau(n);
    for (int i = 0; i < n; ++i)
        tau[i] = tau_a + i * h;
    tau[n - 1] = tau_b;

    // straight line in conjugated coordinates between the boundary values
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i)
        xi[i] = p.log_alpha() +
                (p.log_beta() - p.log_alpha()) * static_cast<double>(i) /
                    static_cast<double>(n - 1);

    const std::size_t m = static_cast<std::size_t>(n) - 2;
    std::vector<double> r(m), r_try(m), r_pert(m);
    auto eval_residual = [&](const std::vector<double>& state, std::vector<double>& out) {
        discrete_el_residual(p, tau, h, state, opts.fd_step, out);
    };

    // converge below the requested tolerance so that the residual survives
    // the exp/ln round trip through the stored trajectory values
    const double target = 0.5 * opts.tol;

    eval_residual(xi, r);
    double rn = sup_norm(r);
    int used_iters = 0;

    while (rn > target) {
        if (used_iters >= opts.max_iter)
            throw ConvergenceError("solve_extremal: no convergence after " +
                                       std::to_string(opts.max_iter) + " iterations",
                                   rn, used_iters);
        ++used_iters;

        // tridiagonal Jacobian by forward differences, three colors
        std::vector<double> sub(m, 0.0), dia(m, 0.0), sup(m, 0.0), delta(m);
        std::vector<double> xi_pert = xi;
        for (int color = 0; color < 3; ++color) {
            for (std::size_t u = 0; u < m; ++u)
                if (u % 3 == static_cast<std::size_t>(color)) {
                    delta[u] = 1e-7 * (1.0 + std::fabs(xi[u + 1]));
                    xi_pert[u + 1] = xi[u + 1] + delta[u];
                }
            eval_residual(xi_pert, r_pert);
            for (std::size_t u = 0; u < m; ++u)
                if (u % 3 == static_cast<std::size_t>(color)) {
                    if (u > 0)
                        sup[u - 1] = (r_pert[u - 1] - r[u - 1]) / delta[u];
                    dia[u] = (r_pert[u] - r[u]) / delta[u];
                    if (u + 1 < m)
                        sub[u + 1] = (r_pert[u + 1] - r[u + 1]) / delta[u];
                    xi_pert[u + 1] = xi[u + 1];
                }
        }

        std::vector<double> step(m);
        for (std::size_t u = 0; u < m; ++u)
            step[u] = -r[u];
        solve_tridiagonal(sub, dia, sup, step);

        // step halving until the residual norm decreases
        double lambda = 1.0;
        bool accepted = false;
        std::vector<double> xi_try = xi;
        for (int k = 0; k <= 30; ++k) {
            for (std::size_t u = 0; u < m; ++u)
                xi_try[u + 1] = xi[u + 1] + lambda * step[u];
            eval_residual(xi_try, r_try);
            double rn_try = sup_norm(r_try);
            if (rn_try < rn || rn_try <= target) {
                xi.swap(xi_try);
                r.swap(r_try);
                rn = rn_try;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted)
            throw ConvergenceError("solve_extremal: damped step failed to reduce the residual",
                                   rn, used_iters);
    }

    if (stats) {
        stats->iterations = used_iters;
        stats->el_residual_sup = rn;
    }

    std::vector<double> nu = log_velocity_samples(xi, h);
    std::vector<double> t(n), x(n), v(n);
    for (int i = 0; i < n; ++i) {
        t[i] = std::exp(tau[i]);
        x[i] = std::exp(xi[i]);
        v[i] = std::exp(nu[i]);
    }
    return Trajectory::from_samples(std::move(t), std::move(x), std::move(v));
}

std::vector<double> el_residual(const VariationalProblem& p, const Trajectory& traj,
                                double fd_step) {
    ensure_on_problem(p, traj);
    std::vector<double> out(traj.size() - 2);
    discrete_el_residual(p, traj.log_t(), traj.tau_step(), traj.log_x(), fd_step, out);
    return out;
}

std::vector<double> dbr_residual(const VariationalProblem& p, const Trajectory& traj,
                                 double fd_step) {
    ensure_on_problem(p, traj);
    const std::size_t n = traj.size();
    const double h = traj.tau_step();
    LogTraces tr = traces_along(p, traj, fd_step);
    std::vector<double> out(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double A = p.log_partial_t(traj.log_t()[i], traj.log_x()[i], traj.log_v()[i], fd_step);
        out[i - 1] = A - (tr.lnH[i + 1] - tr.lnH[i - 1]) / (2.0 * h);
    }
    return out;
}

std::vector<PosReal> erdmann_trace(const VariationalProblem& p, const Trajectory& traj,
                                   double fd_step) {
    if (!p.flags().autonomous)
        throw PreconditionError("erdmann_trace requires an autonomous problem");
    ensure_on_problem(p, traj);
    LogTraces tr = traces_along(p, traj, fd_step);
    std::vector<PosReal> out;
    out.reserve(traj.size());
    for (double lnH : tr.lnH)
        out.push_back(unconjugate(lnH));
    return out;
}

PosReal momentum(const VariationalProblem& p, PosReal t, PosReal x, PosReal v,
                 double fd_step) {
    return nn_partial(p.lagrangian(), Coord::V, t, x, v, fd_step);
}

PosReal hamiltonian_value(const VariationalProblem& p, PosReal t, PosReal x, PosReal v,
                          PosReal pm) {
    double ell = p.log_lagrangian(conjugate(t), conjugate(x), conjugate(v));
    return unconjugate(ell - conjugate(pm) * conjugate(v));
}

} // namespace nncalc

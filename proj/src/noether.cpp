#include "nncalc/noether.hpp"

#include <cmath>
#include <random>

namespace nncalc {

namespace {

long double checked_log(long double y, const char* what) {
    if (!std::isfinite(y) || y <= 0.0L)
        throw InvariantError(std::string(what) + " produced a non-positive or non-finite value");
    return std::log(y);
}

std::vector<double> central_diff(const std::vector<double>& q, double h) {
    std::vector<double> out(q.size() - 2);
    for (std::size_t i = 1; i + 1 < q.size(); ++i)
        out[i - 1] = (q[i + 1] - q[i - 1]) / (2.0 * h);
    return out;
}

// Per-node quantities entering the conserved-quantity expression and the
// identity checks, all in log space.
struct FamilyTraces {
    std::vector<double> dT, dX, phi;       // s-derivatives at s = 1, gauge
    std::vector<double> ell, P, nu, lnH;   // Lagrangian data along the trajectory
    std::vector<double> A, B;              // t- and x-partials of ln L
};

FamilyTraces family_traces(const VariationalProblem& p, const Trajectory& traj,
                           const TransformationFamily& fam, double s_step, double fd_step,
                           bool with_partials) {
    const std::size_t n = traj.size();
    FamilyTraces tr;
    tr.dT.resize(n);
    tr.dX.resize(n);
    tr.phi.resize(n);
    tr.ell.resize(n);
    tr.P.resize(n);
    tr.nu.resize(n);
    tr.lnH.resize(n);
    if (with_partials) {
        tr.A.resize(n);
        tr.B.resize(n);
    }
    const double s_hi = std::exp(s_step), s_lo = std::exp(-s_step);
    for (std::size_t j = 0; j < n; ++j) {
        double t = traj.t()[j], x = traj.x()[j], v = traj.v()[j];
        double tau = traj.log_t()[j], xi = traj.log_x()[j], nu = traj.log_v()[j];
        tr.dT[j] = (fam.log_T(t, x, v, s_hi) - fam.log_T(t, x, v, s_lo)) / (2.0 * s_step);
        tr.dX[j] = (fam.log_X(t, x, v, s_hi) - fam.log_X(t, x, v, s_lo)) / (2.0 * s_step);
        tr.phi[j] = fam.log_gauge(t, x, v);
        tr.ell[j] = p.log_lagrangian(tau, xi, nu);
        tr.P[j] = p.log_partial_v(tau, xi, nu, fd_step);
        tr.nu[j] = nu;
        tr.lnH[j] = tr.ell[j] - tr.P[j] * nu;
        if (with_partials) {
            tr.A[j] = p.log_partial_t(tau, xi, nu, fd_step);
            tr.B[j] = p.log_partial_x(tau, xi, nu, fd_step);
        }
    }
    return tr;
}

} // namespace

TransformationFamily TransformationFamily::from_strings(const std::string& label,
                                                        const std::string& T_source,
                                                        const std::string& X_source,
                                                        const std::string& gauge_source) {
    TransformationFamily fam;
    fam.label = label;
    fam.T = expr::Expr::parse(T_source, {"t", "x", "v", "s"});
    fam.X = expr::Expr::parse(X_source, {"t", "x", "v", "s"});
    fam.gauge = expr::Expr::parse(gauge_source, {"t", "x", "v"});
    return fam;
}

double TransformationFamily::log_T(double t, double x, double v, double s) const {
    double args[4] = {t, x, v, s};
    return checked_log(T.evaluate(std::span<const double>(args)), "transformation T");
}

double TransformationFamily::log_X(double t, double x, double v, double s) const {
    double args[4] = {t, x, v, s};
    return checked_log(X.evaluate(std::span<const double>(args)), "transformation X");
}

double TransformationFamily::log_gauge(double t, double x, double v) const {
    double args[3] = {t, x, v};
    return checked_log(gauge.evaluate(std::span<const double>(args)), "gauge term");
}

double identity_defect(const TransformationFamily& fam, int samples) {
    std::mt19937 rng(7771u);
    std::uniform_real_distribution<double> logval(-2.0, 2.0);
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        double t = std::exp(logval(rng));
        double x = std::exp(logval(rng));
        double v = std::exp(logval(rng));
        worst = std::max(worst, std::fabs(fam.log_T(t, x, v, 1.0) - std::log(t)));
        worst = std::max(worst, std::fabs(fam.log_X(t, x, v, 1.0) - std::log(x)));
    }
    return worst;
}

std::vector<ScalarCurve> default_probes(const VariationalProblem& p) {
    const double g = std::sqrt(p.a().value() * p.b().value());
    std::vector<ScalarCurve> probes;
    for (double k : {-1.0, -0.5, 0.5, 1.0, 2.0})
        probes.push_back(ScalarCurve{[g, k](double t) { return std::pow(t / g, k); }});
    return probes;
}

double invariance_defect(const VariationalProblem& p, const TransformationFamily& fam,
                         const std::vector<ScalarCurve>& probes, double s_step,
                         double fd_step, int samples_per_probe) {
    if (!(s_step > 0.0) || !(fd_step > 0.0))
        throw PreconditionError("invariance_defect: steps must be positive");
    if (probes.empty() || samples_per_probe < 1)
        throw PreconditionError("invariance_defect: needs at least one probe and sample");

    const double tau_a = p.log_a(), tau_b = p.log_b();
    double defect = 0.0;

    for (const ScalarCurve& probe : probes) {
        auto value_at = [&](double tau) { return std::exp(log_curve_value(probe, tau)); };
        auto velocity_at = [&](double tau) {
            return std::exp(log_nn_derivative(probe, tau, fd_step));
        };
        auto gauge_at = [&](double tau) {
            return fam.log_gauge(std::exp(tau), value_at(tau), velocity_at(tau));
        };
        auto logT_at = [&](double tau, double s) {
            return fam.log_T(std::exp(tau), value_at(tau), velocity_at(tau), s);
        };
        auto logX_at = [&](double tau, double s) {
            return fam.log_X(std::exp(tau), value_at(tau), velocity_at(tau), s);
        };

        // transformed-integrand log value at parameter ln s = sigma
        auto inner = [&](double tau, double sigma) {
            double s = std::exp(sigma);
            double DlnT = (logT_at(tau + fd_step, s) - logT_at(tau - fd_step, s)) /
                          (2.0 * fd_step);
            double DlnX = (logX_at(tau + fd_step, s) - logX_at(tau - fd_step, s)) /
                          (2.0 * fd_step);
            if (std::fabs(DlnT) < 1e-12)
                throw DegenerateError(
                    "invariance_defect: dT/dt is the oplus-zero along a probe; "
                    "the transformed velocity is undefined");
            double logV = DlnX / DlnT;
            return log_field_value(p.lagrangian(), logT_at(tau, s), logX_at(tau, s), logV) *
                   DlnT;
        };

        for (int j = 1; j <= samples_per_probe; ++j) {
            double tau = tau_a + (tau_b - tau_a) * static_cast<double>(j) /
                                     static_cast<double>(samples_per_probe + 1);
            double lhs = (gauge_at(tau + fd_step) - gauge_at(tau - fd_step)) / (2.0 * fd_step);
            double rhs = (inner(tau, s_step) - inner(tau, -s_step)) / (2.0 * s_step);
            defect = std::max(defect, std::fabs(lhs - rhs));
        }
    }
    return defect;
}

ConservationReport noether_quantity(const VariationalProblem& p, const Trajectory& traj,
                                    const TransformationFamily& fam, double s_step,
                                    double fd_step, double conserved_tol) {
    if (identity_defect(fam) > kIdentityTol)
        throw PreconditionError("noether_quantity: family '" + fam.label +
                                "' is not the identity at s = 1");
    traj.check_boundary(p);

    FamilyTraces tr = family_traces(p, traj, fam, s_step, fd_step, false);
    const std::size_t n = traj.size();

    ConservationReport report;
    report.tolerance = conserved_tol;
    report.quantity.reserve(n);
    double mean = 0.0;
    std::vector<double> logq(n);
    for (std::size_t j = 0; j < n; ++j) {
        logq[j] = tr.lnH[j] * tr.dT[j] + tr.P[j] * tr.dX[j] - tr.phi[j];
        report.quantity.push_back(unconjugate(logq[j]));
        mean += logq[j];
    }
    mean /= static_cast<double>(n);
    report.log_mean = mean;
    for (double q : logq)
        report.max_log_deviation = std::max(report.max_log_deviation, std::fabs(q - mean));
    report.conserved = report.max_log_deviation <= conserved_tol;
    return report;
}

ProofIdentityTraces proof_identity_check(const VariationalProblem& p, const Trajectory& traj,
                                         const TransformationFamily& fam, double s_step,
                                         double fd_step) {
    if (identity_defect(fam) > kIdentityTol)
        throw PreconditionError("proof_identity_check: family '" + fam.label +
                                "' is not the identity at s = 1");
    traj.check_boundary(p);

    FamilyTraces tr = family_traces(p, traj, fam, s_step, fd_step, true);
    const std::size_t n = traj.size();
    const double h = traj.tau_step();

    std::vector<double> PdX(n), HdT(n);
    for (std::size_t j = 0; j < n; ++j) {
        PdX[j] = tr.P[j] * tr.dX[j];
        HdT[j] = tr.lnH[j] * tr.dT[j];
    }
    std::vector<double> Dphi = central_diff(tr.phi, h);
    std::vector<double> DdT = central_diff(tr.dT, h);
    std::vector<double> DdX = central_diff(tr.dX, h);
    std::vector<double> DPdX = central_diff(PdX, h);
    std::vector<double> DHdT = central_diff(HdT, h);

    ProofIdentityTraces out;
    out.invariance_expansion.resize(n - 2);
    out.from_stationarity.resize(n - 2);
    out.from_rate.resize(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        std::size_t k = i - 1;
        // expanded invariance condition at s = 1
        out.invariance_expansion[k] =
            Dphi[k] - (tr.A[i] * tr.dT[i] + tr.B[i] * tr.dX[i] +
                       tr.P[i] * (DdX[k] - tr.nu[i] * DdT[k]) + tr.ell[i] * DdT[k]);
        // stationarity condition folded into a total rate
        out.from_stationarity[k] = tr.B[i] * tr.dX[i] + tr.P[i] * DdX[k] - DPdX[k];
        // rate condition folded into a total rate
        out.from_rate[k] = tr.A[i] * tr.dT[i] + tr.ell[i] * DdT[k] -
                           tr.P[i] * tr.nu[i] * DdT[k] - DHdT[k];
    }
    return out;
}

} // namespace nncalc

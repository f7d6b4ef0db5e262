#pragma once

#include <string>
#include <vector>

#include "nncalc/expr.hpp"
#include "nncalc/variational.hpp"

namespace nncalc {

inline constexpr double kDefaultSStep = 1e-4;
inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kDefaultInvarianceTol = 1e-8;
inline constexpr double kDefaultConservedTol = 1e-5;

// One-parameter transformation family (t, x) -> (T, X) with parameter s
// living in R+ and the identity at s = 1, plus a gauge term Phi(t, x, v).
// T and X may reference t, x, v, s; the gauge may reference t, x, v. The
// velocity argument is bound to the bigeometric derivative of whatever
// curve the family is evaluated along.
struct TransformationFamily {
    expr::Expr T;
    expr::Expr X;
    expr::Expr gauge;
    std::string label;

    static TransformationFamily from_strings(const std::string& label,
                                             const std::string& T_source,
                                             const std::string& X_source,
                                             const std::string& gauge_source = "1");

    // Extended precision: the invariance defect divides differences of
    // these by two small steps in a row.
    long double log_T(double t, double x, double v, double s) const;
    long double log_X(double t, double x, double v, double s) const;
    long double log_gauge(double t, double x, double v) const;
};

// Max log-space deviation from the identity map at s = 1 over a fixed set
// of pseudo-random (t, x, v) points.
double identity_defect(const TransformationFamily& fam, int samples = 32);

inline bool passes_identity(const TransformationFamily& fam, double tol = kIdentityTol) {
    return identity_defect(fam) <= tol;
}

struct ConservationReport {
    std::vector<PosReal> quantity;  // per grid node
    double log_mean = 0.0;
    double max_log_deviation = 0.0;
    double tolerance = kDefaultConservedTol;
    bool conserved = false;
};

// Default probe family for the invariance test: five power curves
// (t / sqrt(ab))^k, k in {-1, -1/2, 1/2, 1, 2}. The invariance definition
// quantifies over all C^2 curves; a finite probe set is the numerical
// surrogate, so reports should name the probes used.
std::vector<ScalarCurve> default_probes(const VariationalProblem& p);

// Max over probes and sample points of the log-space gap between the two
// sides of the invariance condition: the total time rate of the gauge term
// against the s-derivative at s = 1 of the transformed-integrand expression
// L(T, X, dX/dt oslash dT/dt) odot dT/dt. Total t-derivatives are central
// differences along the probe; the s-derivative is a central difference of
// logs over 2*s_step in ln s. Throws DegenerateError when dT/dt hits the
// oplus-zero at a probe.
double invariance_defect(const VariationalProblem& p, const TransformationFamily& fam,
                         const std::vector<ScalarCurve>& probes,
                         double s_step = kDefaultSStep,
                         double fd_step = kDefaultFdStep,
                         int samples_per_probe = 11);

// Conserved-quantity trace
//   [L ominus dL/dv odot v~] odot dT/ds|1  oplus  dL/dv odot dX/ds|1  ominus  Phi
// per node, with s-derivatives taken in conjugated s by central difference.
// Requires the family to pass the identity-at-s=1 check; the conservation
// verdict is meaningful only when traj is an extremal of p.
ConservationReport noether_quantity(const VariationalProblem& p, const Trajectory& traj,
                                    const TransformationFamily& fam,
                                    double s_step = kDefaultSStep,
                                    double fd_step = kDefaultFdStep,
                                    double conserved_tol = kDefaultConservedTol);

// Log-space residuals, per interior node, of the three identities that
// chain the invariance condition with the stationarity and rate conditions
// to produce the conserved quantity. All vanish to discretization order on
// extremals of invariant families.
struct ProofIdentityTraces {
    std::vector<double> invariance_expansion;
    std::vector<double> from_stationarity;
    std::vector<double> from_rate;
};

ProofIdentityTraces proof_identity_check(const VariationalProblem& p, const Trajectory& traj,
                                         const TransformationFamily& fam,
                                         double s_step = kDefaultSStep,
                                         double fd_step = kDefaultFdStep);

} // namespace nncalc

#include "nncalc/analysis.hpp"

#include <cmath>
#include <string>

namespace nncalc {

double log_curve_value(const ScalarCurve& f, double tau) {
    double t = std::exp(tau);
    if (!(t > f.lo && t < f.hi) && t != f.lo && t != f.hi)
        throw DomainError("curve evaluated outside its domain at t = " + std::to_string(t));
    double y = f.eval(t);
    if (!std::isfinite(y) || y <= 0.0)
        throw InvariantError("curve produced a non-positive or non-finite value at t = " +
                             std::to_string(t));
    return std::log(y);
}

double log_field_value(const TernaryField& F, double tau, double xi, double nu) {
    double y = F.eval(std::exp(tau), std::exp(xi), std::exp(nu));
    if (!std::isfinite(y) || y <= 0.0)
        throw InvariantError("field produced a non-positive or non-finite value");
    return std::log(y);
}

double log_nn_derivative(const ScalarCurve& f, double tau, double step) {
    if (!(step > 0.0))
        throw PreconditionError("nn_derivative: step must be positive");
    return (log_curve_value(f, tau + step) - log_curve_value(f, tau - step)) / (2.0 * step);
}

double log_nn_second_derivative(const ScalarCurve& f, double tau, double step) {
    if (!(step > 0.0))
        throw PreconditionError("nn_second_derivative: step must be positive");
    return (log_curve_value(f, tau + step) - 2.0 * log_curve_value(f, tau) +
            log_curve_value(f, tau - step)) /
           (step * step);
}

double log_nn_partial(const TernaryField& F, Coord which, double tau, double xi, double nu,
                      double step) {
    if (!(step > 0.0))
        throw PreconditionError("nn_partial: step must be positive");
    double hi, lo;
    switch (which) {
    case Coord::T:
        hi = log_field_value(F, tau + step, xi, nu);
        lo = log_field_value(F, tau - step, xi, nu);
        break;
    case Coord::X:
        hi = log_field_value(F, tau, xi + step, nu);
        lo = log_field_value(F, tau, xi - step, nu);
        break;
    default:
        hi = log_field_value(F, tau, xi, nu + step);
        lo = log_field_value(F, tau, xi, nu - step);
        break;
    }
    return (hi - lo) / (2.0 * step);
}

double log_nn_integral(const ScalarCurve& f, double tau_a, double tau_b, int nodes) {
    if (!(tau_a < tau_b))
        throw PreconditionError("nn_integral: requires a < b");
    int m = nodes < 3 ? 3 : nodes;
    if (m % 2 == 0)
        ++m; // Simpson needs an odd node count
    double h = (tau_b - tau_a) / (m - 1);
    double acc = log_curve_value(f, tau_a) + log_curve_value(f, tau_b);
    for (int i = 1; i < m - 1; ++i)
        acc += (i % 2 == 1 ? 4.0 : 2.0) * log_curve_value(f, tau_a + i * h);
    return acc * h / 3.0;
}

PosReal nn_derivative(const ScalarCurve& f, PosReal t, double step) {
    return unconjugate(log_nn_derivative(f, conjugate(t), step));
}

PosReal nn_second_derivative(const ScalarCurve& f, PosReal t, double step) {
    return unconjugate(log_nn_second_derivative(f, conjugate(t), step));
}

PosReal nn_partial(const TernaryField& F, Coord which, PosReal t, PosReal x, PosReal v,
                   double step) {
    return unconjugate(
        log_nn_partial(F, which, conjugate(t), conjugate(x), conjugate(v), step));
}

PosReal nn_integral(const ScalarCurve& f, PosReal a, PosReal b, int nodes) {
    if (nodes < 2)
        throw PreconditionError("nn_integral: needs at least 2 nodes");
    if (!(a.value() < b.value()))
        throw PreconditionError("nn_integral: requires a < b");
    return unconjugate(log_nn_integral(f, conjugate(a), conjugate(b), nodes));
}

} // namespace nncalc

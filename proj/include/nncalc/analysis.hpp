#pragma once

#include <functional>
#include <limits>

#include "nncalc/arith.hpp"

namespace nncalc {

// Central-difference step in conjugated coordinates. Balances truncation
// against round-off for second-order differences at double precision.
inline constexpr double kDefaultFdStep = 1e-4;

// Positive curve t -> f(t). The domain defaults to all of R+; curves backed
// by sampled data restrict it to their interval.
struct ScalarCurve {
    std::function<double(double)> eval;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
};

// Positive field (t, x, v) -> F(t, x, v) on (R+)^3.
struct TernaryField {
    std::function<double(double, double, double)> eval;
};

enum class Coord { T, X, V };

// ln f(e^tau) with domain and positivity checks. The workhorse of all
// numerics below: in (tau, xi) coordinates the multiplicative calculus is
// the classical one.
double log_curve_value(const ScalarCurve& f, double tau);

// ln F(e^tau, e^xi, e^nu).
double log_field_value(const TernaryField& F, double tau, double xi, double nu);

// d(ln f)/d(ln t) by central difference with spacing `step` in tau = ln t.
double log_nn_derivative(const ScalarCurve& f, double tau, double step);

// d^2(ln f)/d(ln t)^2 by the compact three-point second difference.
double log_nn_second_derivative(const ScalarCurve& f, double tau, double step);

// d(ln F)/d(ln u) at (tau, xi, nu), u the selected coordinate.
double log_nn_partial(const TernaryField& F, Coord which, double tau, double xi,
                      double nu, double step);

// integral of ln f(e^tau) dtau over [tau_a, tau_b], composite Simpson on a
// uniform tau grid. `nodes` is rounded up to the next odd count >= 3.
double log_nn_integral(const ScalarCurve& f, double tau_a, double tau_b, int nodes);

// Bigeometric derivative exp(t f'(t)/f(t)). `t` must be interior to the
// curve's domain.
PosReal nn_derivative(const ScalarCurve& f, PosReal t, double step = kDefaultFdStep);

PosReal nn_second_derivative(const ScalarCurve& f, PosReal t, double step = kDefaultFdStep);

PosReal nn_partial(const TernaryField& F, Coord which, PosReal t, PosReal x, PosReal v,
                   double step = kDefaultFdStep);

// Multiplicative integral exp(integral of ln f in log time) over [a, b].
PosReal nn_integral(const ScalarCurve& f, PosReal a, PosReal b, int nodes);

} // namespace nncalc

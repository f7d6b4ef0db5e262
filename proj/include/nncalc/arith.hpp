#pragma once

#include <cmath>

#include "nncalc/errors.hpp"

namespace nncalc {

// Element of the multiplicative field (R+, oplus, odot):
//
//   x oplus  y = x * y          x ominus y = x / y
//   x odot   y = x^ln(y)        x oslash y = x^(1/ln(y)),  y != 1
//
// The oplus-identity is 1, the odot-identity is e, and ln is a field
// isomorphism onto (R, +, *): every identity below can be checked by
// conjugating through ln. Values are strictly positive finite doubles.
class PosReal {
public:
    explicit PosReal(double value) : v_(value) {
        if (std::isnan(v_) || std::isinf(v_))
            throw RangeError("PosReal: value must be finite");
        if (v_ <= 0.0)
            throw InvariantError("PosReal: value must be strictly positive");
    }

    double value() const { return v_; }

    friend bool operator==(PosReal a, PosReal b) { return a.v_ == b.v_; }
    friend bool operator!=(PosReal a, PosReal b) { return a.v_ != b.v_; }

private:
    double v_;
};

// ln: transports oplus to + and odot to *.
inline double conjugate(PosReal x) { return std::log(x.value()); }

// exp: inverse of conjugate. Throws RangeError when the exponential
// leaves (0, inf).
inline PosReal unconjugate(double r) {
    double v = std::exp(r);
    if (!std::isfinite(v))
        throw RangeError("unconjugate: overflow");
    if (v <= 0.0)
        throw RangeError("unconjugate: underflow");
    return PosReal(v);
}

inline PosReal nn_add(PosReal x, PosReal y) {
    double v = x.value() * y.value();
    if (!std::isfinite(v))
        throw RangeError("nn_add: overflow");
    if (v <= 0.0)
        throw RangeError("nn_add: underflow");
    return PosReal(v);
}

inline PosReal nn_sub(PosReal x, PosReal y) {
    double v = x.value() / y.value();
    if (!std::isfinite(v))
        throw RangeError("nn_sub: overflow");
    if (v <= 0.0)
        throw RangeError("nn_sub: underflow");
    return PosReal(v);
}

inline PosReal nn_mul(PosReal x, PosReal y) {
    double v = std::exp(std::log(x.value()) * std::log(y.value()));
    if (!std::isfinite(v))
        throw RangeError("nn_mul: overflow");
    if (v <= 0.0)
        throw RangeError("nn_mul: underflow");
    return PosReal(v);
}

inline PosReal nn_div(PosReal x, PosReal y) {
    if (y.value() == 1.0)
        throw DomainError("nn_div: divisor is the odot-zero (y = 1)");
    double v = std::exp(std::log(x.value()) / std::log(y.value()));
    if (!std::isfinite(v))
        throw RangeError("nn_div: overflow");
    if (v <= 0.0)
        throw RangeError("nn_div: underflow");
    return PosReal(v);
}

} // namespace nncalc

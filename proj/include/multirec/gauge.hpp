#pragma once

// Monomial gauges c * t^q with rational c and integer q, so every gauge
// value at a rational argument is itself rational.

#include "multirec/numeric.hpp"

namespace multirec {

/// psi(t) = c t^q, c >= 1, q >= 1. phi = sqrt(psi) is never materialised;
/// callers compare phi-expressions in squared form.
struct GaugePsi {
    Rational c{1};
    unsigned q = 2;

    Rational operator()(const BigInt& t) const { return c * Rational(ipow(t, q)); }
    /// Least integer t >= 0 with psi(t) >= y.
    BigInt ceil_inverse(const Rational& y) const;
    /// max(1, psi(t)), i.e. phi*(t)^2.
    Rational phi_star_squared(const BigInt& t) const;

    void validate() const;
    bool operator==(const GaugePsi&) const = default;
};

/// h(t) = c t^q; h(0) = 0 and increasing on t >= 0.
struct GaugeH {
    Rational c{1};
    unsigned q = 1;

    Rational operator()(const Rational& t) const { return c * rpow(t, q); }
    void validate() const;
};

}  // namespace multirec

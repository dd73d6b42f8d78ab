#include "multirec/gauge.hpp"

namespace multirec {

BigInt GaugePsi::ceil_inverse(const Rational& y) const {
    if (y <= 0) return 0;
    Rational target = y / c;
    BigInt t = iroot_floor(floor(target), q);
    while ((*this)(t) < y) t += 1;
    while (t > 0 && (*this)(t - 1) >= y) t -= 1;
    return t;
}

Rational GaugePsi::phi_star_squared(const BigInt& t) const {
    Rational v = (*this)(t);
    return v < 1 ? Rational(1) : v;
}

void GaugePsi::validate() const {
    if (c < 1) throw InputError("psi coefficient must be >= 1, got " + to_string(c));
    if (q < 1) throw InputError("psi exponent must be >= 1");
}

void GaugeH::validate() const {
    if (c <= 0) throw InputError("h coefficient must be positive, got " + to_string(c));
    if (q < 1) throw InputError("h exponent must be >= 1");
}

}  // namespace multirec

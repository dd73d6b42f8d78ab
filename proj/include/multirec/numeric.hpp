#pragma once

// Exact integer / rational types shared by every module, plus the error
// hierarchy. Rationals always travel as "p/q" strings outside the process.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace multirec {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Requested work exceeds a configured cap (exhaustive search size, radix budget, ...).
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A construction could not satisfy one of its own invariants.
class BuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "p/q", "p" or "-p/q". Throws InputError on malformed text or q = 0.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; the denominator is always written ("1/1", "0/1").
std::string to_string(const Rational& r);

std::string to_string(const BigInt& n);

inline Rational make_rational(std::int64_t p, std::int64_t q = 1) {
    return Rational(BigInt(p), BigInt(q));
}

/// Smallest integer >= r.
BigInt ceil(const Rational& r);

/// Largest integer <= r.
BigInt floor(const Rational& r);

/// Integer power t^q, q >= 0.
BigInt ipow(const BigInt& t, unsigned q);
Rational rpow(const Rational& t, unsigned q);

/// Largest t >= 0 with t^q <= n (n >= 0, q >= 1).
BigInt iroot_floor(const BigInt& n, unsigned q);

/// Narrowing with a range check; throws CapacityError when the value does not fit.
std::int64_t to_int64(const BigInt& n, std::string_view what);

/// Rationals of the form a + b*sqrt(s), s >= 0, closed under + - and scaling.
/// Only what the covering chain needs: exact sign and ordering.
struct Surd {
    Rational a;
    Rational b;
    Rational s;

    static Surd rational(Rational v) { return {std::move(v), Rational(0), Rational(0)}; }

    friend Surd operator-(const Surd& x, const Surd& y);
    int sign() const;
    std::string str() const;
};

/// Exact x <= y. Both operands must share the radicand unless one has b == 0.
bool surd_leq(const Surd& x, const Surd& y);

}  // namespace multirec

#include "multirec/numeric.hpp"

#include <cctype>

namespace multirec {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i == text.size()) throw InputError("malformed rational: '" + std::string(whole) + "'");
    BigInt value = 0;
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw InputError("malformed rational: '" + std::string(whole) + "'");
        value = value * 10 + (text[i] - '0');
    }
    return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
    BigInt p = parse_integer(text.substr(0, slash), text);
    BigInt q = parse_integer(text.substr(slash + 1), text);
    if (q == 0) throw InputError("zero denominator: '" + std::string(text) + "'");
    return Rational(p, q);
}

std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

std::string to_string(const BigInt& n) { return n.str(); }

BigInt floor(const Rational& r) {
    const BigInt& p = boost::multiprecision::numerator(r);
    const BigInt& q = boost::multiprecision::denominator(r);  // q > 0
    BigInt quot = p / q;  // truncates toward zero
    if (p < 0 && quot * q != p) quot -= 1;
    return quot;
}

BigInt ceil(const Rational& r) {
    BigInt f = floor(r);
    return Rational(f) == r ? f : BigInt(f + 1);
}

BigInt ipow(const BigInt& t, unsigned q) { return boost::multiprecision::pow(t, q); }

Rational rpow(const Rational& t, unsigned q) {
    return Rational(ipow(boost::multiprecision::numerator(t), q), ipow(boost::multiprecision::denominator(t), q));
}

BigInt iroot_floor(const BigInt& n, unsigned q) {
    if (n < 0) throw InputError("iroot_floor of a negative number");
    if (q == 1 || n < 2) return n;
    // Bisection on [0, 2^(bits/q + 1)].
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(n)) + 1;
    BigInt lo = 0;
    BigInt hi = BigInt(1) << (bits / q + 1);
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) >> 1;
        if (ipow(mid, q) <= n)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

std::int64_t to_int64(const BigInt& n, std::string_view what) {
    if (n > BigInt(INT64_MAX) || n < BigInt(INT64_MIN))
        throw CapacityError(std::string(what) + " does not fit in 64 bits: " + n.str());
    return static_cast<std::int64_t>(n);
}

Surd operator-(const Surd& x, const Surd& y) {
    Rational s = x.b != 0 ? x.s : y.s;
    if (x.b != 0 && y.b != 0 && x.s != y.s) throw InputError("surd radicands differ");
    return {x.a - y.a, x.b - y.b, s};
}

int Surd::sign() const {
    // sign of a + b*sqrt(s)
    int sa = a.sign();
    int sb = (s == 0) ? 0 : b.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with b^2 s
    Rational lhs = a * a;
    Rational rhs = b * b * s;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
}

std::string Surd::str() const {
    if (b == 0 || s == 0) return to_string(a);
    return to_string(a) + " + " + to_string(b) + "*sqrt(" + to_string(s) + ")";
}

bool surd_leq(const Surd& x, const Surd& y) { return (x - y).sign() <= 0; }

}  // namespace multirec

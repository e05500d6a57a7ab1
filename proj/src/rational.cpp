#include "fsdim/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "fsdim/errors.hpp"

namespace fsdim {

namespace {

namespace mp = boost::multiprecision;

std::string strip(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_rational(const std::string& text) {
    fail("MalformedFile", "not a rational number: '" + text + "'");
}

// cpp_int's string constructor follows C++ literal rules, so a leading zero
// would flip it into octal; trim them before constructing
BigInt from_digits10(const std::string& digits) {
    size_t i = 0;
    while (i + 1 < digits.size() && digits[i] == '0') ++i;
    return BigInt(digits.substr(i));
}

BigInt parse_int(const std::string& text, const std::string& original) {
    if (text.empty()) bad_rational(original);
    size_t pos = (text[0] == '+' || text[0] == '-') ? 1 : 0;
    if (pos == text.size()) bad_rational(original);
    for (size_t i = pos; i < text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) bad_rational(original);
    BigInt v = from_digits10(text.substr(pos));
    return text[0] == '-' ? BigInt(-v) : v;
}

// v > 0, within ~1 ulp
double log2_bigint(const BigInt& v) {
    size_t bits = mp::msb(v) + 1;
    if (bits <= 62) return std::log2(v.convert_to<double>());
    BigInt top = v >> (bits - 62);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 62);
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string t = strip(text);
    if (t.empty()) bad_rational(text);

    if (auto slash = t.find('/'); slash != std::string::npos) {
        BigInt num = parse_int(t.substr(0, slash), text);
        BigInt den = parse_int(t.substr(slash + 1), text);
        if (den == 0) bad_rational(text);
        return Rational(num, den);
    }

    // decimal form, parsed exactly: digits scaled by a power of ten
    size_t pos = 0;
    bool neg = false;
    if (t[pos] == '+' || t[pos] == '-') neg = t[pos++] == '-';
    std::string digits;
    int64_t exp10 = 0;
    bool any = false;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) {
        digits += t[pos++];
        any = true;
    }
    if (pos < t.size() && t[pos] == '.') {
        ++pos;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) {
            digits += t[pos++];
            --exp10;
            any = true;
        }
    }
    if (!any) bad_rational(text);
    if (pos < t.size() && (t[pos] == 'e' || t[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) eneg = t[pos++] == '-';
        if (pos == t.size()) bad_rational(text);
        int64_t e = 0;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) {
            e = e * 10 + (t[pos++] - '0');
            if (e > 1'000'000) bad_rational(text);
        }
        exp10 += eneg ? -e : e;
    }
    if (pos != t.size()) bad_rational(text);

    Rational r(from_digits10(digits.empty() ? "0" : digits));
    if (exp10 > 0)
        r *= Rational(mp::pow(BigInt(10), static_cast<unsigned>(exp10)));
    else if (exp10 < 0)
        r /= Rational(mp::pow(BigInt(10), static_cast<unsigned>(-exp10)));
    return neg ? -r : r;
}

std::string format_rational(const Rational& r) {
    std::string num = mp::numerator(r).str();
    if (mp::denominator(r) == 1) return num;
    return num + "/" + mp::denominator(r).str();
}

Rational pow_rational(const Rational& x, int64_t e) {
    if (e == 0) return Rational(1);
    bool inv = e < 0;
    uint64_t m = inv ? ~static_cast<uint64_t>(e) + 1 : static_cast<uint64_t>(e);
    if (m > std::numeric_limits<unsigned>::max())
        fail("BlockTooLarge", "exponent too large");
    if (inv && x == 0) fail("NonPositiveMeasure", "zero raised to a negative power");
    BigInt num = mp::pow(mp::numerator(x), static_cast<unsigned>(m));
    BigInt den = mp::pow(mp::denominator(x), static_cast<unsigned>(m));
    return inv ? Rational(den, num) : Rational(num, den);
}

std::optional<Rational> pow_rational_exact(const Rational& x, int64_t num,
                                           int64_t den) {
    if (x <= 0) return std::nullopt;
    if (den == 0) return std::nullopt;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    Rational y = pow_rational(x, num);
    if (den == 1) return y;
    BigInt rn = iroot(mp::numerator(y), static_cast<uint64_t>(den));
    BigInt rd = iroot(mp::denominator(y), static_cast<uint64_t>(den));
    if (mp::pow(rn, static_cast<unsigned>(den)) != mp::numerator(y)) return std::nullopt;
    if (mp::pow(rd, static_cast<unsigned>(den)) != mp::denominator(y)) return std::nullopt;
    return Rational(rn, rd);
}

int64_t ceil_log2(const Rational& x) {
    if (x <= 0) fail("NonPositiveMeasure", "ceil_log2 of a nonpositive value");
    const BigInt& p = mp::numerator(x);
    const BigInt& q = mp::denominator(x);
    auto at_most = [&](int64_t e) {  // x <= 2^e
        if (e >= 0) return p <= (q << static_cast<unsigned>(e));
        return (p << static_cast<unsigned>(-e)) <= q;
    };
    int64_t e = static_cast<int64_t>(mp::msb(p)) - static_cast<int64_t>(mp::msb(q));
    while (!at_most(e)) ++e;
    while (at_most(e - 1)) --e;
    return e;
}

int64_t ceil_log2_inverse(const Rational& p) {
    if (p <= 0) fail("NonPositiveMeasure", "codeword length of a nonpositive mass");
    return ceil_log2(1 / p);
}

double log2_rational(const Rational& r) {
    if (r <= 0) fail("NonPositiveMeasure", "log2 of a nonpositive value");
    return log2_bigint(mp::numerator(r)) - log2_bigint(mp::denominator(r));
}

double rational_to_double(const Rational& r) {
    if (r == 0) return 0.0;
    bool neg = r < 0;
    BigInt p = mp::abs(mp::numerator(r));
    const BigInt& q = mp::denominator(r);
    // scale the quotient to ~64 significant bits, then ldexp back
    int64_t shift = 64 + static_cast<int64_t>(mp::msb(q)) - static_cast<int64_t>(mp::msb(p));
    BigInt scaled = shift >= 0 ? BigInt(p << static_cast<unsigned>(shift))
                               : BigInt(p >> static_cast<unsigned>(-shift));
    double d = std::ldexp((scaled / q).convert_to<double>(), static_cast<int>(-shift));
    return neg ? -d : d;
}

BigInt iroot(const BigInt& x, uint64_t n) {
    if (n == 0) fail("NonPositiveMeasure", "zeroth root");
    if (x < 0) fail("NonPositiveMeasure", "root of a negative value");
    if (x == 0 || x == 1 || n == 1) return x;
    if (n > std::numeric_limits<unsigned>::max()) return BigInt(1);
    uint64_t bits = mp::msb(x) + 1;
    BigInt lo = 0;
    BigInt hi = BigInt(1) << static_cast<unsigned>(bits / n + 1);
    while (lo + 1 < hi) {  // invariant: lo^n <= x < hi^n
        BigInt mid = (lo + hi) >> 1;
        if (mp::pow(mid, static_cast<unsigned>(n)) <= x)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace fsdim

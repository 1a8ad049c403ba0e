#pragma once

// Arithmetic modes shared by every module.
//
// Geometry code is templated on a scalar type T which is either
// godbersen::Rational (exact mode) or double (float mode). The
// scalar_traits<T> specialisations carry everything that differs between
// the two: sign tests, conversions, and the textual form used in JSON.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace godbersen {

// Expression templates are switched off: geometry code freely uses `auto`
// and generic lambdas, which must not capture unevaluated expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

enum class Mode { exact, floating };

inline const char* mode_name(Mode m) { return m == Mode::exact ? "exact" : "float"; }

inline Mode parse_mode(std::string_view s) {
    if (s == "exact") return Mode::exact;
    if (s == "float") return Mode::floating;
    throw std::invalid_argument("unknown arithmetic mode '" + std::string(s) + "'");
}

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static constexpr Mode mode = Mode::exact;

    static int sign(const Rational& x, double /*tol*/ = 0.0) { return x.sign(); }
    static double to_double(const Rational& x) { return x.convert_to<double>(); }

    // Every finite double is a dyadic rational, so this conversion is exact.
    static Rational from_double(double x) {
        if (!std::isfinite(x)) throw std::domain_error("non-finite value cannot enter exact mode");
        return Rational(x);
    }

    static Rational parse(std::string_view s) {
        std::string str(s);
        if (str.find_first_of(".eE") != std::string::npos)
            throw std::invalid_argument("exact coordinates must be fractions, got '" + str + "'");
        return Rational(str);
    }

    static std::string format(const Rational& x) { return x.str(); }

    static Rational abs(const Rational& x) { return x.sign() < 0 ? Rational(-x) : x; }

    // Size of the largest of numerator/denominator in bits; 0 for zero.
    static std::size_t bits(const Rational& x) {
        Integer num = numerator(x);
        if (num.sign() < 0) num = -num;
        std::size_t nb = num.sign() == 0 ? 0 : static_cast<std::size_t>(msb(num)) + 1;
        std::size_t db = static_cast<std::size_t>(msb(Integer(denominator(x)))) + 1;
        return std::max<std::size_t>(nb, db);
    }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static constexpr Mode mode = Mode::floating;

    static int sign(double x, double tol = 0.0) { return x > tol ? 1 : (x < -tol ? -1 : 0); }
    static double to_double(double x) { return x; }
    static double from_double(double x) {
        if (!std::isfinite(x)) throw std::domain_error("non-finite value in float mode");
        return x;
    }

    // Accepts plain decimals and "p/q" fractions.
    static double parse(std::string_view s) {
        std::string str(s);
        auto slash = str.find('/');
        if (slash != std::string::npos) {
            return std::stod(str.substr(0, slash)) / std::stod(str.substr(slash + 1));
        }
        return std::stod(str);
    }

    static std::string format(double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    }

    static double abs(double x) { return std::fabs(x); }
    static std::size_t bits(double) { return 64; }
};

template <class T>
inline constexpr bool is_exact_v = scalar_traits<T>::exact;

template <class T>
double to_double(const T& x) {
    return scalar_traits<T>::to_double(x);
}

/// Converts between the two modes. Rational -> double rounds; double ->
/// Rational is exact.
template <class To, class From>
To scalar_cast(const From& x) {
    if constexpr (std::is_same_v<To, From>) {
        return x;
    } else if constexpr (std::is_same_v<To, double>) {
        return scalar_traits<From>::to_double(x);
    } else {
        return scalar_traits<To>::from_double(scalar_traits<From>::to_double(x));
    }
}

/// Parses "p/q" (or an integer) into an exact rational.
inline Rational parse_rational(std::string_view s) { return scalar_traits<Rational>::parse(s); }

/// Rational approximation of x with denominator 2^bits.
inline Rational round_to_dyadic(double x, int bits) {
    double scaled = std::ldexp(x, bits);
    Integer num(static_cast<long long>(std::llround(scaled)));
    Integer den = Integer(1) << bits;
    return Rational(num, den);
}

inline Integer binomial(int n, int k) {
    if (k < 0 || k > n) return Integer(0);
    Integer r(1);
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline Integer factorial(int n) {
    Integer r(1);
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

template <class T>
T pow_int(const T& base, int e) {
    T r(1);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

template <class T>
T from_integer(const Integer& v) {
    if constexpr (is_exact_v<T>) {
        return Rational(v);
    } else {
        return v.convert_to<double>();
    }
}

}  // namespace godbersen

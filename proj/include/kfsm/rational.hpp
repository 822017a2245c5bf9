#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kfsm/errors.hpp"

namespace kfsm {

using Int = mpz_class;

/// Exact rational number, always in lowest terms with positive denominator.
/// Arithmetic never rounds.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(const Int& n) : v_(n) {}
    Rational(long n, long d) { init(Int(n), Int(d)); }
    Rational(const Int& n, const Int& d) { init(n, d); }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    Int num() const { return v_.get_num(); }
    Int den() const { return v_.get_den(); }

    int sign() const { return sgn(v_); }
    bool is_integer() const { return v_.get_den() == 1; }

    Int floor() const {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }

    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.sign() == 0) throw std::invalid_argument("Rational: division by zero");
        return Rational(mpq_class(a.v_ / b.v_));
    }
    Rational operator-() const { return Rational(mpq_class(-v_)); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// Serializes as "n" for integers, "n/d" otherwise.
    std::string str() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    /// Accepts "a/b" and integer literals.
    static std::optional<Rational> parse(std::string_view s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string_view::npos) {
                if (!valid_int(s)) return std::nullopt;
                return Rational(Int(std::string(s)));
            }
            std::string_view a = s.substr(0, slash), b = s.substr(slash + 1);
            if (!valid_int(a) || !valid_int(b)) return std::nullopt;
            Int den{std::string(b)};
            if (den == 0) return std::nullopt;
            return Rational(Int(std::string(a)), den);
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }

    double to_double() const { return v_.get_d(); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void init(const Int& n, const Int& d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        v_ = mpq_class(n, d);
        v_.canonicalize();
    }
    static bool valid_int(std::string_view s) {
        if (s.empty()) return false;
        size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    }

    mpq_class v_;
};

/// x reduced into [0, k).
inline Rational reduce_mod(const Rational& x, long k) {
    Rational kk(k);
    Rational r = x - kk * Rational(Int((x / kk).floor()));
    if (r.sign() < 0) r += kk;   // guard against any edge in floor
    if (r >= kk) r -= kk;
    return r;
}

/// A point of the k-fold cover S_k = R/kZ, stored as its representative in [0, k).
struct CirclePoint {
    Rational value;
    long modulus = 1;

    friend bool operator==(const CirclePoint& a, const CirclePoint& b) {
        return a.modulus == b.modulus && a.value == b.value;
    }
    friend bool operator<(const CirclePoint& a, const CirclePoint& b) {
        if (a.modulus != b.modulus) return a.modulus < b.modulus;
        return a.value < b.value;
    }
};

inline CirclePoint make_circle_point(const Rational& x, long k) {
    if (k < 1) throw std::invalid_argument("CirclePoint: modulus must be positive");
    return CirclePoint{reduce_mod(x, k), k};
}

/// R_omega on S_k: exact rotation x + omega mod k.
inline CirclePoint circle_add(const CirclePoint& x, const Rational& omega) {
    return make_circle_point(x.value + omega, x.modulus);
}

/// The orbit of 0 under R_{p/q} on S_k: the qk/gcd(p,k) points m*gcd(p,k)/q,
/// sorted ascending.
inline std::vector<CirclePoint> orbit_of_zero(long k, long p, long q) {
    if (k < 1 || q < 1 || p < 1 || p >= q || std::gcd(p, q) != 1)
        throw std::invalid_argument("orbit_of_zero: need gcd(p,q)=1, 0<p/q<1, k>=1");
    long d = std::gcd(p, k);
    long n = q * k / d;
    std::vector<CirclePoint> pts;
    pts.reserve(n);
    for (long i = 0; i < n; ++i) pts.push_back(CirclePoint{Rational(i * d, q), k});
    return pts;
}

} // namespace kfsm

#pragma once

// Arbitrary-precision rationals with an inline 64-bit fast path.
//
// Values that fit (numerator and denominator in int64, numerator != INT64_MIN)
// are stored inline; everything else lives in an immutable shared mpq_class.
// The representation is canonical: a value that fits is never stored big, so
// equality can compare representations directly.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crnd {

class DivisionByZero : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) { set_small_or_big(n, 1); }  // NOLINT(implicit)
    Rational(int n) : Rational(static_cast<std::int64_t>(n)) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d)
    {
        if (d == 0) throw DivisionByZero("rational with zero denominator");
        from_mpq(mpq_class(mpz_class(static_cast<long>(n)), mpz_class(static_cast<long>(d))));
    }
    explicit Rational(const mpq_class& q) { from_mpq(q); }

    /// Parses a decimal integer of any length, optionally signed.
    static Rational from_integer_string(std::string_view digits)
    {
        mpz_class z;
        if (z.set_str(std::string(digits), 10) != 0)
            throw std::invalid_argument("not an integer: " + std::string(digits));
        return Rational(mpq_class(z));
    }

    [[nodiscard]] bool is_zero() const noexcept { return !big_ && num_ == 0; }
    [[nodiscard]] bool is_one() const noexcept { return !big_ && num_ == 1 && den_ == 1; }
    [[nodiscard]] bool is_integer() const
    {
        return big_ ? big_->get_den() == 1 : den_ == 1;
    }
    [[nodiscard]] int sign() const noexcept
    {
        if (big_) return sgn(*big_);
        return (num_ > 0) - (num_ < 0);
    }
    [[nodiscard]] bool is_small() const noexcept { return !big_; }

    [[nodiscard]] mpq_class to_mpq() const
    {
        if (big_) return *big_;
        return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
    }
    [[nodiscard]] mpz_class numerator() const { return to_mpq().get_num(); }
    [[nodiscard]] mpz_class denominator() const { return to_mpq().get_den(); }

    [[nodiscard]] std::string to_string() const
    {
        if (!big_) {
            if (den_ == 1) return std::to_string(num_);
            return std::to_string(num_) + "/" + std::to_string(den_);
        }
        return big_->get_str();
    }

    friend Rational operator-(const Rational& a)
    {
        if (!a.big_) {
            Rational r;
            r.num_ = -a.num_;  // num_ != INT64_MIN by invariant
            r.den_ = a.den_;
            return r;
        }
        return Rational(mpq_class(-*a.big_));
    }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (!a.big_ && !b.big_) {
            // Knuth's two-gcd addition; every intermediate fits in 127 bits.
            const auto ad = static_cast<std::uint64_t>(a.den_);
            const auto bd = static_cast<std::uint64_t>(b.den_);
            const std::uint64_t g = std::gcd(ad, bd);
            const __int128 t = static_cast<__int128>(a.num_) * static_cast<__int128>(bd / g)
                             + static_cast<__int128>(b.num_) * static_cast<__int128>(ad / g);
            if (t == 0) return Rational();
            const std::uint64_t tm = static_cast<std::uint64_t>(uabs(t) % g);
            const std::uint64_t g2 = std::gcd(tm, g);
            const __int128 num = t / static_cast<__int128>(g2);
            const unsigned __int128 den = static_cast<unsigned __int128>(ad / g) * (bd / g2);
            return from_wide(num, den);
        }
        return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
    }

    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

    friend Rational operator*(const Rational& a, const Rational& b)
    {
        if (a.is_zero() || b.is_zero()) return Rational();
        if (a.is_one()) return b;
        if (b.is_one()) return a;
        if (!a.big_ && !b.big_) {
            const std::uint64_t g1 = std::gcd(uabs64(a.num_), static_cast<std::uint64_t>(b.den_));
            const std::uint64_t g2 = std::gcd(uabs64(b.num_), static_cast<std::uint64_t>(a.den_));
            const __int128 num = static_cast<__int128>(a.num_ / static_cast<std::int64_t>(g1))
                               * static_cast<__int128>(b.num_ / static_cast<std::int64_t>(g2));
            const unsigned __int128 den =
                static_cast<unsigned __int128>(static_cast<std::uint64_t>(a.den_) / g2)
                * (static_cast<std::uint64_t>(b.den_) / g1);
            return from_wide(num, den);
        }
        return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
    }

    [[nodiscard]] Rational inverse() const
    {
        if (is_zero()) throw DivisionByZero("inverse of zero rational");
        if (!big_) {
            Rational r;
            r.num_ = num_ < 0 ? -den_ : den_;
            r.den_ = num_ < 0 ? -num_ : num_;
            return r;
        }
        return Rational(mpq_class(1 / *big_));
    }

    friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b)
    {
        if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
        if (!a.big_ || !b.big_) return false;
        return *a.big_ == *b.big_;
    }

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        if (!a.big_ && !b.big_) {
            const __int128 l = static_cast<__int128>(a.num_) * b.den_;
            const __int128 r = static_cast<__int128>(b.num_) * a.den_;
            return l <=> r;
        }
        const int c = cmp(a.to_mpq(), b.to_mpq());
        return c <=> 0;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

    [[nodiscard]] std::size_t hash() const
    {
        if (!big_) return std::hash<std::int64_t>{}(num_) * 31 + std::hash<std::int64_t>{}(den_);
        return std::hash<std::string>{}(big_->get_str());
    }

private:
    static unsigned __int128 uabs(__int128 v)
    {
        return v < 0 ? static_cast<unsigned __int128>(0) - static_cast<unsigned __int128>(v)
                     : static_cast<unsigned __int128>(v);
    }
    static std::uint64_t uabs64(std::int64_t v)
    {
        return v < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
    }

    static mpz_class to_mpz(unsigned __int128 v)
    {
        mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
        mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
        return (hi << 64) + lo;
    }

    // num/den already in lowest terms, den > 0.
    static Rational from_wide(__int128 num, unsigned __int128 den)
    {
        constexpr auto max = static_cast<__int128>(std::numeric_limits<std::int64_t>::max());
        Rational r;
        if (num <= max && num >= -max && den <= static_cast<unsigned __int128>(max)) {
            r.num_ = static_cast<std::int64_t>(num);
            r.den_ = static_cast<std::int64_t>(den);
            return r;
        }
        mpz_class n = to_mpz(uabs(num));
        if (num < 0) n = -n;
        r.big_ = std::make_shared<const mpq_class>(n, to_mpz(den));
        return r;
    }

    void set_small_or_big(std::int64_t n, std::int64_t d)
    {
        if (n == std::numeric_limits<std::int64_t>::min()) {
            big_ = std::make_shared<const mpq_class>(mpz_class(static_cast<long>(n)),
                                                     mpz_class(static_cast<long>(d)));
            return;
        }
        num_ = n;
        den_ = d;
    }

    void from_mpq(mpq_class q)
    {
        q.canonicalize();
        const mpz_class& n = q.get_num();
        const mpz_class& d = q.get_den();
        if (n.fits_slong_p() && d.fits_slong_p() && n.get_si() != std::numeric_limits<long>::min()) {
            num_ = n.get_si();
            den_ = d.get_si();
            big_.reset();
            return;
        }
        num_ = 0;
        den_ = 1;
        big_ = std::make_shared<const mpq_class>(std::move(q));
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::shared_ptr<const mpq_class> big_;
};

}  // namespace crnd

#pragma once

// Exact coefficients: the real field Q(sqrt2, sqrt3) and its complexification.

#include "crnd/rational.hpp"

#include <array>
#include <ostream>
#include <string>

namespace crnd {

/// a + b*sqrt(2) + c*sqrt(3) + d*sqrt(6), every component rational.
class SurdScalar {
public:
    SurdScalar() = default;
    SurdScalar(Rational a) : c_{std::move(a), {}, {}, {}} {}  // NOLINT(implicit)
    SurdScalar(int a) : SurdScalar(Rational(a)) {}            // NOLINT(implicit)
    SurdScalar(Rational a, Rational b, Rational c, Rational d)
        : c_{std::move(a), std::move(b), std::move(c), std::move(d)}
    {
    }

    static SurdScalar sqrt2() { return {0, 1, 0, 0}; }
    static SurdScalar sqrt3() { return {0, 0, 1, 0}; }
    static SurdScalar sqrt6() { return {0, 0, 0, 1}; }

    [[nodiscard]] const Rational& rational_part() const noexcept { return c_[0]; }
    [[nodiscard]] const Rational& sqrt2_part() const noexcept { return c_[1]; }
    [[nodiscard]] const Rational& sqrt3_part() const noexcept { return c_[2]; }
    [[nodiscard]] const Rational& sqrt6_part() const noexcept { return c_[3]; }
    [[nodiscard]] const Rational& component(int k) const { return c_.at(static_cast<std::size_t>(k)); }

    [[nodiscard]] bool is_zero() const noexcept
    {
        return c_[0].is_zero() && c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero();
    }
    [[nodiscard]] bool is_rational() const noexcept
    {
        return c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero();
    }
    [[nodiscard]] bool is_one() const noexcept { return is_rational() && c_[0].is_one(); }

    friend SurdScalar operator+(const SurdScalar& x, const SurdScalar& y)
    {
        return {x.c_[0] + y.c_[0], x.c_[1] + y.c_[1], x.c_[2] + y.c_[2], x.c_[3] + y.c_[3]};
    }
    friend SurdScalar operator-(const SurdScalar& x) { return {-x.c_[0], -x.c_[1], -x.c_[2], -x.c_[3]}; }
    friend SurdScalar operator-(const SurdScalar& x, const SurdScalar& y)
    {
        return {x.c_[0] - y.c_[0], x.c_[1] - y.c_[1], x.c_[2] - y.c_[2], x.c_[3] - y.c_[3]};
    }

    // sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2sqrt3, sqrt3*sqrt6 = 3sqrt2, sqrt6^2 = 6.
    friend SurdScalar operator*(const SurdScalar& x, const SurdScalar& y)
    {
        if (x.is_rational()) return y.scaled(x.c_[0]);
        if (y.is_rational()) return x.scaled(y.c_[0]);
        const auto& [a1, b1, c1, d1] = x.c_;
        const auto& [a2, b2, c2, d2] = y.c_;
        return {a1 * a2 + Rational(2) * (b1 * b2) + Rational(3) * (c1 * c2) + Rational(6) * (d1 * d2),
                a1 * b2 + b1 * a2 + Rational(3) * (c1 * d2 + d1 * c2),
                a1 * c2 + c1 * a2 + Rational(2) * (b1 * d2 + d1 * b2),
                a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2};
    }

    [[nodiscard]] SurdScalar scaled(const Rational& r) const
    {
        if (r.is_one()) return *this;
        return {c_[0] * r, c_[1] * r, c_[2] * r, c_[3] * r};
    }

    /// Galois conjugate flipping the sign of sqrt2 (flip2) and/or sqrt3 (flip3).
    [[nodiscard]] SurdScalar galois(bool flip2, bool flip3) const
    {
        const bool flip6 = flip2 != flip3;
        return {c_[0], flip2 ? -c_[1] : c_[1], flip3 ? -c_[2] : c_[2], flip6 ? -c_[3] : c_[3]};
    }

    /// Product over the four embeddings; always rational.
    [[nodiscard]] Rational norm() const
    {
        const SurdScalar n = *this * galois(true, false) * galois(false, true) * galois(true, true);
        return n.c_[0];
    }

    [[nodiscard]] SurdScalar inverse() const
    {
        if (is_zero()) throw DivisionByZero("inverse of zero in Q(sqrt2,sqrt3)");
        if (is_rational()) return SurdScalar(c_[0].inverse());
        const SurdScalar others = galois(true, false) * galois(false, true) * galois(true, true);
        const SurdScalar n = *this * others;
        return others.scaled(n.c_[0].inverse());
    }

    friend SurdScalar operator/(const SurdScalar& x, const SurdScalar& y) { return x * y.inverse(); }

    SurdScalar& operator+=(const SurdScalar& o)
    {
        for (std::size_t i = 0; i < 4; ++i)
            if (!o.c_[i].is_zero()) c_[i] += o.c_[i];
        return *this;
    }
    SurdScalar& operator-=(const SurdScalar& o)
    {
        for (std::size_t i = 0; i < 4; ++i)
            if (!o.c_[i].is_zero()) c_[i] -= o.c_[i];
        return *this;
    }
    SurdScalar& operator*=(const SurdScalar& o) { return *this = *this * o; }

    friend bool operator==(const SurdScalar&, const SurdScalar&) = default;

    /// Expression-grammar text, e.g. `1/2 + 3*sqrt(2) - sqrt(2)*sqrt(3)`.
    [[nodiscard]] std::string to_string() const
    {
        static constexpr const char* radicals[4] = {"", "sqrt(2)", "sqrt(3)", "sqrt(2)*sqrt(3)"};
        std::string out;
        for (int k = 0; k < 4; ++k) {
            const Rational& r = c_[static_cast<std::size_t>(k)];
            if (r.is_zero()) continue;
            const bool neg = r.sign() < 0;
            const Rational mag = neg ? -r : r;
            if (out.empty()) {
                if (neg) out += "-";
            } else {
                out += neg ? " - " : " + ";
            }
            if (k == 0) {
                out += mag.to_string();
            } else if (mag.is_one()) {
                out += radicals[k];
            } else {
                out += mag.to_string() + "*" + radicals[k];
            }
        }
        return out.empty() ? "0" : out;
    }

    [[nodiscard]] std::size_t hash() const
    {
        std::size_t h = 0;
        for (const auto& r : c_) h = h * 1000003u ^ r.hash();
        return h;
    }

private:
    std::array<Rational, 4> c_{};
};

/// re + i*im over Q(sqrt2, sqrt3).
class ComplexScalar {
public:
    ComplexScalar() = default;
    ComplexScalar(SurdScalar re) : re_(std::move(re)) {}  // NOLINT(implicit)
    ComplexScalar(Rational re) : re_(std::move(re)) {}    // NOLINT(implicit)
    ComplexScalar(int re) : re_(re) {}                    // NOLINT(implicit)
    ComplexScalar(SurdScalar re, SurdScalar im) : re_(std::move(re)), im_(std::move(im)) {}

    static ComplexScalar i() { return {SurdScalar(0), SurdScalar(1)}; }

    [[nodiscard]] const SurdScalar& re() const noexcept { return re_; }
    [[nodiscard]] const SurdScalar& im() const noexcept { return im_; }

    [[nodiscard]] bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }
    [[nodiscard]] bool is_real() const noexcept { return im_.is_zero(); }
    [[nodiscard]] bool is_one() const noexcept { return im_.is_zero() && re_.is_one(); }

    [[nodiscard]] ComplexScalar conj() const { return {re_, -im_}; }

    /// x * conj(x); imaginary part is zero.
    [[nodiscard]] SurdScalar abs2() const { return re_ * re_ + im_ * im_; }

    friend ComplexScalar operator+(const ComplexScalar& x, const ComplexScalar& y)
    {
        return {x.re_ + y.re_, x.im_ + y.im_};
    }
    friend ComplexScalar operator-(const ComplexScalar& x) { return {-x.re_, -x.im_}; }
    friend ComplexScalar operator-(const ComplexScalar& x, const ComplexScalar& y)
    {
        return {x.re_ - y.re_, x.im_ - y.im_};
    }
    friend ComplexScalar operator*(const ComplexScalar& x, const ComplexScalar& y)
    {
        if (x.im_.is_zero()) return {x.re_ * y.re_, x.re_ * y.im_};
        if (y.im_.is_zero()) return {x.re_ * y.re_, x.im_ * y.re_};
        return {x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_};
    }

    [[nodiscard]] ComplexScalar inverse() const
    {
        if (is_zero()) throw DivisionByZero("inverse of zero complex scalar");
        if (im_.is_zero()) return ComplexScalar(re_.inverse());
        const SurdScalar n = abs2().inverse();
        return {re_ * n, -(im_ * n)};
    }

    friend ComplexScalar operator/(const ComplexScalar& x, const ComplexScalar& y) { return x * y.inverse(); }

    ComplexScalar& operator+=(const ComplexScalar& o)
    {
        re_ += o.re_;
        if (!o.im_.is_zero()) im_ += o.im_;
        return *this;
    }
    ComplexScalar& operator-=(const ComplexScalar& o)
    {
        re_ -= o.re_;
        if (!o.im_.is_zero()) im_ -= o.im_;
        return *this;
    }
    ComplexScalar& operator*=(const ComplexScalar& o) { return *this = *this * o; }

    friend bool operator==(const ComplexScalar&, const ComplexScalar&) = default;

    /// Text accepted by the expression parser; compound values are parenthesized.
    [[nodiscard]] std::string to_string() const
    {
        if (im_.is_zero()) return re_.to_string();
        std::string imag;
        if (im_.is_one()) {
            imag = "i";
        } else if ((-im_).is_one()) {
            imag = "-i";
        } else {
            imag = "(" + im_.to_string() + ")*i";
        }
        if (re_.is_zero()) return imag;
        if (imag.front() == '-') return re_.to_string() + " - " + imag.substr(1);
        return re_.to_string() + " + " + imag;
    }

    [[nodiscard]] std::size_t hash() const { return re_.hash() * 7919u ^ im_.hash(); }

    friend std::ostream& operator<<(std::ostream& os, const ComplexScalar& x) { return os << x.to_string(); }

private:
    SurdScalar re_;
    SurdScalar im_;
};

using Scalar = ComplexScalar;

}  // namespace crnd

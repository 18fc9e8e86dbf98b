#pragma once

// Sparse truncated multivariate power series ("jets") at the origin.
//
// A jet stores every term of total degree <= order. Jets flagged `exact` are
// polynomials known in full: nothing was ever truncated away. Differentiating an
// exact jet keeps its order; differentiating a truncated one loses one order.
// Binary operations produce min(order) and are exact only if both inputs are
// and no term was dropped.

#include "crnd/scalar.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace crnd {

class JetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SpaceMismatch : public JetError {
public:
    using JetError::JetError;
};

/// Raised when a computation needs coefficients beyond the available order.
class OrderExhausted : public JetError {
public:
    using JetError::JetError;
};

enum class VarKind : std::uint8_t { holomorphic, antiholomorphic, real };

struct Variable {
    std::string name;  // antiholomorphic variables share the name of their partner
    VarKind kind = VarKind::holomorphic;
    std::size_t partner = 0;

    [[nodiscard]] std::string display() const
    {
        return kind == VarKind::antiholomorphic ? "conj(" + name + ")" : name;
    }
};

inline constexpr std::size_t kMaxVars = 32;

class VarSpace;
using SpacePtr = std::shared_ptr<const VarSpace>;

class VarSpace {
public:
    explicit VarSpace(std::vector<Variable> vars) : vars_(std::move(vars))
    {
        if (vars_.size() > kMaxVars)
            throw JetError("too many variables (" + std::to_string(vars_.size()) + " > "
                           + std::to_string(kMaxVars) + ")");
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            const auto& v = vars_[i];
            if (v.partner >= vars_.size()) throw JetError("variable partner out of range: " + v.name);
            const auto& p = vars_[v.partner];
            if (p.partner != i) throw JetError("partner relation is not an involution: " + v.name);
            if (v.kind == VarKind::real && v.partner != i) throw JetError("real variable must be self-paired");
            if (v.kind != VarKind::real && (p.kind == v.kind || p.kind == VarKind::real || p.name != v.name))
                throw JetError("complex variable needs a conjugate partner of the other kind: " + v.name);
            for (std::size_t j = 0; j < i; ++j)
                if (vars_[j].display() == v.display()) throw JetError("duplicate variable: " + v.display());
        }
    }

    /// (Z_1..Z_N, conj Z_1..conj Z_N).
    static SpacePtr ambient(const std::vector<std::string>& names)
    {
        const std::size_t n = names.size();
        std::vector<Variable> vars;
        for (std::size_t j = 0; j < n; ++j) vars.push_back({names[j], VarKind::holomorphic, n + j});
        for (std::size_t j = 0; j < n; ++j) vars.push_back({names[j], VarKind::antiholomorphic, j});
        return std::make_shared<const VarSpace>(std::move(vars));
    }

    /// (z_1..z_n, conj z_1..conj z_n, s_1..s_d) with s real.
    static SpacePtr graph(const std::vector<std::string>& cr_names, const std::vector<std::string>& real_names)
    {
        const std::size_t n = cr_names.size();
        std::vector<Variable> vars;
        for (std::size_t j = 0; j < n; ++j) vars.push_back({cr_names[j], VarKind::holomorphic, n + j});
        for (std::size_t j = 0; j < n; ++j) vars.push_back({cr_names[j], VarKind::antiholomorphic, j});
        for (std::size_t j = 0; j < real_names.size(); ++j)
            vars.push_back({real_names[j], VarKind::real, 2 * n + j});
        return std::make_shared<const VarSpace>(std::move(vars));
    }

    [[nodiscard]] std::size_t size() const noexcept { return vars_.size(); }
    [[nodiscard]] const Variable& operator[](std::size_t i) const { return vars_.at(i); }
    [[nodiscard]] const std::vector<Variable>& vars() const noexcept { return vars_; }

    /// Index of the holomorphic or real variable called `name`.
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const
    {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i].name == name && vars_[i].kind != VarKind::antiholomorphic) return i;
        return std::nullopt;
    }

    [[nodiscard]] std::size_t count(VarKind k) const
    {
        return static_cast<std::size_t>(
            std::count_if(vars_.begin(), vars_.end(), [k](const Variable& v) { return v.kind == k; }));
    }

    friend bool operator==(const VarSpace& a, const VarSpace& b)
    {
        if (a.vars_.size() != b.vars_.size()) return false;
        for (std::size_t i = 0; i < a.vars_.size(); ++i) {
            const auto& x = a.vars_[i];
            const auto& y = b.vars_[i];
            if (x.name != y.name || x.kind != y.kind || x.partner != y.partner) return false;
        }
        return true;
    }

private:
    std::vector<Variable> vars_;
};

inline bool same_space(const SpacePtr& a, const SpacePtr& b) { return a == b || *a == *b; }

/// Exponent vector with cached total degree.
struct Monomial {
    std::array<std::uint8_t, kMaxVars> e{};
    std::uint16_t deg = 0;

    static Monomial unit(std::size_t var)
    {
        Monomial m;
        m.e[var] = 1;
        m.deg = 1;
        return m;
    }

    friend Monomial operator+(const Monomial& a, const Monomial& b)
    {
        Monomial m;
        for (std::size_t i = 0; i < kMaxVars; ++i) {
            const unsigned s = static_cast<unsigned>(a.e[i]) + b.e[i];
            if (s > 255) throw JetError("exponent overflow");
            m.e[i] = static_cast<std::uint8_t>(s);
        }
        m.deg = static_cast<std::uint16_t>(a.deg + b.deg);
        return m;
    }

    friend bool operator==(const Monomial& a, const Monomial& b)
    {
        return a.deg == b.deg && std::memcmp(a.e.data(), b.e.data(), kMaxVars) == 0;
    }

    /// Graded order: lower total degree first, then larger leading exponents first.
    friend bool grlex_less(const Monomial& a, const Monomial& b)
    {
        if (a.deg != b.deg) return a.deg < b.deg;
        return std::memcmp(a.e.data(), b.e.data(), kMaxVars) > 0;
    }
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept
    {
        std::uint64_t h = 1469598103934665603ull;
        for (auto b : m.e) {
            h ^= b;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct Term {
    Monomial mono;
    Scalar coeff;

    friend bool operator==(const Term&, const Term&) = default;
};

class Jet {
public:
    Jet(SpacePtr space, int order, bool exact = true) : space_(std::move(space)), order_(order), exact_(exact)
    {
        if (!space_) throw JetError("jet without a variable space");
    }

    static Jet constant(SpacePtr space, int order, const Scalar& c)
    {
        Jet j(std::move(space), order);
        if (!c.is_zero() && order >= 0) j.terms_.push_back({Monomial{}, c});
        return j;
    }

    static Jet variable(SpacePtr space, int order, std::size_t var)
    {
        if (var >= space->size()) throw JetError("variable index out of range");
        Jet j(std::move(space), order);
        if (order >= 1) {
            j.terms_.push_back({Monomial::unit(var), Scalar(1)});
        } else {
            j.exact_ = false;
        }
        return j;
    }

    /// Canonicalizes arbitrary terms: merges duplicates, drops zeros and terms above `order`.
    static Jet from_terms(SpacePtr space, int order, std::vector<Term> terms, bool exact = true)
    {
        Jet j(std::move(space), order, exact);
        std::sort(terms.begin(), terms.end(),
                  [](const Term& a, const Term& b) { return grlex_less(a.mono, b.mono); });
        for (auto& t : terms) {
            if (t.mono.deg > order) {
                if (!t.coeff.is_zero()) j.exact_ = false;
                continue;
            }
            if (!j.terms_.empty() && j.terms_.back().mono == t.mono) {
                j.terms_.back().coeff += t.coeff;
                if (j.terms_.back().coeff.is_zero()) j.terms_.pop_back();
            } else if (!t.coeff.is_zero()) {
                j.terms_.push_back(std::move(t));
            }
        }
        return j;
    }

    [[nodiscard]] const SpacePtr& space() const noexcept { return space_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] bool exact() const noexcept { return exact_; }
    [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    [[nodiscard]] int max_degree() const noexcept { return terms_.empty() ? -1 : terms_.back().mono.deg; }
    [[nodiscard]] int min_degree() const noexcept
    {
        return terms_.empty() ? order_ + 1 : terms_.front().mono.deg;
    }

    [[nodiscard]] Scalar coeff(const Monomial& m) const
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Monomial& x) { return grlex_less(t.mono, x); });
        if (it != terms_.end() && it->mono == m) return it->coeff;
        return {};
    }

    /// Constant term (evaluation at the origin).
    [[nodiscard]] Scalar eval0() const
    {
        if (order_ < 0) throw OrderExhausted("evaluation of a jet with no remaining order");
        if (!terms_.empty() && terms_.front().mono.deg == 0) return terms_.front().coeff;
        return {};
    }

    /// True if the variable never appears.
    [[nodiscard]] bool independent_of(std::size_t var) const
    {
        return std::all_of(terms_.begin(), terms_.end(), [var](const Term& t) { return t.mono.e[var] == 0; });
    }

    [[nodiscard]] Jet truncated(int k) const
    {
        if (k >= order_) return *this;
        Jet r(space_, k, exact_);
        for (const auto& t : terms_) {
            if (t.mono.deg > k) {
                r.exact_ = false;
                break;
            }
            r.terms_.push_back(t);
        }
        return r;
    }

    /// Same jet with a different storage order (for exact jets, or to lower it).
    [[nodiscard]] Jet with_order(int k) const
    {
        if (k <= order_) return truncated(k);
        if (!exact_) throw OrderExhausted("cannot raise the order of a truncated jet");
        Jet r = *this;
        r.order_ = k;
        return r;
    }

    [[nodiscard]] Jet with_exact(bool e) const
    {
        Jet r = *this;
        r.exact_ = e;
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) { return combine(a, b, false); }
    friend Jet operator-(const Jet& a, const Jet& b) { return combine(a, b, true); }
    friend Jet operator-(const Jet& a)
    {
        Jet r = a;
        for (auto& t : r.terms_) t.coeff = -t.coeff;
        return r;
    }

    friend Jet operator*(const Scalar& c, const Jet& a)
    {
        Jet r(a.space_, a.order_, a.exact_);
        if (c.is_zero()) return r;
        r.terms_.reserve(a.terms_.size());
        for (const auto& t : a.terms_) r.terms_.push_back({t.mono, c * t.coeff});
        return r;
    }

    friend Jet operator*(const Jet& a, const Jet& b)
    {
        check_space(a, b, "jet_mul");
        const int k = std::min(a.order_, b.order_);
        Jet r(a.space_, k, a.exact_ && b.exact_);
        if (a.terms_.empty() || b.terms_.empty()) return r;
        if (a.max_degree() + b.max_degree() > k) r.exact_ = false;
        if (a.terms_.size() == 1 && a.terms_.front().mono.deg == 0) return scaled_into(r, a.terms_.front().coeff, b);
        if (b.terms_.size() == 1 && b.terms_.front().mono.deg == 0) return scaled_into(r, b.terms_.front().coeff, a);

        std::unordered_map<Monomial, Scalar, MonomialHash> acc;
        acc.reserve(a.terms_.size() * 4 + b.terms_.size() * 4);
        const int bmin = b.terms_.front().mono.deg;
        for (const auto& ta : a.terms_) {
            if (ta.mono.deg + bmin > k) break;
            for (const auto& tb : b.terms_) {
                if (ta.mono.deg + tb.mono.deg > k) break;
                auto [it, fresh] = acc.try_emplace(ta.mono + tb.mono);
                if (fresh) {
                    it->second = ta.coeff * tb.coeff;
                } else {
                    it->second += ta.coeff * tb.coeff;
                }
            }
        }
        r.terms_.reserve(acc.size());
        for (auto& [m, c] : acc)
            if (!c.is_zero()) r.terms_.push_back({m, std::move(c)});
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return grlex_less(x.mono, y.mono); });
        return r;
    }

    Jet& operator+=(const Jet& o) { return *this = *this + o; }
    Jet& operator-=(const Jet& o) { return *this = *this - o; }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    /// Formal partial derivative with respect to variable `var`.
    [[nodiscard]] Jet deriv(std::size_t var) const
    {
        if (var >= space_->size()) throw JetError("jet_deriv: unknown variable index");
        const int k = exact_ ? order_ : order_ - 1;
        Jet r(space_, std::max(k, -1), exact_);
        for (const auto& t : terms_) {
            const auto e = t.mono.e[var];
            if (e == 0) continue;
            Term nt{t.mono, t.coeff * Scalar(static_cast<int>(e))};
            nt.mono.e[var] = static_cast<std::uint8_t>(e - 1);
            nt.mono.deg = static_cast<std::uint16_t>(nt.mono.deg - 1);
            if (nt.mono.deg > r.order_) continue;
            r.terms_.push_back(std::move(nt));
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return grlex_less(x.mono, y.mono); });
        return r;
    }

    /// Formal complex conjugation: swaps each variable with its partner, conjugates coefficients.
    [[nodiscard]] Jet conj_swap() const
    {
        Jet r(space_, order_, exact_);
        r.terms_.reserve(terms_.size());
        const auto& vars = space_->vars();
        for (const auto& t : terms_) {
            Term nt{Monomial{}, t.coeff.conj()};
            nt.mono.deg = t.mono.deg;
            for (std::size_t i = 0; i < vars.size(); ++i) nt.mono.e[vars[i].partner] = t.mono.e[i];
            r.terms_.push_back(std::move(nt));
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& x, const Term& y) { return grlex_less(x.mono, y.mono); });
        return r;
    }

    /// Real under conjugation: conj_swap(j) == j.
    [[nodiscard]] bool is_real() const { return conj_swap().terms_ == terms_; }

    /// Exact inverse of a jet with nonzero constant term, by truncated Neumann series.
    [[nodiscard]] Jet invert_unit() const
    {
        const Scalar c0 = eval0();
        if (c0.is_zero()) throw JetError("jet_invert_unit: zero constant term");
        const Scalar c0inv = c0.inverse();
        Jet u = c0inv * *this - constant(space_, order_, 1);
        if (u.is_zero()) return constant(space_, order_, c0inv).with_exact(exact_);
        // (1 + u)^-1 = 1 - u(1 - u(1 - ...)); each pass fixes one more degree.
        const Jet one = constant(space_, order_, 1);
        Jet r = one;
        for (int pass = 0; pass < order_; ++pass) r = one - u * r;
        return (c0inv * r).with_exact(false);
    }

    /// Terms equal after truncating both to the smaller order.
    friend bool same_up_to_order(const Jet& a, const Jet& b)
    {
        if (!same_space(a.space_, b.space_)) return false;
        const int k = std::min(a.order_, b.order_);
        return a.truncated(k).terms_ == b.truncated(k).terms_;
    }

    friend bool operator==(const Jet& a, const Jet& b)
    {
        return same_space(a.space_, b.space_) && a.order_ == b.order_ && a.terms_ == b.terms_;
    }

    /// Expression-grammar text; reparsing over the same space gives the same jet.
    [[nodiscard]] std::string to_string() const
    {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& t : terms_) {
            std::string mono;
            for (std::size_t i = 0; i < space_->size(); ++i) {
                const auto e = t.mono.e[i];
                if (e == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += (*space_)[i].display();
                if (e > 1) mono += "^" + std::to_string(e);
            }
            const Scalar& c = t.coeff;
            const bool plain = c.is_real() && c.re().is_rational();
            if (plain) {
                const Rational& r = c.re().rational_part();
                const bool neg = r.sign() < 0;
                const Rational mag = neg ? -r : r;
                if (first) {
                    if (neg) out += "-";
                } else {
                    out += neg ? " - " : " + ";
                }
                // A leading "-" binds to the next base, so keep an explicit magnitude there.
                if (mono.empty() || !mag.is_one() || (first && neg)) {
                    out += mag.to_string();
                    if (!mono.empty()) out += "*";
                }
                out += mono;
            } else {
                if (!first) out += " + ";
                out += "(" + c.to_string() + ")";
                if (!mono.empty()) out += "*" + mono;
            }
            first = false;
        }
        return out;
    }

private:
    static void check_space(const Jet& a, const Jet& b, const char* what)
    {
        if (!same_space(a.space_, b.space_)) throw SpaceMismatch(std::string(what) + ": variable spaces differ");
    }

    static Jet scaled_into(Jet r, const Scalar& c, const Jet& a)
    {
        for (const auto& t : a.terms_) {
            if (t.mono.deg > r.order_) break;
            r.terms_.push_back({t.mono, c * t.coeff});
        }
        return r;
    }

    static Jet combine(const Jet& a, const Jet& b, bool subtract)
    {
        check_space(a, b, subtract ? "jet_sub" : "jet_add");
        const int k = std::min(a.order_, b.order_);
        Jet r(a.space_, k, a.exact_ && b.exact_);
        if ((a.order_ > k && a.max_degree() > k) || (b.order_ > k && b.max_degree() > k)) r.exact_ = false;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        auto push = [&](Term t) {
            if (t.mono.deg <= k && !t.coeff.is_zero()) r.terms_.push_back(std::move(t));
        };
        while (ia != a.terms_.end() || ib != b.terms_.end()) {
            if (ib == b.terms_.end() || (ia != a.terms_.end() && grlex_less(ia->mono, ib->mono))) {
                push(*ia++);
            } else if (ia == a.terms_.end() || grlex_less(ib->mono, ia->mono)) {
                push({ib->mono, subtract ? -ib->coeff : ib->coeff});
                ++ib;
            } else {
                push({ia->mono, subtract ? ia->coeff - ib->coeff : ia->coeff + ib->coeff});
                ++ia;
                ++ib;
            }
        }
        return r;
    }

    SpacePtr space_;
    int order_;
    bool exact_;
    std::vector<Term> terms_;
};

/// Largest order every jet in `js` supports.
inline int min_order(const std::vector<Jet>& js, int cap)
{
    int k = cap;
    for (const auto& j : js) k = std::min(k, j.order());
    return k;
}

}  // namespace crnd

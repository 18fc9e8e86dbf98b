#pragma once

// Substitution of jets into jets.

#include "crnd/jet.hpp"
#include "crnd/linalg.hpp"

#include <unordered_map>
#include <vector>

namespace crnd {

/// Evaluates outer jets at a fixed assignment (one jet per outer variable).
///
/// Monomial values are memoized, so substituting several outer jets that share
/// variables (a gradient, a tuple of defining functions) pays for each power
/// product once.
class Substitution {
public:
    /// `allow_constants` permits inner jets with nonzero constant term; only valid
    /// for exact (polynomial) outer jets.
    Substitution(SpacePtr outer_space, std::vector<Jet> assignment, bool allow_constants = false)
        : outer_space_(std::move(outer_space)), inner_(std::move(assignment)), allow_constants_(allow_constants)
    {
        if (inner_.size() != outer_space_->size())
            throw JetError("jet_compose: assignment covers " + std::to_string(inner_.size()) + " of "
                           + std::to_string(outer_space_->size()) + " variables");
        if (inner_.empty()) throw JetError("jet_compose: empty assignment");
        target_ = inner_.front().space();
        order_ = inner_.front().order();
        for (std::size_t v = 0; v < inner_.size(); ++v) {
            const Jet& j = inner_[v];
            if (!same_space(j.space(), target_)) throw SpaceMismatch("jet_compose: mixed target spaces");
            order_ = std::min(order_, j.order());
            if (!allow_constants_ && !j.is_zero() && j.min_degree() == 0)
                throw JetError("jet_compose: substituted jet for " + (*outer_space_)[v].display()
                               + " has nonzero constant term");
        }
    }

    [[nodiscard]] const SpacePtr& target() const noexcept { return target_; }
    [[nodiscard]] int order() const noexcept { return order_; }

    Jet apply(const Jet& outer)
    {
        if (!same_space(outer.space(), outer_space_)) throw SpaceMismatch("jet_compose: outer space mismatch");
        if (allow_constants_ && !outer.exact())
            throw JetError("jet_compose: constant terms in the assignment need a polynomial outer jet");
        const int k = outer.exact() ? order_ : std::min(order_, outer.order());
        bool exact = outer.exact();
        std::vector<Term> acc;
        for (const auto& t : outer.terms()) {
            if (!allow_constants_ && t.mono.deg > k) {
                // All-positive-degree factors push this term past the truncation.
                if (!hits_exact_zero(t.mono)) exact = false;
                continue;
            }
            const Jet& v = value(t.mono);
            if (!v.exact()) exact = false;
            for (const auto& vt : v.terms()) {
                if (vt.mono.deg > k) break;
                acc.push_back({vt.mono, t.coeff * vt.coeff});
            }
        }
        Jet r = Jet::from_terms(target_, k, std::move(acc), exact);
        return r;
    }

    std::vector<Jet> apply(const std::vector<Jet>& outers)
    {
        std::vector<Jet> out;
        out.reserve(outers.size());
        for (const auto& o : outers) out.push_back(apply(o));
        return out;
    }

private:
    bool hits_exact_zero(const Monomial& m) const
    {
        for (std::size_t v = 0; v < inner_.size(); ++v)
            if (m.e[v] > 0 && inner_[v].is_zero() && inner_[v].exact()) return true;
        return false;
    }

    const Jet& value(const Monomial& m)
    {
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
        if (m.deg == 0) return cache_.emplace(m, Jet::constant(target_, order_, 1)).first->second;
        std::size_t v = inner_.size();
        while (v-- > 0)
            if (m.e[v] > 0) break;
        Monomial prev = m;
        prev.e[v] = static_cast<std::uint8_t>(prev.e[v] - 1);
        prev.deg = static_cast<std::uint16_t>(prev.deg - 1);
        Jet r = value(prev) * inner_[v];
        return cache_.emplace(m, std::move(r)).first->second;
    }

    SpacePtr outer_space_;
    std::vector<Jet> inner_;
    bool allow_constants_;
    SpacePtr target_;
    int order_ = 0;
    std::unordered_map<Monomial, Jet, MonomialHash> cache_;
};

/// outer(assignment): exact to the working order; every substituted jet must vanish at 0.
inline Jet compose(const Jet& outer, const std::vector<Jet>& assignment)
{
    Substitution sub(outer.space(), assignment);
    return sub.apply(outer);
}

inline std::vector<Jet> compose(const std::vector<Jet>& outers, const std::vector<Jet>& assignment)
{
    if (outers.empty()) return {};
    Substitution sub(outers.front().space(), assignment);
    return sub.apply(outers);
}

/// Polynomial substitution allowing constant terms (translations, affine maps).
inline Jet substitute_polynomial(const Jet& outer, const std::vector<Jet>& assignment)
{
    if (!outer.exact()) throw JetError("substitute_polynomial: outer jet is not an exact polynomial");
    Substitution sub(outer.space(), assignment, true);
    return sub.apply(outer);
}

/// Coefficient matrix of the degree-1 part: entry (i, j) = d f_i / d x_{cols[j]} at 0.
inline Matrix linear_part(const std::vector<Jet>& fs, const std::vector<std::size_t>& cols)
{
    Matrix m(fs.size(), Row(cols.size()));
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) m[i][j] = fs[i].coeff(Monomial::unit(cols[j]));
    return m;
}

/// Assignment of a holomorphic tuple and its conjugate onto an ambient (Z, conj Z) space.
inline std::vector<Jet> holomorphic_assignment(const SpacePtr& ambient, const std::vector<Jet>& hol)
{
    const std::size_t n = hol.size();
    if (ambient->size() != 2 * n) throw SpaceMismatch("holomorphic assignment: arity mismatch");
    std::vector<Jet> a;
    a.reserve(2 * n);
    for (const auto& h : hol) a.push_back(h);
    for (const auto& h : hol) a.push_back(h.conj_swap());
    return a;
}

/// Formal inverse of a holomorphic map F (components over an ambient space (Z, conj Z)).
///
/// Writes F = A Z + Q(Z) with Q of degree >= 2 and iterates G <- A^-1 (Z - Q(G)); each
/// pass fixes one more degree, so `order` passes reach the fixed point.
inline std::vector<Jet> map_inverse(const std::vector<Jet>& f)
{
    if (f.empty()) return {};
    const SpacePtr& space = f.front().space();
    const std::size_t n = f.size();
    if (space->size() != 2 * n) throw JetError("jet_map_inverse: expected N components over (Z, conj Z)");
    std::vector<std::size_t> hol(n);
    for (std::size_t j = 0; j < n; ++j) {
        hol[j] = j;
        if ((*space)[j].kind != VarKind::holomorphic) throw JetError("jet_map_inverse: bad variable layout");
    }
    const int order = min_order(f, f.front().order());
    for (const auto& fi : f) {
        if (!same_space(fi.space(), space)) throw SpaceMismatch("jet_map_inverse: mixed spaces");
        if (!fi.eval0().is_zero()) throw JetError("jet_map_inverse: component does not vanish at 0");
        for (std::size_t j = n; j < 2 * n; ++j)
            if (!fi.independent_of(j)) throw JetError("jet_map_inverse: map is not holomorphic");
    }
    const Matrix a = linear_part(f, hol);
    Matrix ainv;
    try {
        ainv = inverse(a);
    } catch (const SingularMatrix&) {
        throw SingularMatrix("jet_map_inverse: singular linear part");
    }

    std::vector<Jet> z;
    std::vector<Jet> quad;
    bool linear = true;
    for (std::size_t i = 0; i < n; ++i) z.push_back(Jet::variable(space, order, i));
    for (std::size_t i = 0; i < n; ++i) {
        Jet lin(space, order);
        for (std::size_t j = 0; j < n; ++j) lin += a[i][j] * z[j];
        quad.push_back(f[i].truncated(order) - lin);
        if (!quad.back().is_zero()) linear = false;
    }
    auto apply_ainv = [&](const std::vector<Jet>& v) {
        std::vector<Jet> out;
        for (std::size_t i = 0; i < n; ++i) {
            Jet acc(space, order);
            for (std::size_t j = 0; j < n; ++j)
                if (!ainv[i][j].is_zero()) acc += ainv[i][j] * v[j];
            out.push_back(std::move(acc));
        }
        return out;
    };

    std::vector<Jet> g = apply_ainv(z);
    if (linear) return g;
    for (int pass = 0; pass < order; ++pass) {
        const std::vector<Jet> qg = compose(quad, holomorphic_assignment(space, g));
        std::vector<Jet> rhs;
        for (std::size_t i = 0; i < n; ++i) rhs.push_back(z[i] - qg[i]);
        std::vector<Jet> next = apply_ainv(rhs);
        bool stable = true;
        for (std::size_t i = 0; i < n; ++i)
            if (next[i].terms() != g[i].terms()) stable = false;
        g = std::move(next);
        if (stable) break;
    }
    for (auto& gi : g) gi = gi.with_exact(false);
    return g;
}

}  // namespace crnd

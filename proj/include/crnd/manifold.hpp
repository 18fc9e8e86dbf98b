#pragma once

// Generic submanifolds and CR maps: extrinsic (rho = 0) and graph (Im w = phi(z, conj z, Re w))
// descriptions, recentering, conversion to graph form, and restriction of ambient jets to M.

#include "crnd/compose.hpp"
#include "crnd/expr.hpp"
#include "crnd/jet_matrix.hpp"
#include "crnd/linalg.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace crnd {

/// Invalid user input: a point off the manifold, a non-generic manifold, a map not into the target.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::size_t> holomorphic_indices(const VarSpace& s)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i].kind == VarKind::holomorphic) idx.push_back(i);
    return idx;
}

inline std::vector<std::string> holomorphic_names(const VarSpace& s)
{
    std::vector<std::string> names;
    for (const auto& v : s.vars())
        if (v.kind == VarKind::holomorphic) names.push_back(v.name);
    return names;
}

/// Constant jets for a point and its conjugate, laid out over an ambient (Z, conj Z) space.
inline std::vector<Jet> shifted_coordinates(const SpacePtr& ambient, const std::vector<Scalar>& p, int order)
{
    const std::size_t n = p.size();
    std::vector<Jet> a;
    for (std::size_t j = 0; j < n; ++j)
        a.push_back(Jet::variable(ambient, order, j) + Jet::constant(ambient, order, p[j]));
    for (std::size_t j = 0; j < n; ++j)
        a.push_back(Jet::variable(ambient, order, n + j) + Jet::constant(ambient, order, p[j].conj()));
    return a;
}

inline Scalar evaluate_at(const Jet& f, const std::vector<Scalar>& p)
{
    const SpacePtr& space = f.space();
    std::vector<Jet> a;
    for (const auto& x : p) a.push_back(Jet::constant(space, 0, x));
    for (const auto& x : p) a.push_back(Jet::constant(space, 0, x.conj()));
    return substitute_polynomial(f, a).eval0();
}

}  // namespace detail

/// Im w = phi(z, conj z, Re w), phi real with phi(0) = 0 and d phi(0) = 0.
struct GraphManifold {
    SpacePtr ambient;  // (z_1..z_n, w_1..w_d, conj z.., conj w..)
    SpacePtr space;    // (z_1..z_n, conj z_1..conj z_n, s_1..s_d)
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<Jet> phi;

    static GraphManifold make(const std::vector<std::string>& cr_names, const std::vector<std::string>& real_names,
                              std::vector<Jet> phi)
    {
        GraphManifold m;
        m.n = cr_names.size();
        m.d = real_names.size();
        std::vector<std::string> all = cr_names;
        all.insert(all.end(), real_names.begin(), real_names.end());
        m.ambient = VarSpace::ambient(all);
        m.space = VarSpace::graph(cr_names, real_names);
        m.phi = std::move(phi);
        m.validate();
        return m;
    }

    /// Parses phi over (z, conj z, s); the names in `real_names` denote Re w.
    static GraphManifold parse(const std::vector<std::string>& cr_names, const std::vector<std::string>& real_names,
                               const std::vector<std::string>& phi_text, int order)
    {
        if (phi_text.size() != real_names.size())
            throw InputError("graph manifold: need one phi per real variable (" + std::to_string(real_names.size())
                             + "), got " + std::to_string(phi_text.size()));
        const SpacePtr space = VarSpace::graph(cr_names, real_names);
        std::vector<Jet> phi;
        for (const auto& t : phi_text) phi.push_back(parse_jet(t, space, order));
        return make(cr_names, real_names, std::move(phi));
    }

    [[nodiscard]] int order() const { return min_order(phi, phi.empty() ? 0 : phi.front().order()); }

    void validate() const
    {
        if (d == 0) throw InputError("graph manifold: codimension must be positive");
        if (phi.size() != d) throw InputError("graph manifold: expected " + std::to_string(d) + " phi components");
        for (std::size_t mu = 0; mu < d; ++mu) {
            const Jet& f = phi[mu];
            if (!same_space(f.space(), space)) throw SpaceMismatch("graph manifold: phi over the wrong space");
            if (!f.is_real()) throw InputError("graph manifold: phi_" + std::to_string(mu + 1) + " is not real");
            if (!f.is_zero() && f.min_degree() < 2)
                throw InputError("graph manifold: phi_" + std::to_string(mu + 1)
                                 + " must vanish to second order at 0 (phi(0) = 0, d phi(0) = 0)");
        }
    }

    [[nodiscard]] std::size_t z_index(std::size_t j) const { return j; }
    [[nodiscard]] std::size_t zbar_index(std::size_t j) const { return n + j; }
    [[nodiscard]] std::size_t s_index(std::size_t mu) const { return 2 * n + mu; }

    /// The embedding (z, s) -> (z, s + i phi) and its conjugate, as an assignment for ambient jets.
    [[nodiscard]] std::vector<Jet> embedding() const
    {
        const int k = order();
        std::vector<Jet> a;
        for (std::size_t j = 0; j < n; ++j) a.push_back(Jet::variable(space, k, z_index(j)));
        for (std::size_t mu = 0; mu < d; ++mu)
            a.push_back(Jet::variable(space, k, s_index(mu)) + Scalar::i() * phi[mu]);
        for (std::size_t j = 0; j < n; ++j) a.push_back(Jet::variable(space, k, zbar_index(j)));
        for (std::size_t mu = 0; mu < d; ++mu)
            a.push_back(Jet::variable(space, k, s_index(mu)) - Scalar::i() * phi[mu]);
        return a;
    }
};

/// Restriction of ambient jets over (Z, conj Z) to M, i.e. substitution w = s + i phi.
class Restriction {
public:
    explicit Restriction(const GraphManifold& m) : sub_(m.ambient, m.embedding()) {}

    Jet operator()(const Jet& ambient) { return sub_.apply(ambient); }
    std::vector<Jet> operator()(const std::vector<Jet>& ambient) { return sub_.apply(ambient); }

private:
    Substitution sub_;
};

inline Jet restrict_to_M(const Jet& ambient, const GraphManifold& m)
{
    if (!same_space(ambient.space(), m.ambient)) throw SpaceMismatch("restrict_to_M: jet is not over (Z, conj Z)");
    return Restriction(m)(ambient);
}

/// rho(Z, conj Z) = 0 near a base point; rho real, generic at the base point.
struct ExtrinsicManifold {
    SpacePtr ambient;
    std::vector<Jet> rho;
    std::vector<Scalar> basepoint;

    [[nodiscard]] std::size_t N() const { return ambient->size() / 2; }
    [[nodiscard]] std::size_t d() const { return rho.size(); }
    [[nodiscard]] int order() const { return min_order(rho, rho.empty() ? 0 : rho.front().order()); }

    static ExtrinsicManifold parse(const std::vector<std::string>& names, const std::vector<std::string>& rho_text,
                                   std::vector<Scalar> basepoint, int order)
    {
        ExtrinsicManifold m;
        m.ambient = VarSpace::ambient(names);
        for (const auto& t : rho_text) m.rho.push_back(parse_jet(t, m.ambient, order));
        if (basepoint.empty()) basepoint.assign(names.size(), Scalar{});
        m.basepoint = std::move(basepoint);
        return m;
    }

    /// Complex gradient rho_Z at the base point (d x N).
    [[nodiscard]] Matrix gradient_at_basepoint() const
    {
        const std::size_t n = N();
        Matrix g(d(), Row(n));
        for (std::size_t l = 0; l < d(); ++l)
            for (std::size_t j = 0; j < n; ++j) {
                const Jet dj = rho[l].deriv(j);
                g[l][j] = at_origin() ? dj.eval0() : detail::evaluate_at(dj, basepoint);
            }
        return g;
    }

    [[nodiscard]] bool at_origin() const
    {
        for (const auto& x : basepoint)
            if (!x.is_zero()) return false;
        return true;
    }

    void validate() const
    {
        if (rho.empty()) throw InputError("extrinsic manifold: no defining functions");
        if (basepoint.size() != N())
            throw InputError("extrinsic manifold: base point has " + std::to_string(basepoint.size())
                             + " coordinates, expected " + std::to_string(N()));
        for (std::size_t l = 0; l < d(); ++l) {
            if (!same_space(rho[l].space(), ambient)) throw SpaceMismatch("extrinsic manifold: rho over wrong space");
            if (!rho[l].is_real())
                throw InputError("extrinsic manifold: rho_" + std::to_string(l + 1) + " is not real");
            const Scalar v = at_origin() ? rho[l].eval0() : detail::evaluate_at(rho[l], basepoint);
            if (!v.is_zero())
                throw InputError("base point is not on the manifold: rho_" + std::to_string(l + 1) + "(p) = "
                                 + v.to_string());
        }
        if (rank(gradient_at_basepoint(), N()) != d())
            throw InputError("manifold is not generic at the base point: complex gradients have rank "
                             + std::to_string(rank(gradient_at_basepoint(), N())) + " < "
                             + std::to_string(d()));
    }
};

/// Holomorphic polynomial map given by components over the source ambient space.
struct CRMap {
    SpacePtr source;
    std::vector<Jet> components;
    std::vector<Scalar> source_basepoint;
    std::vector<Scalar> target_basepoint;

    static CRMap parse(const SpacePtr& source_ambient, const std::vector<std::string>& text,
                       std::vector<Scalar> source_basepoint, std::vector<Scalar> target_basepoint, int order)
    {
        CRMap h;
        h.source = source_ambient;
        for (const auto& t : text) h.components.push_back(parse_jet(t, source_ambient, order));
        const std::size_t n = source_ambient->size() / 2;
        if (source_basepoint.empty()) source_basepoint.assign(n, Scalar{});
        if (target_basepoint.empty()) target_basepoint.assign(text.size(), Scalar{});
        h.source_basepoint = std::move(source_basepoint);
        h.target_basepoint = std::move(target_basepoint);
        h.validate();
        return h;
    }

    void validate() const
    {
        const std::size_t n = source->size() / 2;
        for (std::size_t nu = 0; nu < components.size(); ++nu)
            for (std::size_t j = n; j < 2 * n; ++j)
                if (!components[nu].independent_of(j))
                    throw InputError("map component " + std::to_string(nu + 1)
                                     + " is not holomorphic (uses " + (*source)[j].display() + ")");
        if (source_basepoint.size() != n) throw InputError("map: source base point has the wrong arity");
        if (target_basepoint.size() != components.size())
            throw InputError("map: target base point has the wrong arity");
    }
};

/// Translates an extrinsic manifold so its base point becomes the origin.
inline ExtrinsicManifold recenter(const ExtrinsicManifold& m)
{
    m.validate();
    if (m.at_origin()) return m;
    ExtrinsicManifold r;
    r.ambient = m.ambient;
    const auto shift = detail::shifted_coordinates(m.ambient, m.basepoint, m.order());
    for (const auto& f : m.rho) {
        Jet g = substitute_polynomial(f, shift);
        if (!g.eval0().is_zero()) throw InputError("base point is not on the manifold");
        r.rho.push_back(std::move(g));
    }
    r.basepoint.assign(m.N(), Scalar{});
    return r;
}

/// H(zeta + p) - p'; requires H(p) = p' exactly.
inline CRMap recenter(const CRMap& h)
{
    h.validate();
    CRMap r;
    r.source = h.source;
    r.source_basepoint.assign(h.source_basepoint.size(), Scalar{});
    r.target_basepoint.assign(h.target_basepoint.size(), Scalar{});
    const int k = min_order(h.components, h.components.empty() ? 0 : h.components.front().order());
    const auto shift = detail::shifted_coordinates(h.source, h.source_basepoint, k);
    for (std::size_t nu = 0; nu < h.components.size(); ++nu) {
        Jet g = substitute_polynomial(h.components[nu], shift);
        const Scalar v = g.eval0();
        if (v != h.target_basepoint[nu])
            throw InputError("map does not send the source base point to the target base point: H_"
                             + std::to_string(nu + 1) + "(p) = " + v.to_string() + ", expected "
                             + h.target_basepoint[nu].to_string());
        r.components.push_back(g - Jet::constant(h.source, g.order(), v));
    }
    return r;
}

/// Graph form of a recentered extrinsic manifold plus the linear coordinate change used.
struct GraphConversion {
    GraphManifold graph;
    Matrix change;          // new coordinates = change * old coordinates
    Matrix inverse_change;  // old = inverse_change * new
    std::vector<std::size_t> pivots;
    int newton_iterations = 0;
};

/// Linear holomorphic substitution Z = A Y over the ambient spaces (old) <- (new).
inline std::vector<Jet> linear_assignment(const SpacePtr& new_ambient, const Matrix& a, int order)
{
    const std::size_t n = a.size();
    std::vector<Jet> hol;
    for (std::size_t j = 0; j < n; ++j) {
        Jet acc(new_ambient, order);
        for (std::size_t k = 0; k < n; ++k)
            if (!a[j][k].is_zero()) acc += a[j][k] * Jet::variable(new_ambient, order, k);
        hol.push_back(std::move(acc));
    }
    return holomorphic_assignment(new_ambient, hol);
}

/// Rewrites rho = 0 (base point 0) as Im w = phi(z, conj z, Re w).
///
/// Pivoted elimination on rho_Z(0) picks d pivot columns; the remaining coordinates become z
/// and w_mu = 2i (rho_Z(0) Z)_mu, so that the linear part of rho_mu is exactly Im w_mu. Then
/// rho(z, s + i t) = 0 is solved for t by Newton iteration on jets, which doubles the number of
/// correct degrees per step.
inline GraphConversion extrinsic_to_graph(const ExtrinsicManifold& m)
{
    m.validate();
    if (!m.at_origin()) throw InputError("extrinsic_to_graph: recenter the manifold first");
    const std::size_t nn = m.N();
    const std::size_t d = m.d();
    const int order = m.order();
    const Matrix a = m.gradient_at_basepoint();
    const RowBasis basis = row_space(a, nn);
    if (basis.rank() != d) throw InputError("manifold is not generic at the base point");
    const std::vector<std::size_t> pivots = basis.pivots();

    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < nn; ++j)
        if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) free_cols.push_back(j);
    const std::size_t n = free_cols.size();

    Matrix change(nn, Row(nn));
    for (std::size_t j = 0; j < n; ++j) change[j][free_cols[j]] = 1;
    for (std::size_t mu = 0; mu < d; ++mu)
        for (std::size_t k = 0; k < nn; ++k) change[n + mu][k] = Scalar(2) * Scalar::i() * a[mu][k];
    const Matrix inv = inverse(change);

    std::vector<std::string> cr_names;
    std::vector<std::string> real_names;
    for (auto j : free_cols) cr_names.push_back((*m.ambient)[j].name);
    for (auto j : pivots) real_names.push_back((*m.ambient)[j].name);

    GraphManifold g;
    g.n = n;
    g.d = d;
    std::vector<std::string> all = cr_names;
    all.insert(all.end(), real_names.begin(), real_names.end());
    g.ambient = VarSpace::ambient(all);
    g.space = VarSpace::graph(cr_names, real_names);

    const std::vector<Jet> rho_new = compose(m.rho, linear_assignment(g.ambient, inv, order));

    // Newton iteration for t(z, conj z, s).
    std::vector<Jet> t(d, Jet(g.space, order));
    int iterations = 0;
    const int max_iterations = 4 + 2 * static_cast<int>(std::bit_width(static_cast<unsigned>(order + 1)));
    // rho_mu followed by d rho_mu / d t_nu = i (rho_{w_nu} - rho_{conj w_nu}).
    std::vector<Jet> outers = rho_new;
    for (std::size_t mu = 0; mu < d; ++mu)
        for (std::size_t nu = 0; nu < d; ++nu) {
            const Jet& r = rho_new[mu];
            outers.push_back(Scalar::i() * (r.deriv(n + nu) - r.deriv(nn + n + nu)));
        }
    for (;;) {
        std::vector<Jet> assign;
        for (std::size_t j = 0; j < n; ++j) assign.push_back(Jet::variable(g.space, order, j));
        for (std::size_t mu = 0; mu < d; ++mu)
            assign.push_back(Jet::variable(g.space, order, 2 * n + mu) + Scalar::i() * t[mu]);
        for (std::size_t j = 0; j < n; ++j) assign.push_back(Jet::variable(g.space, order, n + j));
        for (std::size_t mu = 0; mu < d; ++mu)
            assign.push_back(Jet::variable(g.space, order, 2 * n + mu) - Scalar::i() * t[mu]);
        Substitution sub(g.ambient, assign);
        std::vector<Jet> vals = sub.apply(outers);
        bool solved = true;
        for (std::size_t mu = 0; mu < d; ++mu)
            if (!vals[mu].truncated(order).is_zero()) solved = false;
        if (solved) break;
        if (++iterations > max_iterations)
            throw std::logic_error("extrinsic_to_graph: Newton iteration did not converge");
        JetMatrix jac(g.space, d, d, order);
        for (std::size_t mu = 0; mu < d; ++mu)
            for (std::size_t nu = 0; nu < d; ++nu) jac(mu, nu) = vals[d + mu * d + nu];
        const JetMatrix jinv = jac.invert_unit();
        for (std::size_t mu = 0; mu < d; ++mu) {
            Jet step(g.space, order);
            for (std::size_t nu = 0; nu < d; ++nu) step += jinv(mu, nu) * vals[nu];
            t[mu] = (t[mu] - step).truncated(order);
        }
    }
    for (const auto& x : t)
        if (!x.is_real()) throw std::logic_error("extrinsic_to_graph: solution is not real");
    g.phi = std::move(t);
    g.validate();
    return {std::move(g), change, inv, pivots, iterations};
}

/// Expresses a recentered map in the coordinates of a graph conversion: H o inverse_change.
inline CRMap map_to_graph_coordinates(const CRMap& h, const GraphConversion& conv)
{
    CRMap r;
    r.source = conv.graph.ambient;
    const int k = min_order(h.components, h.components.empty() ? 0 : h.components.front().order());
    r.components = compose(h.components, linear_assignment(conv.graph.ambient, conv.inverse_change, k));
    r.source_basepoint.assign(conv.graph.n + conv.graph.d, Scalar{});
    r.target_basepoint = h.target_basepoint;
    return r;
}

/// rho = (w - conj w)/(2i) - phi(z, conj z, (w + conj w)/2).
inline ExtrinsicManifold graph_to_extrinsic(const GraphManifold& m)
{
    const int k = m.order();
    std::vector<Jet> assign;
    for (std::size_t j = 0; j < m.n; ++j) assign.push_back(Jet::variable(m.ambient, k, j));
    for (std::size_t j = 0; j < m.n; ++j) assign.push_back(Jet::variable(m.ambient, k, m.n + m.d + j));
    const Scalar half = Scalar(Rational(1, 2));
    const Scalar inv2i = (Scalar(2) * Scalar::i()).inverse();
    for (std::size_t mu = 0; mu < m.d; ++mu) {
        const Jet w = Jet::variable(m.ambient, k, m.n + mu);
        const Jet wb = Jet::variable(m.ambient, k, 2 * m.n + m.d + mu);
        assign.push_back(half * (w + wb));
    }
    ExtrinsicManifold e;
    e.ambient = m.ambient;
    Substitution sub(m.space, assign);
    for (std::size_t mu = 0; mu < m.d; ++mu) {
        const Jet w = Jet::variable(m.ambient, k, m.n + mu);
        const Jet wb = Jet::variable(m.ambient, k, 2 * m.n + m.d + mu);
        e.rho.push_back(inv2i * (w - wb) - sub.apply(m.phi[mu]));
    }
    e.basepoint.assign(m.n + m.d, Scalar{});
    return e;
}

/// Outcome of checking rho'(H, conj H) = 0 on M.
struct TangencyCertificate {
    bool ok = true;
    std::vector<Jet> residuals;
    std::string diagnostic;
};

/// Restricts the holomorphic map components to M (jets over (z, conj z, s)).
inline std::vector<Jet> restrict_map(const CRMap& h, const GraphManifold& source)
{
    if (!same_space(h.source, source.ambient)) throw SpaceMismatch("map and source manifold use different spaces");
    return Restriction(source)(h.components);
}

/// Certificate from the residuals rho'_l(h, conj h) on M.
inline TangencyCertificate certify_residuals(std::vector<Jet> residuals)
{
    TangencyCertificate cert;
    cert.residuals = std::move(residuals);
    for (std::size_t l = 0; l < cert.residuals.size(); ++l) {
        const Jet& r = cert.residuals[l];
        if (r.is_zero()) continue;
        cert.ok = false;
        if (cert.diagnostic.empty()) {
            const Jet lead = Jet::from_terms(r.space(), r.order(), {r.terms().front()});
            std::ostringstream os;
            os << "map does not send M into the target: rho'_" << (l + 1)
               << "(H, conj H) restricted to M has the nonzero term " << lead.to_string();
            cert.diagnostic = os.str();
        }
    }
    return cert;
}

inline void check_map_arity(const CRMap& h, const ExtrinsicManifold& target)
{
    if (h.components.size() != target.N())
        throw InputError("map has " + std::to_string(h.components.size()) + " components but the target lives in C^"
                         + std::to_string(target.N()));
}

inline TangencyCertificate verify_maps_into_target(const CRMap& h, const GraphManifold& source,
                                                   const ExtrinsicManifold& target)
{
    check_map_arity(h, target);
    const std::vector<Jet> hr = restrict_map(h, source);
    return certify_residuals(compose(target.rho, holomorphic_assignment(target.ambient, hr)));
}

}  // namespace crnd

#pragma once

// CR vector fields, the E_k ladder and k0 detection, and the target coordinate-change law.

#include "crnd/compose.hpp"
#include "crnd/jet_matrix.hpp"
#include "crnd/linalg.hpp"
#include "crnd/manifold.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace crnd {

/// sum_j dzbar[j] d/d conj z_j + sum_mu ds[mu] d/d s_mu, coefficients over (z, conj z, s).
struct CRVectorField {
    std::vector<Jet> dzbar;
    std::vector<Jet> ds;
};

/// Lambda_j = d/d conj z_j + sum_nu b_{j nu} d/d s_nu with B = -i phi_zbar^T (I + i P)^-1,
/// where (phi_zbar^T)_{j mu} = d phi_mu / d conj z_j and P_{mu nu} = d phi_nu / d s_mu.
/// With this orientation Lambda_j annihilates s_nu + i phi_nu for every nu.
inline std::vector<CRVectorField> cr_basis(const GraphManifold& m)
{
    m.validate();
    const int k = m.order();
    const std::size_t n = m.n;
    const std::size_t d = m.d;
    JetMatrix phi_zbar_t(m.space, n, d, k);
    JetMatrix a = JetMatrix::identity(m.space, d, k);
    for (std::size_t mu = 0; mu < d; ++mu) {
        for (std::size_t j = 0; j < n; ++j) phi_zbar_t(j, mu) = m.phi[mu].deriv(m.zbar_index(j));
        for (std::size_t nu = 0; nu < d; ++nu)
            a(mu, nu) = a(mu, nu) + Scalar::i() * m.phi[nu].deriv(m.s_index(mu));
    }
    const JetMatrix b = (-Scalar::i()) * (phi_zbar_t * a.invert_unit());
    std::vector<CRVectorField> fields;
    for (std::size_t j = 0; j < n; ++j) {
        CRVectorField f;
        for (std::size_t l = 0; l < n; ++l) f.dzbar.push_back(Jet::constant(m.space, k, l == j ? 1 : 0));
        for (std::size_t nu = 0; nu < d; ++nu) f.ds.push_back(b(j, nu));
        fields.push_back(std::move(f));
    }
    return fields;
}

/// Applies a CR field to a jet over (z, conj z, s).
inline Jet apply_field(const CRVectorField& field, const Jet& f)
{
    const std::size_t n = field.dzbar.size();
    const std::size_t d = field.ds.size();
    if (f.space()->size() != 2 * n + d) throw SpaceMismatch("apply_field: jet is not over (z, conj z, s)");
    std::optional<Jet> acc;
    auto add = [&](const Jet& coeff, std::size_t var) {
        if (coeff.is_zero() && coeff.exact()) return;
        const Jet df = f.deriv(var);
        Jet term = coeff.exact() && coeff.max_degree() == 0 && coeff.eval0() == Scalar(1) ? df : coeff * df;
        acc = acc ? *acc + term : std::move(term);
    };
    for (std::size_t j = 0; j < n; ++j) add(field.dzbar[j], n + j);
    for (std::size_t mu = 0; mu < d; ++mu) add(field.ds[mu], 2 * n + mu);
    if (!acc) return Jet(f.space(), f.order());
    return *acc;
}

/// rho'_l(h, conj h) and the pulled-back gradient, sharing one substitution.
struct Pullback {
    std::vector<Jet> residuals;
    JetMatrix gradient{nullptr, 0, 0, 0};
};

inline Pullback pull_back_target(const ExtrinsicManifold& target, const std::vector<Jet>& h_on_M)
{
    const std::size_t nn = target.N();
    if (h_on_M.size() != nn) throw InputError("gradient_pullback: map arity does not match the target");
    std::vector<Jet> outers = target.rho;
    for (const auto& r : target.rho)
        for (std::size_t nu = 0; nu < nn; ++nu) outers.push_back(r.deriv(nu));
    Substitution sub(target.ambient, holomorphic_assignment(target.ambient, h_on_M));
    std::vector<Jet> vals = sub.apply(outers);
    const std::size_t d = target.d();
    Pullback p;
    p.residuals.assign(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(d));
    p.gradient = JetMatrix(h_on_M.front().space(), d, nn, sub.order());
    for (std::size_t l = 0; l < d; ++l)
        for (std::size_t nu = 0; nu < nn; ++nu) p.gradient(l, nu) = std::move(vals[d + l * nn + nu]);
    return p;
}

/// Entry (l, nu) is d rho'_l / d Z'_nu evaluated at (h, conj h), with h the map restricted to M.
inline JetMatrix gradient_pullback(const ExtrinsicManifold& target, const std::vector<Jet>& h_on_M)
{
    return pull_back_target(target, h_on_M).gradient;
}

using Multiindex = std::vector<unsigned>;

/// All multiindices of length n and weight k, lexicographically descending (e_1 first).
inline std::vector<Multiindex> multiindices(std::size_t n, unsigned k)
{
    std::vector<Multiindex> out;
    if (n == 0) {
        if (k == 0) out.emplace_back();
        return out;
    }
    Multiindex a(n, 0);
    auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
        if (pos + 1 == n) {
            a[pos] = left;
            out.push_back(a);
            return;
        }
        for (unsigned v = left + 1; v-- > 0;) {
            a[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    rec(rec, 0, k);
    return out;
}

inline unsigned weight(const Multiindex& a)
{
    unsigned w = 0;
    for (auto x : a) w += x;
    return w;
}

inline std::string multiindex_string(const Multiindex& a)
{
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
    return s + ")";
}

/// A generator of E_k: the row Lambda^alpha rho'_{l Z'}(h, conj h) at 0.
struct Witness {
    Multiindex alpha;
    std::size_t l = 0;
    Row row;
};

struct LadderStep {
    int k = 0;
    std::size_t dim = 0;
    std::size_t examined = 0;  // multiindices of weight k
    std::vector<Witness> added;
};

struct EkLadder {
    std::size_t width = 0;
    int max_order = 0;
    std::vector<LadderStep> steps;  // k = 0, 1, ...; may stop early once E_k is everything

    /// dim E_k, also for k past an early stop.
    [[nodiscard]] std::size_t dim(int k) const
    {
        if (steps.empty()) return 0;
        if (k < static_cast<int>(steps.size())) return steps[static_cast<std::size_t>(k)].dim;
        return steps.back().dim;
    }

    [[nodiscard]] std::vector<std::size_t> dims(int up_to) const
    {
        std::vector<std::size_t> v;
        for (int k = 0; k <= up_to; ++k) v.push_back(dim(k));
        return v;
    }

    /// Spanning witnesses with |alpha| <= k.
    [[nodiscard]] std::vector<Witness> witnesses(int k) const
    {
        std::vector<Witness> out;
        for (const auto& s : steps)
            if (s.k <= k) out.insert(out.end(), s.added.begin(), s.added.end());
        return out;
    }

    [[nodiscard]] Matrix generators(int k) const
    {
        Matrix m;
        for (const auto& w : witnesses(k)) m.push_back(w.row);
        return m;
    }
};

/// Builds E_0 .. E_{K_max}; with `stop_when_full` the ladder ends at the first k with E_k = C^{N'}.
inline EkLadder ek_spaces(const JetMatrix& grad, const std::vector<CRVectorField>& fields, int k_max,
                          bool stop_when_full = true)
{
    EkLadder ladder;
    ladder.width = grad.cols();
    ladder.max_order = k_max;
    const std::size_t n = fields.size();
    RowBasis basis(grad.cols());
    std::map<Multiindex, std::vector<Jet>> prev;
    std::map<Multiindex, std::vector<Jet>> cur;
    for (int k = 0; k <= k_max; ++k) {
        const auto alphas = multiindices(n, static_cast<unsigned>(k));
        cur.clear();
        LadderStep step;
        step.k = k;
        step.examined = alphas.size();
        for (const auto& alpha : alphas) {
            std::vector<Jet> entries;
            if (k == 0) {
                for (std::size_t l = 0; l < grad.rows(); ++l)
                    for (std::size_t c = 0; c < grad.cols(); ++c) entries.push_back(grad(l, c));
            } else {
                std::size_t j = 0;
                while (alpha[j] == 0) ++j;
                Multiindex lower = alpha;
                --lower[j];
                for (const auto& e : prev.at(lower)) entries.push_back(apply_field(fields[j], e));
            }
            for (std::size_t l = 0; l < grad.rows(); ++l) {
                Row row(grad.cols());
                for (std::size_t c = 0; c < grad.cols(); ++c) {
                    const Jet& e = entries[l * grad.cols() + c];
                    if (e.order() < 0)
                        throw OrderExhausted("ek_spaces: working order exhausted at k = " + std::to_string(k)
                                             + "; raise the working order");
                    row[c] = e.eval0();
                }
                if (basis.insert(row)) step.added.push_back({alpha, l, std::move(row)});
            }
            cur.emplace(alpha, std::move(entries));
        }
        step.dim = basis.rank();
        ladder.steps.push_back(std::move(step));
        if (stop_when_full && basis.full()) break;
        prev.swap(cur);
    }
    return ladder;
}

struct NondegeneracyReport {
    bool nondegenerate = false;
    int k0 = -1;  // when nondegenerate
    int max_order = 0;
    EkLadder ladder;
    std::size_t multiindex_count = 0;  // #{beta : 1 <= |beta| <= k0}, or up to K_max when degenerate

    [[nodiscard]] std::string verdict() const
    {
        return nondegenerate ? "nondegenerate(" + std::to_string(k0) + ")"
                             : "degenerate_up_to(" + std::to_string(max_order) + ")";
    }
};

inline NondegeneracyReport nondegeneracy_order(const EkLadder& ladder, int k_max)
{
    NondegeneracyReport r;
    r.max_order = k_max;
    r.ladder = ladder;
    for (const auto& s : ladder.steps) {
        if (s.k > k_max) break;
        if (s.dim == ladder.width) {
            r.nondegenerate = true;
            r.k0 = s.k;
            break;
        }
    }
    const int upto = r.nondegenerate ? r.k0 : k_max;
    for (const auto& s : ladder.steps)
        if (s.k >= 1 && s.k <= upto) r.multiindex_count += s.examined;
    return r;
}

using SourceManifold = std::variant<GraphManifold, ExtrinsicManifold>;

/// Source in graph form at 0, recentered target, and the map in matching coordinates.
struct Problem {
    GraphManifold source;
    ExtrinsicManifold target;
    CRMap map;
    std::optional<GraphConversion> conversion;
};

inline Problem prepare(const SourceManifold& source, const ExtrinsicManifold& target, const CRMap& map)
{
    Problem p;
    p.target = recenter(target);
    CRMap h = recenter(map);
    if (const auto* g = std::get_if<GraphManifold>(&source)) {
        g->validate();
        for (const auto& x : map.source_basepoint)
            if (!x.is_zero()) throw InputError("graph-form source manifolds are based at 0");
        p.source = *g;
        p.map = std::move(h);
    } else {
        const auto& e = std::get<ExtrinsicManifold>(source);
        if (e.basepoint != map.source_basepoint)
            throw InputError("map source base point differs from the source manifold's base point");
        GraphConversion conv = extrinsic_to_graph(recenter(e));
        p.source = conv.graph;
        p.map = map_to_graph_coordinates(h, conv);
        p.conversion = std::move(conv);
    }
    if (!same_space(p.map.source, p.source.ambient))
        throw InputError("map variables do not match the source manifold variables");
    return p;
}

/// Result of the iterated tangency check: Lambda^alpha rho'_l(h, conj h) = 0 and Lambda_j h_nu = 0.
struct TangencyLadder {
    bool ok = true;
    int depth = 0;
    std::size_t checked = 0;
    std::string diagnostic;
};

inline TangencyLadder tangency_ladder(const std::vector<Jet>& residuals, const std::vector<Jet>& h_on_M,
                                      const std::vector<CRVectorField>& fields, int depth)
{
    TangencyLadder t;
    t.depth = depth;
    for (std::size_t j = 0; j < fields.size(); ++j)
        for (std::size_t nu = 0; nu < h_on_M.size(); ++nu) {
            ++t.checked;
            if (!apply_field(fields[j], h_on_M[nu]).is_zero() && t.ok) {
                t.ok = false;
                t.diagnostic = "Lambda_" + std::to_string(j + 1) + " H_" + std::to_string(nu + 1) + " is not zero";
            }
        }
    std::map<Multiindex, std::vector<Jet>> prev;
    std::map<Multiindex, std::vector<Jet>> cur;
    for (int k = 0; k <= depth; ++k) {
        cur.clear();
        for (const auto& alpha : multiindices(fields.size(), static_cast<unsigned>(k))) {
            std::vector<Jet> vals;
            if (k == 0) {
                vals = residuals;
            } else {
                std::size_t j = 0;
                while (alpha[j] == 0) ++j;
                Multiindex lower = alpha;
                --lower[j];
                for (const auto& e : prev.at(lower)) vals.push_back(apply_field(fields[j], e));
            }
            for (std::size_t l = 0; l < vals.size(); ++l) {
                ++t.checked;
                if (vals[l].order() < 0 && t.ok) {
                    t.ok = false;
                    t.diagnostic = "tangency ladder: working order exhausted at |alpha| = " + std::to_string(k);
                }
                if (!vals[l].is_zero() && t.ok) {
                    t.ok = false;
                    t.diagnostic = "Lambda^" + multiindex_string(alpha) + " rho'_" + std::to_string(l + 1)
                        + "(H, conj H) is not zero on M";
                }
            }
            cur.emplace(alpha, std::move(vals));
        }
        prev.swap(cur);
    }
    return t;
}

struct AnalysisOptions {
    int max_order = 10;
    int tangency_depth = 4;
    bool stop_when_full = true;
};

struct Analysis {
    Problem problem;
    TangencyCertificate tangency;
    TangencyLadder tangency_ladder;
    std::vector<CRVectorField> fields;
    JetMatrix gradient{nullptr, 0, 0, 0};
    NondegeneracyReport report;
};

/// Runs tangency verification, the CR basis, the pulled-back gradient and the E_k ladder.
inline Analysis analyze(Problem p, const AnalysisOptions& opt)
{
    Analysis a;
    check_map_arity(p.map, p.target);
    const std::vector<Jet> h = restrict_map(p.map, p.source);
    Pullback pb = pull_back_target(p.target, h);
    a.tangency = certify_residuals(std::move(pb.residuals));
    if (!a.tangency.ok) throw InputError(a.tangency.diagnostic);
    a.fields = cr_basis(p.source);
    a.gradient = std::move(pb.gradient);
    a.tangency_ladder = tangency_ladder(a.tangency.residuals, h, a.fields, opt.tangency_depth);
    a.report = nondegeneracy_order(ek_spaces(a.gradient, a.fields, opt.max_order, opt.stop_when_full),
                                   opt.max_order);
    a.problem = std::move(p);
    return a;
}

/// The identity map of M into itself.
inline Analysis manifold_nondegeneracy(const SourceManifold& m, const AnalysisOptions& opt)
{
    ExtrinsicManifold target;
    CRMap id;
    if (const auto* g = std::get_if<GraphManifold>(&m)) {
        target = graph_to_extrinsic(*g);
        id.source = g->ambient;
    } else {
        target = std::get<ExtrinsicManifold>(m);
        id.source = target.ambient;
    }
    const std::size_t nn = id.source->size() / 2;
    const int k = target.order();
    for (std::size_t j = 0; j < nn; ++j) id.components.push_back(Jet::variable(id.source, k, j));
    id.source_basepoint = target.basepoint;
    id.target_basepoint = target.basepoint;
    return analyze(prepare(m, target, id), opt);
}

/// Target and map after the holomorphic change Z~' = F(Z').
struct TransformedTarget {
    ExtrinsicManifold target;
    CRMap map;
    Matrix jacobian;  // dF/dZ'(0)
};

/// rho' o F^-1 and F o H; the target and map must already be recentered.
inline TransformedTarget transform_target(const ExtrinsicManifold& target, const std::vector<Jet>& f, const CRMap& h)
{
    if (!target.at_origin()) throw InputError("transform_target: recenter the target first");
    if (f.size() != target.N()) throw InputError("transform_target: F has the wrong number of components");
    std::vector<std::size_t> hol(target.N());
    for (std::size_t j = 0; j < hol.size(); ++j) hol[j] = j;
    TransformedTarget out;
    out.jacobian = linear_part(f, hol);
    const std::vector<Jet> g = map_inverse(f);
    out.target.ambient = target.ambient;
    out.target.rho = compose(target.rho, holomorphic_assignment(target.ambient, g));
    out.target.basepoint = target.basepoint;
    out.map = h;
    out.map.components = compose(f, holomorphic_assignment(target.ambient, h.components));
    return out;
}

struct LawCheck {
    bool holds = true;
    std::vector<bool> per_k;
    std::string diagnostic;
};

/// rowspace(E~_k) = rowspace(E_k J^-1) for k = 0..K_max, J = dF/dZ'(0).
inline LawCheck check_transformation_law(const EkLadder& original, const EkLadder& transformed, const Matrix& jacobian,
                                         int k_max)
{
    LawCheck c;
    const Matrix jinv = inverse(jacobian);
    for (int k = 0; k <= k_max; ++k) {
        Matrix expected;
        for (const auto& r : original.generators(k)) expected.push_back(row_times(r, jinv));
        const bool same = same_row_space(expected, transformed.generators(k), original.width);
        c.per_k.push_back(same);
        if (!same && c.holds) {
            c.holds = false;
            std::ostringstream os;
            os << "row spaces differ at k = " << k << " (dim " << original.dim(k) << " vs " << transformed.dim(k)
               << ")";
            c.diagnostic = os.str();
        }
    }
    return c;
}

}  // namespace crnd

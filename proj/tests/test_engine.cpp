#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace crnd;

namespace {

constexpr int kOrder = 7;

const Scalar& half_over_i()
{
    static const Scalar v = (Scalar(2) * Scalar::i()).inverse();
    return v;
}

GraphManifold graph(const std::string& phi, int order = kOrder)
{
    return GraphManifold::parse({"z"}, {"w"}, {phi}, order);
}

ExtrinsicManifold two_quadrics()
{
    return ExtrinsicManifold::parse(
        {"z", "w1", "w2"}, {"(w1 - conj(w1))*(-1/2*i) - z*conj(z)", "(w2 - conj(w2))*(-1/2*i) - z*conj(z)"}, {}, kOrder);
}

std::vector<Jet> on_M(const GraphManifold& m, const std::vector<std::string>& h)
{
    return restrict_map(CRMap::parse(m.ambient, h, {}, {}, m.order()), m);
}

Job corpus_job_named(const std::string& name)
{
    const auto& c = corpus();
    const auto it = std::find_if(c.begin(), c.end(), [&](const CorpusEntry& e) { return e.name == name; });
    if (it == c.end()) throw std::runtime_error("no corpus entry " + name);
    return corpus_job(*it);
}

Analysis run(const Instance& in, int k_max)
{
    AnalysisOptions opt;
    opt.max_order = k_max;
    opt.tangency_depth = 2;
    return analyze(prepare(in), opt);
}

Report without_timing(Report r)
{
    r.elapsed_ms = 0;
    r.job.clear();
    return r;
}

}  // namespace

TEST(CRBasis, Examples)
{
    const GraphManifold q = graph("z*conj(z)");
    const auto f = cr_basis(q);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0].dzbar[0].terms(), Jet::constant(q.space, kOrder, 1).terms());
    EXPECT_EQ(f[0].ds[0].terms(), parse_jet("-1*i*z", q.space, kOrder).terms());

    const GraphManifold m = graph("z^2*conj(z)^2");
    EXPECT_EQ(cr_basis(m)[0].ds[0].terms(), parse_jet("-2*i*z^2*conj(z)", m.space, kOrder).terms());

    const GraphManifold flat = GraphManifold::parse({"z1", "z2"}, {"w"}, {"0"}, kOrder);
    const auto ff = cr_basis(flat);
    ASSERT_EQ(ff.size(), 2u);
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_TRUE(ff[j].ds[0].is_zero());
        for (std::size_t l = 0; l < 2; ++l) EXPECT_EQ(ff[j].dzbar[l].eval0(), Scalar(j == l ? 1 : 0));
    }
}

TEST(CRBasis, MatchesTheClosedFormWhenPhiDependsOnS)
{
    // n = d = 1: Lambda = d/dzbar - i phi_zbar / (1 + i phi_s) d/ds.
    const GraphManifold m = graph("z*conj(z) + w*z*conj(z)", 5);
    const Jet phi_zbar = m.phi[0].deriv(m.zbar_index(0));
    const Jet phi_s = m.phi[0].deriv(m.s_index(0));
    const Jet expected = (-Scalar::i()) * phi_zbar * (Jet::constant(m.space, 5, 1) + Scalar::i() * phi_s).invert_unit();
    EXPECT_EQ(cr_basis(m)[0].ds[0].terms(), expected.terms());
}

TEST(ApplyField, Examples)
{
    const GraphManifold m = graph("z^2*conj(z)^2");
    const CRVectorField L = cr_basis(m)[0];
    const Jet f = parse_jet("-1*conj(z)^2", m.space, kOrder);
    EXPECT_EQ(apply_field(L, f).terms(), parse_jet("-2*conj(z)", m.space, kOrder).terms());
    EXPECT_EQ(apply_field(L, apply_field(L, f)).terms(), parse_jet("-2", m.space, kOrder).terms());
    EXPECT_TRUE(apply_field(L, restrict_to_M(parse_jet("w", m.ambient, kOrder), m)).is_zero());
    EXPECT_THROW(apply_field(L, parse_jet("w", m.ambient, kOrder)), SpaceMismatch);
}

TEST(ApplyField, AnnihilatesHolomorphicCoordinatesOnRandomCodimTwoGraphs)
{
    std::mt19937_64 rng(31);
    const int k = 5;
    for (int t = 0; t < 15; ++t) {
        const SpacePtr space = VarSpace::graph({"z1", "z2"}, {"w1", "w2"});
        std::vector<Jet> phi;
        for (int mu = 0; mu < 2; ++mu) {
            const Jet r = crnd::testing::random_jet(rng, space, k, 4, 8, t % 2 == 0);
            const Jet sym = r + r.conj_swap();
            std::vector<Term> high;
            for (const auto& term : sym.terms())
                if (term.mono.deg >= 2) high.push_back(term);
            phi.push_back(Jet::from_terms(space, k, std::move(high)));
        }
        const GraphManifold m = GraphManifold::make({"z1", "z2"}, {"w1", "w2"}, phi);
        const auto fields = cr_basis(m);
        Restriction restrict(m);
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t nu = 0; nu < 4; ++nu) {
                const Jet x = restrict(Jet::variable(m.ambient, k, nu));
                EXPECT_TRUE(apply_field(fields[j], x).is_zero()) << "trial " << t << " field " << j << " var " << nu;
            }
    }
}

TEST(ApplyField, LeibnizRule)
{
    std::mt19937_64 rng(37);
    const GraphManifold m = graph("z*conj(z) + w*z^2*conj(z) + w*z*conj(z)^2", 6);
    const CRVectorField L = cr_basis(m)[0];
    for (int t = 0; t < 30; ++t) {
        const Jet f = crnd::testing::random_jet(rng, m.space, 6, 3, 5);
        const Jet g = crnd::testing::random_jet(rng, m.space, 6, 3, 5);
        const Jet lhs = apply_field(L, f * g);
        const Jet rhs = apply_field(L, f) * g + f * apply_field(L, g);
        EXPECT_EQ(lhs.truncated(5).terms(), rhs.truncated(5).terms());
    }
}

TEST(GradientPullback, Examples)
{
    const GraphManifold src = graph("z^2*conj(z)^2");
    const ExtrinsicManifold q = graph_to_extrinsic(graph("z*conj(z)"));
    const JetMatrix g = gradient_pullback(q, on_M(src, {"z^2", "w"}));
    ASSERT_EQ(g.rows(), 1u);
    EXPECT_EQ(g(0, 0).terms(), parse_jet("-1*conj(z)^2", src.space, kOrder).terms());
    EXPECT_EQ(g(0, 1).terms(), Jet::constant(src.space, kOrder, half_over_i()).terms());

    const GraphManifold quad = graph("z*conj(z)");
    const JetMatrix g2 = gradient_pullback(two_quadrics(), on_M(quad, {"z", "w", "w"}));
    const Jet mzb = parse_jet("-1*conj(z)", quad.space, kOrder);
    const Jet c = Jet::constant(quad.space, kOrder, half_over_i());
    EXPECT_EQ(g2(0, 0).terms(), mzb.terms());
    EXPECT_EQ(g2(0, 1).terms(), c.terms());
    EXPECT_TRUE(g2(0, 2).is_zero());
    EXPECT_EQ(g2(1, 0).terms(), mzb.terms());
    EXPECT_TRUE(g2(1, 1).is_zero());
    EXPECT_EQ(g2(1, 2).terms(), c.terms());

    const ExtrinsicManifold flat = ExtrinsicManifold::parse({"z", "w"}, {"(w - conj(w))*(-1/2*i)"}, {}, kOrder);
    const JetMatrix g3 = gradient_pullback(flat, on_M(quad, {"0", "0"}));
    EXPECT_TRUE(g3(0, 0).is_zero());
    EXPECT_EQ(g3(0, 1).terms(), c.terms());
}

TEST(GradientPullback, TwistedQuadric)
{
    const Instance in = instantiate(corpus_job_named("twisted-quadric"), 6);
    const Problem p = prepare(in);
    const JetMatrix g = gradient_pullback(p.target, restrict_map(p.map, p.source));
    const SpacePtr& s = p.source.space;
    EXPECT_EQ(g(0, 0).terms(), parse_jet("-1*conj(z)", s, in.order).terms());
    EXPECT_EQ(g(0, 1).terms(), parse_jet("2*z*conj(z)", s, in.order).terms());
    EXPECT_EQ(g(0, 2).terms(), Jet::constant(s, in.order, half_over_i()).terms());
}

TEST(EkSpaces, QuarticIntoQuadric)
{
    const GraphManifold src = graph("z^2*conj(z)^2");
    const JetMatrix g = gradient_pullback(graph_to_extrinsic(graph("z*conj(z)")), on_M(src, {"z^2", "w"}));
    const EkLadder ladder = ek_spaces(g, cr_basis(src), 4);
    EXPECT_EQ(ladder.dims(2), (std::vector<std::size_t>{1, 1, 2}));
    const auto w = ladder.witnesses(2);
    ASSERT_EQ(w.size(), 2u);
    EXPECT_EQ(w[0].row, (Row{Scalar(), half_over_i()}));
    EXPECT_EQ(w[1].alpha, Multiindex{2});
    EXPECT_EQ(w[1].row, (Row{Scalar(-2), Scalar()}));
    EXPECT_EQ(ladder.steps.size(), 3u);
    const NondegeneracyReport r = nondegeneracy_order(ladder, 4);
    EXPECT_EQ(r.verdict(), "nondegenerate(2)");
    EXPECT_EQ(r.multiindex_count, 2u);
}

TEST(EkSpaces, QuadricIntoTwoQuadrics)
{
    const GraphManifold quad = graph("z*conj(z)");
    const EkLadder ladder = ek_spaces(gradient_pullback(two_quadrics(), on_M(quad, {"z", "w", "w"})), cr_basis(quad), 4);
    EXPECT_EQ(ladder.dims(1), (std::vector<std::size_t>{2, 3}));
    const auto w = ladder.witnesses(1);
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[2].row, (Row{Scalar(-1), Scalar(), Scalar()}));
    EXPECT_EQ(nondegeneracy_order(ladder, 4).verdict(), "nondegenerate(1)");
}

TEST(EkSpaces, ZeroMapIntoFlatTarget)
{
    const GraphManifold quad = GraphManifold::parse({"z1", "z2"}, {"w"}, {"z1*conj(z1) + z2*conj(z2)"}, kOrder);
    const ExtrinsicManifold flat =
        ExtrinsicManifold::parse({"a", "b", "w"}, {"(w - conj(w))*(-1/2*i)"}, {}, kOrder);
    const EkLadder ladder = ek_spaces(gradient_pullback(flat, on_M(quad, {"0", "0", "0"})), cr_basis(quad), 5);
    EXPECT_EQ(ladder.dims(5), (std::vector<std::size_t>(6, 1)));
    EXPECT_EQ(ladder.steps.size(), 6u);
    const NondegeneracyReport r = nondegeneracy_order(ladder, 5);
    EXPECT_EQ(r.verdict(), "degenerate_up_to(5)");
    // Weights 1..5 in two variables: 2 + 3 + 4 + 5 + 6.
    EXPECT_EQ(r.multiindex_count, 20u);
}

TEST(EkSpaces, StopWhenFullOnlyShortensTheLadder)
{
    const GraphManifold src = graph("z^2*conj(z)^2");
    const JetMatrix g = gradient_pullback(graph_to_extrinsic(graph("z*conj(z)")), on_M(src, {"z^2", "w"}));
    const EkLadder early = ek_spaces(g, cr_basis(src), 4, true);
    const EkLadder full = ek_spaces(g, cr_basis(src), 4, false);
    EXPECT_EQ(full.steps.size(), 5u);
    EXPECT_EQ(early.dims(4), full.dims(4));
    EXPECT_EQ(nondegeneracy_order(early, 4).verdict(), nondegeneracy_order(full, 4).verdict());
}

TEST(EkSpaces, OrderExhaustion)
{
    const GraphManifold src = graph("z^2*conj(z)^2", 3);
    const JetMatrix full = gradient_pullback(graph_to_extrinsic(graph("z*conj(z)", 3)), on_M(src, {"z^2", "w"}));
    JetMatrix g(src.space, 1, 2, 1);
    for (std::size_t c = 0; c < 2; ++c) g(0, c) = full(0, c).truncated(1).with_exact(false);
    EXPECT_THROW(ek_spaces(g, cr_basis(src), 4), OrderExhausted);
}

TEST(Multiindices, GradedLexDescending)
{
    EXPECT_EQ(multiindices(2, 2), (std::vector<Multiindex>{{2, 0}, {1, 1}, {0, 2}}));
    EXPECT_EQ(multiindices(3, 1), (std::vector<Multiindex>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    EXPECT_EQ(multiindices(1, 3), (std::vector<Multiindex>{{3}}));
    for (std::size_t n = 1; n <= 4; ++n)
        for (unsigned k = 0; k <= 5; ++k) {
            const auto v = multiindices(n, k);
            // C(n + k - 1, k) multiindices of weight k.
            std::size_t binom = 1;
            for (unsigned i = 1; i <= k; ++i) binom = binom * (n + i - 1) / i;
            EXPECT_EQ(v.size(), binom);
            EXPECT_TRUE(std::is_sorted(v.rbegin(), v.rend()));
            for (const auto& a : v) EXPECT_EQ(weight(a), k);
        }
}

TEST(ManifoldNondegeneracy, Examples)
{
    AnalysisOptions opt;
    opt.max_order = 5;
    EXPECT_EQ(manifold_nondegeneracy(graph("z*conj(z)"), opt).report.verdict(), "nondegenerate(1)");
    EXPECT_EQ(manifold_nondegeneracy(graph("z^2*conj(z)^2"), opt).report.verdict(), "degenerate_up_to(5)");
    const ExtrinsicManifold sphere =
        ExtrinsicManifold::parse({"Z1", "Z2"}, {"Z1*conj(Z1) + Z2*conj(Z2) - 1"}, {Scalar(1), Scalar()}, kOrder);
    EXPECT_EQ(manifold_nondegeneracy(sphere, opt).report.verdict(), "nondegenerate(1)");
}

TEST(TransformTarget, Examples)
{
    const ExtrinsicManifold q = graph_to_extrinsic(graph("z*conj(z)"));
    const CRMap h = CRMap::parse(q.ambient, {"z", "w"}, {}, {}, kOrder);

    std::vector<Jet> id{Jet::variable(q.ambient, kOrder, 0), Jet::variable(q.ambient, kOrder, 1)};
    const TransformedTarget same = transform_target(q, id, h);
    EXPECT_EQ(same.target.rho[0].terms(), q.rho[0].terms());
    EXPECT_EQ(same.map.components, h.components);
    EXPECT_EQ(same.jacobian, identity_matrix(2));

    const std::vector<Jet> scale{parse_jet("2*z", q.ambient, kOrder), parse_jet("w", q.ambient, kOrder)};
    const TransformedTarget s = transform_target(q, scale, h);
    EXPECT_EQ(s.target.rho[0].terms(),
              parse_jet("(w - conj(w))*(-1/2*i) - 1/4*z*conj(z)", q.ambient, kOrder).terms());
    EXPECT_EQ(s.map.components[0].terms(), parse_jet("2*z", q.ambient, kOrder).terms());

    const std::vector<Jet> singular{parse_jet("z^2", q.ambient, kOrder), parse_jet("w", q.ambient, kOrder)};
    EXPECT_ANY_THROW(transform_target(q, singular, h));
}

TEST(TransformTarget, TwistedCoordinates)
{
    const ExtrinsicManifold m = ExtrinsicManifold::parse(
        {"z1", "z2", "w"}, {"(w - conj(w))*(-1/2*i) - z1*conj(z1) + z2*conj(z2)"}, {}, kOrder);
    const CRMap h = CRMap::parse(m.ambient, {"z1", "z2", "w"}, {}, {}, kOrder);
    // New coordinates are F(z) with z1 = zeta1 + zeta2 - zeta2^2.
    const std::vector<Jet> f{parse_jet("z1 - z2 + z2^2", m.ambient, kOrder), parse_jet("z2", m.ambient, kOrder),
                             parse_jet("w", m.ambient, kOrder)};
    const TransformedTarget t = transform_target(m, f, h);
    const Jet expected = parse_jet(
        "(w - conj(w))*(-1/2*i) - (z1 + z2 - z2^2)*conj(z1 + z2 - z2^2) + z2*conj(z2)", m.ambient, kOrder);
    EXPECT_EQ(t.target.rho[0].terms(), expected.terms());
}

TEST(TransformationLaw, ExplicitChangeOnTheQuarticExample)
{
    const Instance in = instantiate(corpus_job_named("quadric-z2"), 4);
    const Analysis a = run(in, 4);
    const Problem& p = a.problem;
    const std::vector<Jet> f{parse_jet("z + w^2", p.target.ambient, in.order), parse_jet("w", p.target.ambient, in.order)};
    const TransformedTarget tt = transform_target(p.target, f, p.map);
    AnalysisOptions opt;
    opt.max_order = 4;
    opt.tangency_depth = 2;
    const Analysis b = analyze(Problem{p.source, tt.target, tt.map, p.conversion}, opt);
    EXPECT_EQ(b.report.verdict(), "nondegenerate(2)");
    const LawCheck law = check_transformation_law(a.report.ladder, b.report.ladder, tt.jacobian, 4);
    EXPECT_TRUE(law.holds) << law.diagnostic;

    // A wrong Jacobian must be detected.
    Matrix wrong = tt.jacobian;
    wrong[0][0] = Scalar(3);
    wrong[1][0] = Scalar(1);
    EXPECT_FALSE(check_transformation_law(a.report.ladder, b.report.ladder, wrong, 4).holds);
}

TEST(TransformationLaw, HoldsForRandomBiholomorphisms)
{
    for (const char* name : {"quadric-z2", "quadric-codim2", "sphere-map-1", "twisted-quadric", "quartic-identity"}) {
        const InvarianceRun r = run_invariance(corpus_job_named(name), 7, 3, 4);
        for (const auto& t : r.results) EXPECT_TRUE(t.holds) << name << " trial " << t.index << ": " << t.diagnostic;
    }
}

TEST(DefiningFunction, ScalingByAUnitKeepsDimensions)
{
    for (const char* name : {"quadric-z2", "sphere-map-2", "twisted-quadric"}) {
        const Instance in = instantiate(corpus_job_named(name), 4);
        const Analysis a = run(in, 4);
        Instance scaled = in;
        const SpacePtr& amb = scaled.target.ambient;
        Jet unit = Jet::constant(amb, in.order, 1);
        for (std::size_t j = 0; j < amb->size() / 2; ++j)
            unit += Jet::variable(amb, in.order, j) * Jet::variable(amb, in.order, j + amb->size() / 2);
        scaled.target.rho[0] = unit * scaled.target.rho[0];
        const Analysis b = run(scaled, 4);
        EXPECT_EQ(a.report.ladder.dims(4), b.report.ladder.dims(4)) << name;
        EXPECT_EQ(a.report.verdict(), b.report.verdict()) << name;
    }
}

TEST(DefiningFunction, RealInvertibleMixingKeepsDimensions)
{
    const Instance in = instantiate(corpus_job_named("quadric-codim2"), 4);
    const Analysis a = run(in, 4);
    Instance mixed = in;
    const SpacePtr& amb = mixed.target.ambient;
    const Jet r1 = in.target.rho[0];
    const Jet r2 = in.target.rho[1];
    const Jet zz = parse_jet("z*conj(z)", amb, in.order);
    mixed.target.rho[0] = r1 + Scalar(2) * r2 + zz * r2;
    mixed.target.rho[1] = Scalar(-1) * r2 + (zz + Jet::constant(amb, in.order, Scalar(3))) * r1;
    const Analysis b = run(mixed, 4);
    EXPECT_EQ(a.report.ladder.dims(4), b.report.ladder.dims(4));
    EXPECT_EQ(b.report.verdict(), "nondegenerate(1)");
}

TEST(Reports, RepresentationIndependence)
{
    Job graph_job = corpus_job_named("quadric-z2");
    Job extrinsic_job = graph_job;
    extrinsic_job.source.type = "extrinsic";
    extrinsic_job.source.vars = {"z", "w"};
    extrinsic_job.source.real_vars.clear();
    extrinsic_job.source.equations = {"(w - conj(w))*(-1/2*i) - z^2*conj(z)^2"};
    const Report a = without_timing(run_job(graph_job).report);
    const Report b = without_timing(run_job(extrinsic_job).report);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.verdict, "nondegenerate");
    EXPECT_EQ(a.k0, 2);
}

TEST(Reports, Determinism)
{
    for (const auto& e : corpus()) {
        const Report a = run_job(corpus_job(e)).report;
        const Report b = run_job(corpus_job(e)).report;
        EXPECT_EQ(without_timing(a), without_timing(b)) << e.name;
        json ja = to_json(a), jb = to_json(b);
        ja.erase("elapsed_ms");
        jb.erase("elapsed_ms");
        EXPECT_EQ(ja.dump(), jb.dump()) << e.name;
    }
}

TEST(Reports, StableUnderRaisingTheOrder)
{
    for (const auto& e : corpus()) {
        const Report lo = run_job(corpus_job(e), 4).report;
        const Report hi = run_job(corpus_job(e), 6).report;
        if (e.nondegenerate) {
            EXPECT_EQ(without_timing(lo).witnesses, without_timing(hi).witnesses) << e.name;
            EXPECT_EQ(lo.k0, hi.k0) << e.name;
            EXPECT_EQ(lo.dims, hi.dims) << e.name;
        } else {
            EXPECT_EQ(lo.verdict, hi.verdict) << e.name;
            EXPECT_TRUE(std::equal(lo.dims.begin(), lo.dims.end(), hi.dims.begin())) << e.name;
        }
    }
}

TEST(Ladder, IsNestedAndBounded)
{
    for (const auto& e : corpus()) {
        AnalysisOptions opt;
        opt.max_order = 6;
        opt.tangency_depth = 0;
        opt.stop_when_full = false;
        const Instance in = instantiate(corpus_job(e), 6);
        const EkLadder l = analyze(prepare(in), opt).report.ladder;
        for (int k = 0; k < 6; ++k) EXPECT_LE(l.dim(k), l.dim(k + 1)) << e.name;
        EXPECT_GE(l.dim(0), 1u) << e.name;
        EXPECT_LE(l.dim(6), l.width) << e.name;
        // Every generator recorded up to k lies in E_k.
        for (int k = 0; k <= 6; ++k) EXPECT_EQ(rank(l.generators(k), l.width), l.dim(k)) << e.name;
    }
}

TEST(TangencyLadder, VanishesIdenticallyForTheCorpus)
{
    for (const auto& e : corpus()) {
        const JobRun r = run_job(corpus_job(e));
        EXPECT_TRUE(r.report.maps_into_target) << e.name;
        EXPECT_TRUE(r.report.tangency_ladder_ok) << e.name << ": " << r.analysis.tangency_ladder.diagnostic;
        EXPECT_EQ(r.report.tangency_depth, 4) << e.name;
    }
}

TEST(TangencyLadder, DetectsABadMap)
{
    const GraphManifold quad = graph("z*conj(z)");
    const ExtrinsicManifold q = graph_to_extrinsic(quad);
    const CRMap bad = CRMap::parse(quad.ambient, {"z", "2*w"}, {}, {}, kOrder);
    EXPECT_THROW(analyze(prepare(quad, q, bad), AnalysisOptions{}), InputError);
}

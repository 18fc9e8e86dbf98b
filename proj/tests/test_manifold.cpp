#include "support.hpp"

#include <gtest/gtest.h>

using namespace crnd;

namespace {

constexpr int kOrder = 6;

ExtrinsicManifold sphere(std::size_t n, std::vector<Scalar> p)
{
    std::vector<std::string> names;
    std::string rho;
    for (std::size_t j = 0; j < n; ++j) {
        names.push_back("Z" + std::to_string(j + 1));
        rho += names.back() + "*conj(" + names.back() + ") + ";
    }
    return ExtrinsicManifold::parse(names, {rho + "-1"}, std::move(p), kOrder);
}

GraphManifold quadric() { return GraphManifold::parse({"z"}, {"w"}, {"z*conj(z)"}, kOrder); }

GraphManifold quartic() { return GraphManifold::parse({"z"}, {"w"}, {"z^2*conj(z)^2"}, kOrder); }

/// rho composed with the inverse linear change and restricted to the graph.
std::vector<Jet> graph_residuals(const ExtrinsicManifold& m, const GraphConversion& conv)
{
    const std::vector<Jet> rho_new = compose(m.rho, linear_assignment(conv.graph.ambient, conv.inverse_change, m.order()));
    std::vector<Jet> out;
    for (const auto& r : rho_new) out.push_back(restrict_to_M(r, conv.graph));
    return out;
}

}  // namespace

TEST(Recenter, SphereAtAPoint)
{
    const ExtrinsicManifold r = recenter(sphere(2, {Scalar(1), Scalar()}));
    ASSERT_EQ(r.rho.size(), 1u);
    EXPECT_EQ(r.rho[0], parse_jet("Z1 + conj(Z1) + Z1*conj(Z1) + Z2*conj(Z2)", r.ambient, kOrder));
    EXPECT_TRUE(r.at_origin());
    EXPECT_EQ(r.rho[0].eval0(), Scalar());
}

TEST(Recenter, MapAtAPoint)
{
    const SpacePtr src = crnd::testing::ambient({"Z1", "Z2"});
    const CRMap h = CRMap::parse(src, {"Z1", "Z1*Z2", "Z2^2"}, {Scalar(1), Scalar()},
                                 {Scalar(1), Scalar(), Scalar()}, kOrder);
    const CRMap r = recenter(h);
    EXPECT_EQ(r.components[0], parse_jet("Z1", src, kOrder));
    EXPECT_EQ(r.components[1], parse_jet("Z2 + Z1*Z2", src, kOrder));
    EXPECT_EQ(r.components[2], parse_jet("Z2^2", src, kOrder));

    const CRMap id = CRMap::parse(src, {"Z1", "Z2"}, {}, {}, kOrder);
    EXPECT_EQ(recenter(id).components, id.components);
}

TEST(Recenter, Errors)
{
    EXPECT_THROW(recenter(sphere(2, {Scalar(1), Scalar(1)})), InputError);
    EXPECT_THROW(recenter(sphere(2, {Scalar(1)})), InputError);
    const SpacePtr src = crnd::testing::ambient({"Z1", "Z2"});
    const CRMap h = CRMap::parse(src, {"Z1", "Z1*Z2", "Z2^2"}, {Scalar(1), Scalar()},
                                 {Scalar(1), Scalar(1), Scalar()}, kOrder);
    EXPECT_THROW(recenter(h), InputError);
}

TEST(Recenter, IsExactOnIrrationalBasePoints)
{
    // (1/sqrt2, i/sqrt2) lies on the unit sphere in C^2.
    const Scalar a(SurdScalar(Rational(0), Rational(1, 2), Rational(0), Rational(0)));
    const ExtrinsicManifold r = recenter(sphere(2, {a, Scalar::i() * a}));
    EXPECT_EQ(r.rho[0].eval0(), Scalar());
    EXPECT_TRUE(r.rho[0].is_real());
}

TEST(ExtrinsicToGraph, Quadric)
{
    const ExtrinsicManifold m = ExtrinsicManifold::parse({"z", "w"}, {"(w - conj(w))*(-1/2*i) - z*conj(z)"}, {}, kOrder);
    const GraphConversion c = extrinsic_to_graph(m);
    EXPECT_EQ(c.change, identity_matrix(2));
    ASSERT_EQ(c.graph.phi.size(), 1u);
    EXPECT_EQ(c.graph.phi[0].terms(), parse_jet("z*conj(z)", c.graph.space, kOrder).terms());
}

TEST(ExtrinsicToGraph, Quartic)
{
    const ExtrinsicManifold m =
        ExtrinsicManifold::parse({"z", "w"}, {"(w - conj(w))*(-1/2*i) - z^2*conj(z)^2"}, {}, kOrder);
    const GraphConversion c = extrinsic_to_graph(m);
    EXPECT_EQ(c.graph.phi[0].terms(), quartic().phi[0].terms());
}

TEST(ExtrinsicToGraph, SphereNearAPoint)
{
    const ExtrinsicManifold r = recenter(sphere(2, {Scalar(1), Scalar()}));
    const GraphConversion c = extrinsic_to_graph(r);
    // Z1 is the pivot: w = 2i Z1, z = Z2, and Im w = -|z|^2 - |w|^2/4 gives phi = -z conj z - s^2/4 + O(4).
    // The graph keeps the old names: z is called Z2 and s is called Z1.
    EXPECT_EQ(c.pivots, std::vector<std::size_t>{0});
    EXPECT_EQ(c.graph.phi[0].truncated(2).terms(),
              parse_jet("-1*Z2*conj(Z2) - 1/4*Z1^2", c.graph.space, 2).terms());
    for (const auto& x : graph_residuals(r, c)) EXPECT_TRUE(x.is_zero()) << x.to_string();
}

TEST(ExtrinsicToGraph, ResidualVanishesForEveryCorpusManifold)
{
    for (const auto& e : corpus()) {
        const Job job = corpus_job(e);
        const Instance in = instantiate(job, resolve_max_order(job, std::nullopt));
        std::vector<ExtrinsicManifold> ms{in.target};
        if (const auto* x = std::get_if<ExtrinsicManifold>(&in.source)) ms.push_back(*x);
        for (const auto& m : ms) {
            const ExtrinsicManifold r = recenter(m);
            const GraphConversion c = extrinsic_to_graph(r);
            for (const auto& x : graph_residuals(r, c)) EXPECT_TRUE(x.is_zero()) << e.name << ": " << x.to_string();
            for (const auto& phi : c.graph.phi) EXPECT_TRUE(phi.is_real()) << e.name;
        }
    }
}

TEST(ExtrinsicToGraph, GenericityFailure)
{
    // Two copies of the same hypersurface: complex gradients have rank 1.
    const ExtrinsicManifold m = ExtrinsicManifold::parse(
        {"z", "w"}, {"(w - conj(w))*(-1/2*i) - z*conj(z)", "(w - conj(w))*(-1*i) - 2*z*conj(z)"}, {}, kOrder);
    try {
        (void)extrinsic_to_graph(m);
        FAIL() << "expected a genericity error";
    } catch (const InputError& err) {
        EXPECT_NE(std::string(err.what()).find("not generic"), std::string::npos);
    }
    EXPECT_THROW(extrinsic_to_graph(sphere(2, {Scalar(1), Scalar()})), InputError);
}

TEST(Restrict, Examples)
{
    const GraphManifold m = quadric();
    const SpacePtr& a = m.ambient;
    EXPECT_EQ(restrict_to_M(parse_jet("w", a, kOrder), m), parse_jet("w + i*z*conj(z)", m.space, kOrder));
    EXPECT_EQ(restrict_to_M(parse_jet("w - conj(w)", a, kOrder), m), parse_jet("2*i*z*conj(z)", m.space, kOrder));
    EXPECT_TRUE(restrict_to_M(graph_to_extrinsic(m).rho[0], m).is_zero());
    EXPECT_THROW(restrict_to_M(parse_jet("w", m.space, kOrder), m), SpaceMismatch);
}

TEST(Restrict, IsARingHomomorphismPreservingRealness)
{
    std::mt19937_64 rng(23);
    const GraphManifold m =
        GraphManifold::parse({"z1", "z2"}, {"w"}, {"z1*conj(z1) - z2*conj(z2) + z1^2*conj(z2) + z2*conj(z1)^2"}, 5);
    Restriction restrict(m);
    for (int t = 0; t < 40; ++t) {
        const Jet x = crnd::testing::random_jet(rng, m.ambient, 5, 4, 5, t % 2 == 0);
        const Jet y = crnd::testing::random_jet(rng, m.ambient, 5, 4, 5);
        EXPECT_EQ(restrict(x * y).terms(), (restrict(x) * restrict(y)).terms());
        EXPECT_EQ(restrict(x + y).terms(), (restrict(x) + restrict(y)).terms());
        const Jet real = x + x.conj_swap();
        EXPECT_TRUE(restrict(real).is_real());
    }
}

TEST(VerifyMap, Examples)
{
    const GraphManifold src = quartic();
    const ExtrinsicManifold tgt = graph_to_extrinsic(quadric());
    const CRMap h = CRMap::parse(src.ambient, {"z^2", "w"}, {}, {}, kOrder);
    EXPECT_TRUE(verify_maps_into_target(h, src, tgt).ok);

    const ExtrinsicManifold tgt2 = ExtrinsicManifold::parse(
        {"z", "w1", "w2"}, {"(w1 - conj(w1))*(-1/2*i) - z*conj(z)", "(w2 - conj(w2))*(-1/2*i) - z*conj(z)"}, {}, kOrder);
    const GraphManifold q = quadric();
    const CRMap h2 = CRMap::parse(q.ambient, {"z", "w", "w"}, {}, {}, kOrder);
    const TangencyCertificate c2 = verify_maps_into_target(h2, q, tgt2);
    EXPECT_TRUE(c2.ok);
    for (const auto& r : c2.residuals) EXPECT_TRUE(r.is_zero());

    const CRMap bad = CRMap::parse(q.ambient, {"z", "2*w"}, {}, {}, kOrder);
    const TangencyCertificate c3 = verify_maps_into_target(bad, q, tgt);
    EXPECT_FALSE(c3.ok);
    EXPECT_EQ(c3.residuals[0], parse_jet("z*conj(z)", q.space, kOrder));
    EXPECT_NE(c3.diagnostic.find("nonzero term z*conj(z)"), std::string::npos);
}

TEST(VerifyMap, ArityAndHolomorphy)
{
    const GraphManifold q = quadric();
    const ExtrinsicManifold tgt = graph_to_extrinsic(q);
    EXPECT_THROW(verify_maps_into_target(CRMap::parse(q.ambient, {"z"}, {}, {}, kOrder), q, tgt), InputError);
    EXPECT_THROW(CRMap::parse(q.ambient, {"conj(z)", "w"}, {}, {}, kOrder), InputError);
}

TEST(GraphManifold, Validation)
{
    EXPECT_THROW(GraphManifold::parse({"z"}, {"w"}, {"i*z*conj(z)"}, kOrder), InputError);
    EXPECT_THROW(GraphManifold::parse({"z"}, {"w"}, {"z + conj(z)"}, kOrder), InputError);
    EXPECT_THROW(GraphManifold::parse({"z"}, {"w"}, {"1 + z*conj(z)"}, kOrder), InputError);
    EXPECT_THROW(GraphManifold::parse({"z"}, {"w"}, {"z*conj(z)", "z*conj(z)"}, kOrder), InputError);
    EXPECT_NO_THROW(GraphManifold::parse({"z"}, {"w"}, {"z^2 + conj(z)^2 + w*z*conj(z)"}, kOrder));
}

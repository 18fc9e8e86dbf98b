#pragma once

// Seeded generators for property tests.

#include "crnd/crnd.hpp"

#include <random>

namespace crnd::testing {

inline Rational random_rational(std::mt19937_64& rng, int span = 9)
{
    const auto num = static_cast<std::int64_t>(rng() % (2 * span + 1)) - span;
    const auto den = static_cast<std::int64_t>(rng() % 6) + 1;
    return Rational(num, den);
}

inline SurdScalar random_surd(std::mt19937_64& rng, bool dense = true)
{
    if (!dense) return SurdScalar(random_rational(rng));
    return {random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng)};
}

inline Scalar random_scalar(std::mt19937_64& rng, bool dense = true)
{
    return {random_surd(rng, dense), random_surd(rng, dense)};
}

/// Random polynomial with up to `terms` monomials of degree <= max_deg, exact at `order`.
inline Jet random_jet(std::mt19937_64& rng, const SpacePtr& space, int order, int max_deg, int terms,
                      bool dense_coeffs = false)
{
    std::vector<Term> ts;
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        const int deg = static_cast<int>(rng() % static_cast<unsigned>(max_deg + 1));
        for (int i = 0; i < deg; ++i) {
            const std::size_t v = rng() % space->size();
            ++m.e[v];
            ++m.deg;
        }
        if (m.deg > order) continue;
        ts.push_back({m, random_scalar(rng, dense_coeffs)});
    }
    return Jet::from_terms(space, order, std::move(ts));
}

/// Random jet vanishing at the origin.
inline Jet random_jet0(std::mt19937_64& rng, const SpacePtr& space, int order, int max_deg, int terms)
{
    const Jet j = random_jet(rng, space, order, max_deg, terms);
    return j - Jet::constant(space, order, j.eval0());
}

inline SpacePtr ambient(std::initializer_list<const char*> names)
{
    return VarSpace::ambient(std::vector<std::string>(names.begin(), names.end()));
}

}  // namespace crnd::testing

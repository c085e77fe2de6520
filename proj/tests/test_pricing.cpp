#include "helpers.h"
#include "fixtures.h"
#include "oracles/oracles.h"

#include "splitpd/pricing.h"

#include <doctest.h>

#include <random>

using namespace splitpd;

namespace
{
// Threshold formulas evaluated directly from the distance matrix.
Distance expectedThreshold(Instance const &inst, int i, int j)
{
    int const n = inst.numPairs();
    int const end = inst.endDepot();
    Distance const L = inst.maxLength();
    auto d = [&](int a, int b) { return inst.dist(a, b); };

    if (j == end || i == end || j == 0)
        return INF_DISTANCE;
    if (i == 0)
        return inst.isPickup(j) ? L - (d(0, j) + d(j, j + n) + d(j + n, end)) : INF_DISTANCE;
    if (inst.isPickup(i) && inst.isPickup(j))
        return L - std::min(d(i, j) + d(j, i + n) + d(i + n, j + n) + d(j + n, end),
                            d(i, j) + d(j, j + n) + d(j + n, i + n) + d(i + n, end));
    if (inst.isPickup(i) && inst.isDelivery(j))
        return L - (d(i, j) + d(j, i + n) + d(i + n, end));
    if (inst.isDelivery(i) && inst.isPickup(j))
        return L - (d(i, j) + d(j, j + n) + d(j + n, end));
    return L - (d(i, j) + d(j, end));
}
}  // namespace

TEST_SUITE("pricing")
{
    TEST_CASE("zero duals give no negative column")
    {
        Instance const inst = testing::smallInstance(3, 2, 1);
        auto const res = priceExact(PricingDuals(3), inst);
        CHECK(res.columns.empty());
        CHECK(res.minReducedCost >= -1e-9);
    }

    TEST_CASE("single pair with a large dual")
    {
        Instance const inst = Instance::fromCoordinates(1, 1, 10, INF_DISTANCE, {4}, {{0, 0}, {3, 4}, {6, 8}});
        PricingDuals duals(1);
        duals.pair[1] = 10;
        auto const res = priceExact(duals, inst);
        REQUIRE_FALSE(res.columns.empty());
        CHECK(res.columns[0].visits == std::vector<Visit>{{1, 4}, {2, 4}});
        CHECK(res.reducedCosts[0] == doctest::Approx(20 - 40));
        CHECK(res.minReducedCost == doctest::Approx(-20));
    }

    TEST_CASE("columns carry coverage, visits and legs")
    {
        Instance const inst = testing::smallInstance(2, 1, 3, INF_DISTANCE);
        Load const q1 = inst.demand(1);
        Column const col = makeColumn({{1, 1}, {3, 0}, {1, q1 - 1}, {2, 2}, {3, 0}, {4, 0}}, inst);
        CHECK(col.coverage[1] == q1);
        CHECK(col.coverage[2] == 2);
        CHECK(col.pickupVisits[1] == 2);
        CHECK(col.pickupVisits[2] == 1);
        REQUIRE(col.legs.size() == 7);
        CHECK(col.legs[0] == Leg{0, 1, 0, 1});
        CHECK(col.legs[1] == Leg{1, 3, 1, 1});
        CHECK(col.legs[6] == Leg{4, inst.endDepot(), 2, 0});
        CHECK(col.cost == doctest::Approx(routeLength(col.visits, inst)));

        PricingDuals duals(2);
        duals.pair[1] = 2;
        duals.vehicle = -1;
        duals.pickupVisit[1] = 0.5;
        duals.edge[{1, 3}] = 0.25;
        duals.loadedEdge[Leg{4, inst.endDepot(), 2, 0}] = 0.125;
        double const expected = col.cost - 2 * q1 + 1 - 2 * 0.5 - 0.25 - 0.125;
        CHECK(reducedCost(col, duals) == doctest::Approx(expected));
    }

    TEST_CASE("extension filter")
    {
        SUBCASE("unlimited distance forbids nothing")
        {
            Instance const inst = testing::smallInstance(3, 2, 2, INF_DISTANCE);
            ExtensionFilter const filter(inst);
            for (int i = 0; i <= inst.endDepot(); ++i)
                for (int j = 0; j <= inst.endDepot(); ++j)
                    CHECK_FALSE(filter.forbids(i, j, 1e12));
        }
        SUBCASE("a tight single-pair tour is allowed from the depot")
        {
            Instance const loose = Instance::fromCoordinates(1, 1, 10, INF_DISTANCE, {4}, {{0, 0}, {3, 4}, {6, 8}});
            Instance const inst(1, 1, 10, 20, {4}, loose.locationMatrix());
            ExtensionFilter const filter(inst);
            CHECK_FALSE(filter.forbids(0, 1, 0));
            CHECK(filter.forbids(0, 1, 0.01));
        }
        SUBCASE("thresholds follow the completion formulas")
        {
            for (std::uint64_t seed = 0; seed != 10; ++seed)
            {
                Instance const inst = testing::smallInstance(3, 2, seed, 300);
                ExtensionFilter const filter(inst);
                for (int i = 0; i <= inst.endDepot(); ++i)
                    for (int j = 0; j <= inst.endDepot(); ++j)
                    {
                        if (i == j)
                            continue;
                        Distance const expected = expectedThreshold(inst, i, j);
                        if (expected == INF_DISTANCE)
                        {
                            CHECK_FALSE(filter.forbids(i, j, 1e6));
                            continue;
                        }
                        for (double d = 0; d <= 300; d += 2.5)
                            CHECK(filter.forbids(i, j, d) == (d > expected + 1e-9));
                    }
            }
        }
        SUBCASE("feasible routes are never cut")
        {
            std::mt19937_64 rng(5);
            for (std::uint64_t seed = 0; seed != 20; ++seed)
            {
                Instance const inst = testing::smallInstance(3, 2, seed, 300);
                ExtensionFilter const filter(inst);
                for (int k = 0; k != 50; ++k)
                {
                    auto const route = oracle::randomRoute(inst, 0, 8, rng);
                    if (!evaluateRoute(route, inst).feasible)
                        continue;
                    Distance d = 0;
                    int prev = 0;
                    for (auto const &visit : route)
                    {
                        CHECK_FALSE(filter.forbids(prev, visit.vertex, d));
                        d += inst.dist(prev, visit.vertex);
                        prev = visit.vertex;
                    }
                }
            }
        }
    }

    TEST_CASE("exact pricing matches bounded enumeration")
    {
        std::mt19937_64 rng(61);
        for (int trial = 0; trial != 12; ++trial)
        {
            Instance const inst = testing::enumerableInstance(rng);
            PricingDuals const duals = testing::randomDuals(inst, rng, trial % 2 == 1, 60);
            double const cf = trial % 4 == 3 ? 0.0 : 1.0;
            double const expected = oracle::minReducedCostByEnumeration(inst, duals, cf, 8);

            PricingOptions options;
            options.costFactor = cf;
            auto const res = priceExact(duals, inst, options);
            INFO("trial " << trial);
            if (expected == INF_DISTANCE)
                CHECK(res.minReducedCost == INF_DISTANCE);
            else
                CHECK(res.minReducedCost == doctest::Approx(expected).epsilon(1e-9));
            for (size_t k = 0; k != res.columns.size(); ++k)
                CHECK(reducedCost(res.columns[k], duals, cf) == doctest::Approx(res.reducedCosts[k]));
        }
    }

    TEST_CASE("full dominance without the delivery triangle inequality stays exact")
    {
        std::mt19937_64 rng(67);
        for (int trial = 0; trial != 10; ++trial)
        {
            Instance const base = testing::enumerableInstance(rng);
            auto matrix = base.locationMatrix();
            // Make a detour through delivery 3 shorter than the direct arc 1 -> 2.
            int const s = 5;
            double const direct = matrix[1 * s + 3] + matrix[3 * s + 2] + 1;
            matrix[1 * s + 2] = matrix[2 * s + 1] = direct;
            Instance const inst(2, 2, base.capacity(), base.maxLength(), base.pickupDemands(), matrix);
            REQUIRE_FALSE(inst.dtiHolds());
            PricingDuals const duals = testing::randomDuals(inst, rng, false, 60);
            double const expected = oracle::minReducedCostByEnumeration(inst, duals, 1, 8);
            CHECK(priceExact(duals, inst).minReducedCost == doctest::Approx(expected).epsilon(1e-9));
        }
    }

    TEST_CASE("emitted columns are routes with negative reduced cost")
    {
        std::mt19937_64 rng(71);
        for (std::uint64_t seed = 0; seed != 10; ++seed)
        {
            Instance const inst = testing::smallInstance(3, 2, seed, 300);
            PricingDuals const duals = testing::randomDuals(inst, rng, seed % 2 == 1, 40);
            auto const res = priceExact(duals, inst);
            CHECK(res.columns.size() <= 30);
            for (size_t k = 0; k != res.columns.size(); ++k)
            {
                auto const &col = res.columns[k];
                CHECK(evaluateRoute(col.visits, inst).feasible);
                double const rc = reducedCost(col, duals);
                CHECK(rc < -1e-6);
                CHECK(rc == doctest::Approx(res.reducedCosts[k]));
                if (k > 0)
                    CHECK(res.reducedCosts[k - 1] <= res.reducedCosts[k] + 1e-12);
                CHECK(res.minReducedCost <= rc + 1e-9);
            }
        }
    }

    TEST_CASE("delivery triangle inequality survives pair duals")
    {
        std::mt19937_64 rng(73);
        for (std::uint64_t seed = 0; seed != 10; ++seed)
        {
            Instance const inst = testing::smallInstance(3, 2, seed, 300);
            REQUIRE(inst.dtiHolds());
            PricingDuals const duals = testing::randomDuals(inst, rng, false, 40);
            CHECK(reducedCostsSatisfyDti(duals, inst, 1.0));

            PricingDuals bent = duals;
            bent.edge[{1, 2}] = -1000;
            CHECK_FALSE(reducedCostsSatisfyDti(bent, inst, 1.0));
        }
    }

    TEST_CASE("cascade stops at the first productive stage")
    {
        Instance const inst = testing::smallInstance(3, 2, 4, 300);
        PricingDuals duals(3);
        for (int i = 1; i <= 3; ++i)
            duals.pair[i] = 100;
        auto const res = priceCascade(duals, inst);
        CHECK(res.stage == 0);
        CHECK(res.stagesRun == 1);
        CHECK_FALSE(res.proven);
        CHECK_FALSE(res.columns.empty());
        for (size_t k = 0; k != res.columns.size(); ++k)
            CHECK(reducedCost(res.columns[k], duals) < -1e-6);
    }

    TEST_CASE("cascade proves the absence of negative columns")
    {
        std::mt19937_64 rng(79);
        for (std::uint64_t seed = 0; seed != 6; ++seed)
        {
            Instance const inst = testing::smallInstance(3, 2, seed, 300);
            PricingDuals const duals = testing::randomDuals(inst, rng, false, 2);
            auto const exact = priceExact(duals, inst);
            auto const res = priceCascade(duals, inst);
            CHECK(res.columns.empty() == exact.columns.empty());
            if (res.columns.empty())
            {
                CHECK(res.proven);
                CHECK(res.stagesRun == 9);
                CHECK(exact.minReducedCost >= -1e-6);
            }
        }
    }

    TEST_CASE("label cap raises an error")
    {
        Instance const inst = testing::smallInstance(4, 2, 9, INF_DISTANCE);
        PricingDuals duals(4);
        for (int i = 1; i <= 4; ++i)
            duals.pair[i] = 50;
        PricingOptions options;
        options.labelCap = 50;
        CHECK_THROWS_AS(priceExact(duals, inst, options), PricingLimitError);
    }
}

#include "helpers.h"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace splitpd;

namespace
{
Instance twoPairLine()
{
    // depot, p1, p2, d1, d2
    std::vector<Point> const points = {{0, 0}, {0, 3}, {4, 0}, {0, 6}, {8, 0}};
    return Instance::fromCoordinates(2, 2, 10, 40, {6, 5}, points);
}

Instance randomFiveVertex(std::mt19937_64 &rng, Load capacity, std::vector<Load> demands)
{
    std::uniform_real_distribution<double> coord(0, 20);
    std::vector<Point> points;
    for (int k = 0; k != 5; ++k)
        points.push_back({coord(rng), coord(rng)});
    return Instance::fromCoordinates(2, 1, capacity, INF_DISTANCE, std::move(demands), points);
}

// Best of the merged placements: every visit of ``pair`` is removed, then one
// pickup of the full amount goes to the slot of one of the original pickups
// and one delivery to the slot of one of the original deliveries.
Distance bestMergedPlacement(std::vector<Visit> const &visits, int pair, Instance const &inst)
{
    std::vector<size_t> pickupSlots;
    std::vector<size_t> deliverySlots;
    std::vector<Visit> rest;
    Load total = 0;
    for (auto const &visit : visits)
    {
        if (inst.pairOf(visit.vertex) == pair)
        {
            if (inst.isPickup(visit.vertex))
            {
                pickupSlots.push_back(rest.size());
                total += visit.amount;
            }
            else
                deliverySlots.push_back(rest.size());
            continue;
        }
        rest.push_back(visit);
    }

    Distance best = INF_DISTANCE;
    for (size_t p : pickupSlots)
        for (size_t d : deliverySlots)
        {
            if (d < p)
                continue;
            std::vector<Visit> cand = rest;
            cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(d), {inst.deliveryOf(pair), 0});
            cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(p), {pair, total});
            auto const eval = evaluateRoute(cand, inst);
            if (eval.feasible)
                best = std::min(best, eval.length);
        }
    return best;
}
}  // namespace

TEST_SUITE("model")
{
    TEST_CASE("empty route has the depot round trip length")
    {
        Instance const inst = twoPairLine();
        auto const eval = evaluateRoute(std::vector<Visit>{}, inst);
        CHECK(eval.feasible);
        CHECK(eval.violation == Violation::None);
        CHECK(eval.length == doctest::Approx(inst.dist(0, inst.endDepot())));
    }

    TEST_CASE("single pair route length is the tour length")
    {
        Instance const inst = twoPairLine();
        std::vector<Visit> const visits = {{1, 6}, {3, 0}};
        auto const eval = evaluateRoute(visits, inst);
        CHECK(eval.feasible);
        CHECK(eval.length == doctest::Approx(inst.dist(0, 1) + inst.dist(1, 3) + inst.dist(3, 5)));
    }

    TEST_CASE("violations are reported by priority")
    {
        Instance const inst = twoPairLine();
        CHECK(evaluateRoute(std::vector<Visit>{{3, 0}, {1, 6}}, inst).violation == Violation::Precedence);

        // Precedence outranks the capacity violation in the same route.
        std::vector<Visit> const both = {{4, 0}, {1, 6}, {2, 5}, {3, 0}};
        CHECK(evaluateRoute(both, inst).violation == Violation::Precedence);

        std::vector<Visit> const overload = {{1, 6}, {2, 5}, {3, 0}, {4, 0}};
        CHECK(evaluateRoute(overload, inst).violation == Violation::Capacity);

        Instance const tight = Instance::fromCoordinates(1, 1, 10, 5, {3}, {{0, 0}, {0, 3}, {0, 6}});
        CHECK(evaluateRoute(std::vector<Visit>{{1, 3}, {2, 0}}, tight).violation == Violation::Distance);

        CHECK(evaluateRoute(std::vector<Visit>{{1, 3}}, inst).violation == Violation::Precedence);
    }

    TEST_CASE("malformed visits throw")
    {
        Instance const inst = twoPairLine();
        CHECK_THROWS_AS(evaluateRoute(std::vector<Visit>{{0, 0}}, inst), MalformedRoute);
        CHECK_THROWS_AS(evaluateRoute(std::vector<Visit>{{9, 1}}, inst), MalformedRoute);
        CHECK_THROWS_AS(evaluateRoute(std::vector<Visit>{{1, 0}, {3, 0}}, inst), MalformedRoute);
        CHECK_THROWS_AS(evaluateRoute(std::vector<Visit>{{1, 7}, {3, 0}}, inst), MalformedRoute);
    }

    TEST_CASE("delivery unloads everything of its pair")
    {
        Instance const inst = twoPairLine();
        Route const route({{1, 2}, {1, 3}, {2, 5}, {3, 0}, {4, 0}}, inst);
        REQUIRE(route.feasible());
        CHECK(route.loads() == std::vector<Load>{2, 5, 10, 5, 0});
        CHECK(route[3].amount == 5);
    }

    TEST_CASE("split pair across two routes covers the demand")
    {
        Instance const inst = twoPairLine();
        Solution sol;
        sol.routes.emplace_back(std::vector<Visit>{{1, 4}, {3, 0}, {2, 5}, {4, 0}}, inst);
        sol.routes.emplace_back(std::vector<Visit>{{1, 2}, {3, 0}}, inst);
        auto const eval = evaluateSolution(sol, inst);
        CHECK(eval.feasible);
        CHECK(eval.uncovered.empty());
        CHECK(splitPairs(sol, inst) == 1);
        CHECK(customerVisits(sol) == 6);
        CHECK(testing::replayFeasible(sol, inst));
        CHECK(eval.cost == doctest::Approx(sol.routes[0].length() + sol.routes[1].length()));
    }

    TEST_CASE("missing pair is reported uncovered")
    {
        Instance const inst = twoPairLine();
        Solution sol;
        sol.routes.emplace_back(std::vector<Visit>{{1, 6}, {3, 0}}, inst);
        auto const eval = evaluateSolution(sol, inst);
        CHECK_FALSE(eval.feasible);
        REQUIRE(eval.uncovered.size() == 1);
        CHECK(eval.uncovered[0] == std::pair<int, Load>{2, 5});
    }

    TEST_CASE("too many routes is infeasible")
    {
        Instance const inst = Instance::fromCoordinates(2, 1, 10, INF_DISTANCE, {6, 5},
                                                        {{0, 0}, {0, 3}, {4, 0}, {0, 6}, {8, 0}});
        Solution sol;
        sol.routes.emplace_back(std::vector<Visit>{{1, 6}, {3, 0}}, inst);
        sol.routes.emplace_back(std::vector<Visit>{{2, 5}, {4, 0}}, inst);
        auto const eval = evaluateSolution(sol, inst);
        CHECK(eval.tooManyRoutes);
        CHECK_FALSE(eval.feasible);
    }

    TEST_CASE("shuttle tour on the two-pair line instance")
    {
        Instance const inst = testing::fig2Instance();
        std::vector<Visit> visits = {{1, 99}};
        for (int k = 0; k != 100; ++k)
        {
            visits.push_back({2, 1});
            visits.push_back({4, 0});
        }
        visits.push_back({3, 0});

        Solution sol;
        sol.routes.emplace_back(visits, inst);
        auto const eval = evaluateSolution(sol, inst);
        CHECK(eval.feasible);
        CHECK(customerVisits(sol) == 202);
        double const expected = 10 + 5 + 199 * 0.001 + (5 - 0.001) + std::hypot(10.0, 10.0);
        CHECK(eval.cost == doctest::Approx(expected).epsilon(1e-9));
        CHECK(testing::replayFeasible(sol, inst));
    }

    TEST_CASE("cached length matches recomputation after reassignments")
    {
        std::mt19937_64 rng(7);
        Instance const inst = testing::smallInstance(4, 2, 3);
        Route route;
        for (int k = 0; k != 200; ++k)
        {
            auto visits = std::vector<Visit>{};
            std::vector<int> order = {1, 2, 3, 4};
            std::shuffle(order.begin(), order.end(), rng);
            for (int p : order)
            {
                visits.push_back({p, inst.demand(p)});
                visits.push_back({inst.deliveryOf(p), 0});
            }
            std::rotate(visits.begin(), visits.begin() + static_cast<std::ptrdiff_t>(rng() % visits.size()),
                        visits.end());
            route.assign(visits, inst);
            CHECK(route.length() == doctest::Approx(routeLength(route.visits(), inst)));
            CHECK(route.feasible() == evaluateRoute(route.visits(), inst).feasible);
        }
    }

    TEST_CASE("feasibility checker agrees with evaluateRoute")
    {
        std::mt19937_64 rng(11);
        Instance const inst = testing::smallInstance(3, 1, 5, 250);
        FeasibilityChecker checker(inst);
        for (int k = 0; k != 500; ++k)
        {
            std::vector<Visit> visits;
            int const len = 1 + static_cast<int>(rng() % 7);
            for (int v = 0; v != len; ++v)
            {
                int const vertex = 1 + static_cast<int>(rng() % 6);
                Load const amount = inst.isPickup(vertex) ? 1 + static_cast<Load>(rng() % inst.demand(vertex)) : 0;
                visits.push_back({vertex, amount});
            }
            Distance length = 0;
            auto const eval = evaluateRoute(visits, inst);
            CHECK(checker.check(visits, length) == eval.feasible);
            if (eval.feasible)
                CHECK(length == doctest::Approx(eval.length));
        }
    }

    TEST_CASE("merge leaves routes without repeats unchanged")
    {
        Instance const inst = twoPairLine();
        Route const route({{1, 6}, {2, 4}, {3, 0}, {4, 0}}, inst);
        CHECK(mergeRedundantVisits(route, inst) == route);
    }

    TEST_CASE("consecutive repeats merge to the best placement")
    {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial != 100; ++trial)
        {
            Instance const inst = randomFiveVertex(rng, 10, {7, 3});
            std::vector<Visit> const visits = {{1, 3}, {1, 4}, {3, 0}, {3, 0}};
            Route const route(visits, inst);
            REQUIRE(route.feasible());
            Route const merged = mergeRedundantVisits(route, inst);
            REQUIRE(merged.feasible());
            CHECK(merged.size() == 2);
            CHECK(merged[0] == Visit{1, 7});
            CHECK(merged.length() == doctest::Approx(bestMergedPlacement(visits, 1, inst)));
            // Repeated visits of one vertex add no distance.
            CHECK(merged.length() == doctest::Approx(route.length()));
        }
    }

    TEST_CASE("repeats around another pair merge and keep the other pair")
    {
        std::mt19937_64 rng(22);
        for (int trial = 0; trial != 100; ++trial)
        {
            Instance const inst = randomFiveVertex(rng, 10, {6, 3});
            std::vector<Visit> const visits = {{1, 2}, {2, 3}, {1, 4}, {3, 0}, {3, 0}, {4, 0}};
            Route const route(visits, inst);
            REQUIRE(route.feasible());
            Route const merged = mergeRedundantVisits(route, inst);
            REQUIRE(merged.feasible());
            CHECK(merged.size() == 4);
            CHECK(std::count(merged.visits().begin(), merged.visits().end(), Visit{2, 3}) == 1);
            CHECK(merged.length() == doctest::Approx(bestMergedPlacement(visits, 1, inst)));
            CHECK(merged.length() <= route.length() + 1e-9);
        }
    }

    TEST_CASE("merge is idempotent and never lengthens a route")
    {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial != 300; ++trial)
        {
            Instance const inst = randomFiveVertex(rng, 10, {5, 4});
            REQUIRE(inst.dtiHolds());
            std::vector<Visit> visits;
            Load left1 = 5;
            Load left2 = 4;
            // Random interleaving of split pickups and deliveries.
            std::vector<int> open(3, 0);
            while (left1 > 0 || left2 > 0 || open[1] || open[2])
            {
                int const p = 1 + static_cast<int>(rng() % 2);
                Load &left = p == 1 ? left1 : left2;
                if (left > 0 && rng() % 2 == 0)
                {
                    Load const a = 1 + static_cast<Load>(rng() % left);
                    visits.push_back({p, a});
                    left -= a;
                    open[p] = 1;
                }
                else if (open[p])
                {
                    visits.push_back({inst.deliveryOf(p), 0});
                    open[p] = 0;
                }
            }
            Route const route(visits, inst);
            REQUIRE(route.feasible());
            Route const once = mergeRedundantVisits(route, inst);
            CHECK(once.feasible());
            CHECK(once.length() <= route.length() + 1e-9);
            CHECK(mergeRedundantVisits(once, inst) == once);
        }
    }
}

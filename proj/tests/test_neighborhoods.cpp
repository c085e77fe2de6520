#include "helpers.h"

#include "splitpd/construct.h"
#include "splitpd/neighborhoods.h"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace splitpd;

namespace
{
Instance looseInstance(int numPairs, int numVehicles, std::uint64_t seed)
{
    GeneratorParams params;
    params.numPairs = numPairs;
    params.numVehicles = numVehicles;
    params.capacity = 100;
    params.demandLo = 10;
    params.demandHi = 30;
    params.maxLength = INF_DISTANCE;
    params.pickupLocations = numPairs;
    params.deliveryLocations = numPairs;
    params.seed = seed;
    return generateInstance(params);
}

// Random precedence-respecting order of the given pairs, each served once.
std::vector<Visit> randomUnsplitRoute(std::vector<int> const &pairs, Instance const &inst, std::mt19937_64 &rng)
{
    std::vector<int> tokens;
    for (int p : pairs)
    {
        tokens.push_back(p);
        tokens.push_back(p);
    }
    std::shuffle(tokens.begin(), tokens.end(), rng);
    std::vector<char> seen(inst.numPairs() + 1, 0);
    std::vector<Visit> visits;
    for (int p : tokens)
    {
        if (!seen[p])
            visits.push_back({p, inst.demand(p)});
        else
            visits.push_back({inst.deliveryOf(p), 0});
        seen[p] = 1;
    }
    return visits;
}

struct Occurrence
{
    size_t pickup;
    size_t delivery;
};

// Pickup and delivery positions per pair of a route that serves each pair once.
std::vector<std::pair<int, Occurrence>> occurrences(std::vector<Visit> const &visits, Instance const &inst)
{
    std::vector<std::pair<int, Occurrence>> out;
    for (size_t a = 0; a != visits.size(); ++a)
        if (inst.isPickup(visits[a].vertex))
            for (size_t b = a + 1; b != visits.size(); ++b)
                if (visits[b].vertex == inst.deliveryOf(visits[a].vertex))
                {
                    out.push_back({visits[a].vertex, {a, b}});
                    break;
                }
    return out;
}

bool improves(std::vector<Visit> const &cand, Distance oldLength, Instance const &inst)
{
    auto const eval = evaluateRoute(cand, inst);
    return eval.feasible && eval.length < oldLength - COST_EPS;
}

// Every intra-route pair swap of the solution that improves it.
std::vector<std::vector<Visit>> improvingPairSwaps(Solution const &sol, size_t r, Instance const &inst)
{
    std::vector<std::vector<Visit>> found;
    auto const &visits = sol.routes[r].visits();
    auto const occ = occurrences(visits, inst);
    for (size_t i = 0; i != occ.size(); ++i)
        for (size_t j = i + 1; j != occ.size(); ++j)
        {
            auto cand = visits;
            std::swap(cand[occ[i].second.pickup], cand[occ[j].second.pickup]);
            std::swap(cand[occ[i].second.delivery], cand[occ[j].second.delivery]);
            if (improves(cand, sol.routes[r].length(), inst))
                found.push_back(cand);
        }
    return found;
}

// Moves one visit (the pickup or the delivery of a pair) anywhere on its own
// side of the partner visit.
bool singleVisitShiftImproves(Solution const &sol, Instance const &inst)
{
    for (auto const &route : sol.routes)
    {
        auto const &visits = route.visits();
        for (auto const &[pair, occ] : occurrences(visits, inst))
        {
            for (size_t moved : {occ.pickup, occ.delivery})
            {
                auto rest = visits;
                Visit const v = rest[moved];
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(moved));
                for (size_t p = 0; p <= rest.size(); ++p)
                {
                    auto cand = rest;
                    cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(p), v);
                    auto const o = occurrences(cand, inst);
                    bool const ordered = std::any_of(o.begin(), o.end(), [&](auto const &e) {
                        return e.first == pair;
                    });
                    if (ordered && improves(cand, route.length(), inst))
                        return true;
                }
            }
        }
    }
    return false;
}

// Inter-route shift: a pair leaves its route and enters another (or a new one)
// with at most ``window - 1`` visits between its pickup and delivery.
bool interShiftImproves(Solution const &sol, Instance const &inst, int window)
{
    size_t const numRoutes = sol.routes.size();
    bool const canOpen = numRoutes < static_cast<size_t>(inst.numVehicles());
    for (size_t r1 = 0; r1 != numRoutes; ++r1)
    {
        auto const &visits = sol.routes[r1].visits();
        for (auto const &[pair, occ] : occurrences(visits, inst))
        {
            auto reduced = visits;
            reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(occ.delivery));
            reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(occ.pickup));
            auto const reducedEval = evaluateRoute(reduced, inst);
            if (!reducedEval.feasible)
                continue;

            for (size_t r2 = 0; r2 != numRoutes + (canOpen ? 1 : 0); ++r2)
            {
                if (r2 == r1)
                    continue;
                std::vector<Visit> const target = r2 < numRoutes ? sol.routes[r2].visits() : std::vector<Visit>{};
                Distance const before = sol.routes[r1].length() + (r2 < numRoutes ? sol.routes[r2].length() : 0);
                for (size_t p = 0; p <= target.size(); ++p)
                    for (size_t d = p; d <= target.size() && d - p < static_cast<size_t>(window); ++d)
                    {
                        auto cand = target;
                        cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(d), visits[occ.delivery]);
                        cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(p), visits[occ.pickup]);
                        auto const eval = evaluateRoute(cand, inst);
                        if (eval.feasible && reducedEval.length + eval.length < before - COST_EPS)
                            return true;
                    }
            }
        }
    }
    return false;
}

Solution randomSolution(Instance const &inst, int numRoutes, std::mt19937_64 &rng)
{
    std::vector<std::vector<int>> groups(static_cast<size_t>(numRoutes));
    for (int p = 1; p <= inst.numPairs(); ++p)
        groups[rng() % groups.size()].push_back(p);
    Solution sol;
    for (auto const &group : groups)
        if (!group.empty())
            sol.routes.emplace_back(randomUnsplitRoute(group, inst, rng), inst);
    return sol;
}
}  // namespace

TEST_SUITE("neighborhoods")
{
    TEST_CASE("an optimal single-pair route has no improving move")
    {
        Instance const inst = Instance::fromCoordinates(1, 2, 10, INF_DISTANCE, {5}, {{0, 0}, {3, 0}, {6, 0}});
        Solution sol;
        sol.routes.emplace_back(std::vector<Visit>{{1, 5}, {2, 0}}, inst);
        LocalSearch ls(inst);
        std::mt19937_64 rng(1);
        for (auto kind : NEIGHBORHOODS)
            CHECK_FALSE(ls.explore(sol, kind, rng).has_value());
    }

    TEST_CASE("pair swap finds an improving swap exactly when one exists")
    {
        std::mt19937_64 rng(3);
        int withMove = 0;
        for (int trial = 0; trial != 200; ++trial)
        {
            Instance const inst = looseInstance(4, 1, static_cast<std::uint64_t>(trial));
            Solution sol;
            sol.routes.emplace_back(randomUnsplitRoute({1, 2, 3, 4}, inst, rng), inst);
            auto const expected = improvingPairSwaps(sol, 0, inst);

            LocalSearch ls(inst);
            auto const move = ls.explore(sol, Neighborhood::PairSwap, rng);
            REQUIRE(move.has_value() == !expected.empty());
            if (!move)
                continue;
            ++withMove;
            CHECK(std::find(expected.begin(), expected.end(), move->visits1) != expected.end());
            CHECK(move->delta == doctest::Approx(routeLength(move->visits1, inst) - sol.routes[0].length()));
        }
        CHECK(withMove > 0);
    }

    TEST_CASE("inter pair shift finds a move exactly when one exists")
    {
        std::mt19937_64 rng(4);
        int withMove = 0;
        for (int trial = 0; trial != 150; ++trial)
        {
            Instance const inst = looseInstance(5, 3, static_cast<std::uint64_t>(trial));
            Solution const sol = randomSolution(inst, 2, rng);
            LocalSearch ls(inst);
            auto const move = ls.explore(sol, Neighborhood::InterPairShift, rng);
            CHECK(move.has_value() == interShiftImproves(sol, inst, ls.delta()));
            if (move)
            {
                ++withMove;
                Solution after = sol;
                applyMove(after, *move, inst);
                CHECK(after.cost() == doctest::Approx(sol.cost() + move->delta));
            }
        }
        CHECK(withMove > 0);
    }

    TEST_CASE("a pair moves into an empty route when that is shorter")
    {
        // Pair 2 is far from pair 1, so serving it on its own is cheaper.
        std::vector<Point> const points = {{0, 0}, {10, 0}, {-10, 0}, {11, 0}, {-11, 0}};
        Instance const inst = Instance::fromCoordinates(2, 2, 10, INF_DISTANCE, {3, 3}, points);
        Solution sol;
        sol.routes.emplace_back(std::vector<Visit>{{1, 3}, {2, 3}, {3, 0}, {4, 0}}, inst);
        LocalSearch ls(inst);
        std::mt19937_64 rng(2);
        auto const move = ls.explore(sol, Neighborhood::InterPairShift, rng);
        REQUIRE(move.has_value());
        CHECK(move->route2 == 1);
        CHECK(interShiftImproves(sol, inst, ls.delta()));
    }

    TEST_CASE("applying and reverting a move restores the solution")
    {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial != 100; ++trial)
        {
            Instance const inst = looseInstance(6, 3, static_cast<std::uint64_t>(trial));
            Solution const sol = randomSolution(inst, 3, rng);
            LocalSearch ls(inst);
            for (auto kind : NEIGHBORHOODS)
            {
                auto const move = ls.explore(sol, kind, rng);
                if (!move)
                    continue;
                Solution work = sol;
                auto const undo = applyMove(work, *move, inst);
                CHECK(evaluateSolution(work, inst).feasible);
                CHECK(work.cost() == doctest::Approx(sol.cost() + move->delta).epsilon(1e-9));
                CHECK(move->delta < -COST_EPS);
                revertMove(work, undo);
                CHECK(work == sol);
                CHECK(work.cost() == sol.cost());
            }
        }
    }

    TEST_CASE("blocks match the closed-interval definition")
    {
        std::mt19937_64 rng(6);
        for (int trial = 0; trial != 200; ++trial)
        {
            Instance const inst = looseInstance(5, 1, static_cast<std::uint64_t>(trial));
            Route const route(randomUnsplitRoute({1, 2, 3, 4, 5}, inst, rng), inst);
            auto const blocks = findBlocks(route, inst);
            auto const occ = occurrences(route.visits(), inst);
            for (auto const &[pair, o] : occ)
            {
                bool closed = true;
                for (auto const &[other, q] : occ)
                {
                    bool const pIn = q.pickup > o.pickup && q.pickup < o.delivery;
                    bool const dIn = q.delivery > o.pickup && q.delivery < o.delivery;
                    closed &= pIn == dIn;
                }
                auto it = std::find_if(blocks.begin(), blocks.end(), [&](Block const &b) { return b.pair == pair; });
                REQUIRE((it != blocks.end()) == closed);
                if (it == blocks.end())
                    continue;
                CHECK(it->first == o.pickup);
                CHECK(it->last == o.delivery);
                CHECK((it->kind == BlockKind::Simple) == (o.delivery == o.pickup + 1));
            }
        }
    }

    TEST_CASE("split occurrences form separate units")
    {
        Instance const inst = looseInstance(2, 1, 1);
        Load const q = inst.demand(1);
        Route const route({{1, 1}, {3, 0}, {2, inst.demand(2)}, {1, q - 1}, {4, 0}, {3, 0}}, inst);
        REQUIRE(route.feasible());
        auto const units = findUnits(route, inst);
        REQUIRE(units.size() == 3);
        CHECK(units[0].pair == 1);
        CHECK(units[0].pickup == 0);
        CHECK(units[0].delivery == 1);
        CHECK(units[2].pair == 1);
        CHECK(units[2].pickup == 3);
        CHECK(units[2].delivery == 5);
    }

    TEST_CASE("rvnd output is a local optimum")
    {
        std::mt19937_64 rng(8);
        for (int trial = 0; trial != 25; ++trial)
        {
            Instance const inst = looseInstance(5, 3, static_cast<std::uint64_t>(100 + trial));
            Solution const start = randomSolution(inst, 2, rng);
            LocalSearch ls(inst);
            Solution const out = ls.rvnd(start, rng);
            CHECK(out.cost() <= start.cost() + 1e-9);
            CHECK(evaluateSolution(out, inst).feasible);

            for (size_t r = 0; r != out.routes.size(); ++r)
                CHECK(improvingPairSwaps(out, r, inst).empty());
            CHECK_FALSE(singleVisitShiftImproves(out, inst));
            CHECK_FALSE(interShiftImproves(out, inst, ls.delta()));
            for (auto kind : NEIGHBORHOODS)
                CHECK_FALSE(ls.explore(out, kind, rng).has_value());

            // A local optimum is a fixpoint.
            CHECK(ls.rvnd(out, rng) == out);
        }
    }

    TEST_CASE("rvnd is deterministic per seed")
    {
        Instance const inst = looseInstance(8, 3, 77);
        std::mt19937_64 gen(9);
        Solution const start = randomSolution(inst, 3, gen);
        LocalSearch ls(inst);
        std::mt19937_64 a(1234);
        std::mt19937_64 b(1234);
        CHECK(ls.rvnd(start, a) == ls.rvnd(start, b));
    }
}

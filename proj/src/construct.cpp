#include "splitpd/construct.h"

#include <algorithm>
#include <numeric>
#include <random>

using splitpd::ConstructionResult;
using splitpd::Distance;
using splitpd::Instance;
using splitpd::Load;
using splitpd::PairInsertion;
using splitpd::Route;
using splitpd::Solution;
using splitpd::Visit;

namespace
{
bool withinLimit(Distance length, Instance const &inst)
{
    return !inst.hasDistanceLimit()
           || length <= inst.maxLength() + 1e-9 * std::max(1.0, inst.maxLength());
}
}  // namespace

bool splitpd::bestPairInsertion(Route const &route,
                                int pair,
                                Load amount,
                                Instance const &inst,
                                PairInsertion &best)
{
    auto const &visits = route.visits();
    auto const &loads = route.loads();
    auto const size = visits.size();
    auto const pickup = inst.pickupOf(pair);
    auto const delivery = inst.deliveryOf(pair);

    auto prevOf = [&](size_t pos) { return pos == 0 ? inst.startDepot() : visits[pos - 1].vertex; };
    auto nextOf = [&](size_t pos) { return pos == size ? inst.endDepot() : visits[pos].vertex; };
    auto loadBefore = [&](size_t pos) { return pos == 0 ? 0 : loads[pos - 1]; };

    bool found = false;
    Distance bestPickup = INF_DISTANCE;
    for (size_t p = 0; p <= size; ++p)
    {
        auto const prev = prevOf(p);
        auto const next = nextOf(p);
        auto const pickupDelta = inst.dist(prev, pickup) + inst.dist(pickup, next)
                                 - inst.dist(prev, next);
        if (found && pickupDelta >= bestPickup - COST_EPS)
            continue;

        // Cheapest feasible delivery position for this pickup position.
        Load peak = loadBefore(p);
        bool feasible = false;
        PairInsertion cand;
        for (size_t t = p; t <= size; ++t)
        {
            if (t > p)
                peak = std::max(peak, loads[t - 1]);
            if (peak + amount > inst.capacity())
                break;

            Distance delta;
            if (t == p)
                delta = inst.dist(prev, pickup) + inst.dist(pickup, delivery)
                        + inst.dist(delivery, next) - inst.dist(prev, next);
            else
                delta = pickupDelta + inst.dist(prevOf(t), delivery)
                        + inst.dist(delivery, nextOf(t))
                        - inst.dist(prevOf(t), nextOf(t));

            if (!withinLimit(route.length() + delta, inst))
                continue;
            if (!feasible || delta < cand.delta - COST_EPS)
            {
                cand = {p, t, pickupDelta, delta};
                feasible = true;
            }
        }

        if (feasible)
        {
            best = cand;
            bestPickup = pickupDelta;
            found = true;
        }
    }

    return found;
}

std::vector<Visit> splitpd::insertPair(std::vector<Visit> const &visits,
                                       int pair,
                                       Load amount,
                                       size_t pickupPos,
                                       size_t deliveryPos,
                                       Instance const &inst)
{
    std::vector<Visit> result;
    result.reserve(visits.size() + 2);
    for (size_t idx = 0; idx <= visits.size(); ++idx)
    {
        if (idx == pickupPos)
            result.push_back({inst.pickupOf(pair), amount});
        if (idx == deliveryPos)
            result.push_back({inst.deliveryOf(pair), amount});
        if (idx < visits.size())
            result.push_back(visits[idx]);
    }
    return result;
}

ConstructionResult splitpd::greedyConstruct(Instance const &inst, std::uint64_t seed)
{
    std::vector<int> order(inst.numPairs());
    std::iota(order.begin(), order.end(), 1);
    if (seed != 0)
    {
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }

    std::vector<char> routed(inst.numPairs() + 1, 0);
    size_t remaining = order.size();
    Solution sol;

    while (remaining > 0)
    {
        bool found = false;
        int bestPair = 0;
        size_t bestRoute = 0;
        PairInsertion best;

        for (auto const pair : order)
        {
            if (routed[pair])
                continue;
            for (size_t r = 0; r != sol.routes.size(); ++r)
            {
                PairInsertion cand;
                if (!bestPairInsertion(sol.routes[r], pair, inst.demand(pair), inst, cand))
                    continue;
                if (!found || cand.pickupDelta < best.pickupDelta - COST_EPS)
                {
                    found = true;
                    bestPair = pair;
                    bestRoute = r;
                    best = cand;
                }
            }
        }

        if (!found)
        {
            if (sol.routes.size() < static_cast<size_t>(inst.numVehicles())
                && (sol.routes.empty() || !sol.routes.back().empty()))
            {
                sol.routes.emplace_back();
                continue;
            }
            break;
        }

        auto &route = sol.routes[bestRoute];
        route.assign(insertPair(route.visits(),
                                bestPair,
                                inst.demand(bestPair),
                                best.pickupPos,
                                best.deliveryPos,
                                inst),
                     inst);
        routed[bestPair] = 1;
        --remaining;
    }

    sol.removeEmptyRoutes();

    ConstructionResult result;
    result.solution = std::move(sol);
    for (int pair = 1; pair <= inst.numPairs(); ++pair)
        if (!routed[pair])
            result.unrouted.push_back(pair);
    return result;
}

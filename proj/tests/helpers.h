#ifndef SPLITPD_TEST_HELPERS_H
#define SPLITPD_TEST_HELPERS_H

#include "splitpd/instance.h"
#include "splitpd/instance_io.h"
#include "splitpd/model.h"

#include <cstdint>
#include <vector>

namespace testing
{
using namespace splitpd;

/// Two pairs on a line: the second pair's pickup and delivery are almost
/// co-located, so shuttling one unit at a time next to a nearly full vehicle
/// beats any split-free plan.
inline Instance fig2Instance(double eps = 0.001)
{
    std::vector<Point> const points = {{0, 0}, {0, 10}, {5, 10}, {10, 10}, {5 + eps, 10}};
    return Instance::fromCoordinates(2, 1, 100, INF_DISTANCE, {99, 100}, points);
}

/// Small split-prone instance: capacity 10, demands 40-80%, two shared sites.
inline Instance smallInstance(int numPairs, int numVehicles, std::uint64_t seed, Distance maxLength = 400)
{
    GeneratorParams params;
    params.numPairs = numPairs;
    params.numVehicles = numVehicles;
    params.capacity = 10;
    params.maxLength = maxLength;
    params.pickupLocations = 2;
    params.deliveryLocations = 2;
    params.demandLo = 40;
    params.demandHi = 80;
    params.seed = seed;
    return generateInstance(params);
}

/// Replays a solution visit by visit with per-pair on-board bookkeeping.
inline bool replayFeasible(Solution const &sol, Instance const &inst)
{
    int const n = inst.numPairs();
    std::vector<Load> picked(n + 1, 0);
    if (static_cast<int>(sol.routes.size()) > inst.numVehicles())
        return false;

    for (auto const &route : sol.routes)
    {
        std::vector<Load> onBoard(n + 1, 0);
        Load load = 0;
        Distance length = 0;
        int prev = 0;
        for (auto const &visit : route.visits())
        {
            length += inst.dist(prev, visit.vertex);
            prev = visit.vertex;
            int const p = inst.pairOf(visit.vertex);
            if (inst.isPickup(visit.vertex))
            {
                if (visit.amount <= 0)
                    return false;
                onBoard[p] += visit.amount;
                picked[p] += visit.amount;
                load += visit.amount;
                if (load > inst.capacity())
                    return false;
            }
            else
            {
                if (onBoard[p] == 0)
                    return false;
                load -= onBoard[p];
                onBoard[p] = 0;
            }
        }
        length += inst.dist(prev, inst.endDepot());
        if (load != 0 || length > inst.maxLength() + 1e-9 * std::max(1.0, inst.maxLength()))
            return false;
    }

    for (int p = 1; p <= n; ++p)
        if (picked[p] != inst.demand(p))
            return false;
    return true;
}
}  // namespace testing

#endif  // SPLITPD_TEST_HELPERS_H

#ifndef SPLITPD_TEST_FIXTURES_H
#define SPLITPD_TEST_FIXTURES_H

#include "oracles/oracles.h"

#include "splitpd/instance_io.h"
#include "splitpd/pricing.h"

#include <algorithm>
#include <random>

namespace testing
{
using namespace splitpd;

// Random split-prone instance on its own sites, with a finite or infinite limit.
inline Instance frontierInstance(std::mt19937_64 &rng, bool limited)
{
    GeneratorParams params;
    params.numPairs = 4;
    params.numVehicles = 2;
    params.capacity = 10;
    params.demandLo = 30;
    params.demandHi = 90;
    params.pickupLocations = 4;
    params.deliveryLocations = 4;
    params.maxLength = INF_DISTANCE;
    params.seed = rng();
    Instance inst = generateInstance(params);
    if (!limited)
        return inst;

    // Tighten the limit to a random fraction above the longest pair tour.
    Distance longest = 0;
    for (int p = 1; p <= inst.numPairs(); ++p)
        longest = std::max(longest, inst.dist(0, p) + inst.dist(p, inst.deliveryOf(p))
                                        + inst.dist(inst.deliveryOf(p), inst.endDepot()));
    Distance const limit = longest * std::uniform_real_distribution<double>(1.05, 1.8)(rng);
    return Instance(inst.numPairs(), inst.numVehicles(), inst.capacity(), limit, inst.pickupDemands(),
                    inst.locationMatrix());
}

inline PricingDuals randomDuals(Instance const &inst, std::mt19937_64 &rng, bool branching, double pairScale)
{
    int const n = inst.numPairs();
    PricingDuals duals(n);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int i = 1; i <= n; ++i)
        duals.pair[i] = pairScale * unit(rng);
    duals.vehicle = -20 * unit(rng);
    if (!branching)
        return duals;

    for (int i = 1; i <= n; ++i)
        duals.pickupVisit[i] = 20 * unit(rng) - 10;
    for (int k = 0; k != 3; ++k)
    {
        int const i = static_cast<int>(rng() % static_cast<std::uint64_t>(2 * n + 1));
        int const j = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(2 * n + 1));
        if (i != j)
            duals.edge[{i, j}] = 30 * unit(rng) - 10;
    }
    for (int k = 0; k != 3; ++k)
    {
        int const i = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        int const j = inst.deliveryOf(i);
        Load const a = 1 + static_cast<Load>(rng() % static_cast<std::uint64_t>(inst.demand(i)));
        duals.loadedEdge[Leg{i, j, a, a}] = 30 * unit(rng) - 10;
    }
    return duals;
}

// Two pairs with demands of one or two units: a column picks up at most q_j
// of each pair, so no route has more than eight visits. The limit is drawn
// until every pair fits on its own tour.
inline Instance enumerableInstance(std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> limit(150, 320);
    while (true)
    {
        std::vector<Load> demands = {1 + static_cast<Load>(rng() % 2), 1 + static_cast<Load>(rng() % 2)};
        Instance inst = oracle::spreadInstance(2, 2, 3, demands, limit(rng), 5, rng);
        bool fits = true;
        for (int p = 1; p <= 2; ++p)
            fits = fits
                   && inst.dist(0, p) + inst.dist(p, p + 2) + inst.dist(p + 2, inst.endDepot()) <= inst.maxLength();
        if (fits)
            return inst;
    }
}

}  // namespace testing

#endif  // SPLITPD_TEST_FIXTURES_H

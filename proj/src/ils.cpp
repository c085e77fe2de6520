#include "splitpd/ils.h"

#include "splitpd/construct.h"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

using splitpd::IlsParams;
using splitpd::IlsResult;
using splitpd::Instance;
using splitpd::Solution;
using splitpd::Visit;

namespace
{
constexpr int INSERT_ATTEMPTS = 50;

Solution withoutPair(Solution const &sol, int pair, Instance const &inst)
{
    Solution result;
    for (auto const &route : sol.routes)
    {
        std::vector<Visit> visits;
        for (auto const &visit : route.visits())
            if (inst.pairOf(visit.vertex) != pair)
                visits.push_back(visit);
        if (!visits.empty())
            result.routes.emplace_back(std::move(visits), inst);
    }
    return result;
}
}  // namespace

Solution splitpd::perturb(Solution const &sol,
                          Instance const &inst,
                          IlsParams const &params,
                          std::mt19937_64 &rng)
{
    auto const n = inst.numPairs();
    if (n == 0 || params.pMax < 1)
        return sol;

    std::uniform_int_distribution<int> count(1, params.pMax);
    auto const numPert = std::min(count(rng), n);

    std::vector<int> pairs(n);
    std::iota(pairs.begin(), pairs.end(), 1);
    std::shuffle(pairs.begin(), pairs.end(), rng);

    FeasibilityChecker checker(inst);
    Solution current = sol;
    for (int t = 0; t != numPert; ++t)
    {
        auto const pair = pairs[t];
        auto reduced = withoutPair(current, pair, inst);
        auto const numRoutes = reduced.routes.size();
        bool const canOpen = numRoutes < static_cast<size_t>(inst.numVehicles());
        Visit const pickup{inst.pickupOf(pair), inst.demand(pair)};
        Visit const delivery{inst.deliveryOf(pair), inst.demand(pair)};

        bool placed = false;
        std::uniform_int_distribution<size_t> routeDist(0, numRoutes - (canOpen ? 0 : 1));
        for (int attempt = 0; attempt != INSERT_ATTEMPTS && (numRoutes > 0 || canOpen);
             ++attempt)
        {
            auto const r = routeDist(rng);
            std::vector<Visit> visits;
            if (r < numRoutes)
                visits = reduced.routes[r].visits();

            std::uniform_int_distribution<size_t> posDist(0, visits.size());
            auto const pos = posDist(rng);
            visits.insert(visits.begin() + pos, {pickup, delivery});

            Distance length;
            if (!checker.check(visits, length))
                continue;

            if (r < numRoutes)
                reduced.routes[r].assign(std::move(visits), inst);
            else
                reduced.routes.emplace_back(std::move(visits), inst);
            placed = true;
            break;
        }

        if (!placed)
        {
            try
            {
                reduced = rcspInsert(reduced, pair, inst, params.phase2);
            }
            catch (NoCoverError const &)
            {
                continue;  // keep the pair where it was
            }
        }

        current = std::move(reduced);
    }

    return current;
}

IlsResult splitpd::runIls(Instance const &inst, IlsParams const &params)
{
    using Clock = std::chrono::steady_clock;
    auto const start = Clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(Clock::now() - start).count();
    };
    auto timeUp = [&] { return elapsed() >= params.timeLimit; };

    if (params.pMax < 1)
        throw std::invalid_argument("pMax must be at least 1");

    std::mt19937_64 rng(params.seed);
    LocalSearch search(inst, params.delta);

    IlsResult result;
    auto construction = greedyConstruct(inst, params.seed);
    result.constructionIncomplete = construction.incomplete();

    Solution current = std::move(construction.solution);
    for (auto const pair : construction.unrouted)
    {
        try
        {
            current = rcspInsert(current, pair, inst, params.phase2);
        }
        catch (NoCoverError const &)
        {
            throw std::runtime_error("could not build a feasible initial solution");
        }
    }
    if (!evaluateSolution(current, inst).feasible)
        throw std::runtime_error("could not build a feasible initial solution");

    result.initialCost = current.cost();
    result.best = current;

    std::vector<int> pairs(inst.numPairs());
    std::iota(pairs.begin(), pairs.end(), 1);

    auto reachedTarget = [&] {
        return params.targetCost && result.best.cost() <= *params.targetCost + COST_EPS;
    };

    for (long iter = 1;; ++iter)
    {
        current = search.rvnd(std::move(current), rng, params.neighborhoods);

        if (params.useRcsp)
        {
            std::shuffle(pairs.begin(), pairs.end(), rng);
            for (auto const pair : pairs)
            {
                if (timeUp())
                    break;
                try
                {
                    current = rcspInsert(current, pair, inst, params.phase2);
                }
                catch (NoCoverError const &)
                {
                }
            }
        }

        IlsTraceEntry entry;
        entry.iteration = iter;
        entry.current = current.cost();
        if (current.cost() < result.best.cost() - COST_EPS)
        {
            result.best = current;
            entry.improved = true;
        }
        entry.best = result.best.cost();
        entry.elapsed = elapsed();
        result.iterations = iter;

        bool const stop = timeUp()
                          || (params.maxIterations >= 0 && iter >= params.maxIterations)
                          || reachedTarget();
        entry.perturbBase = result.best.cost();
        result.trace.push_back(entry);
        if (stop)
            break;

        current = perturb(result.best, inst, params, rng);
    }

    result.elapsed = elapsed();
    return result;
}

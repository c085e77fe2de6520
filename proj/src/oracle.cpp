#include "splitpd/oracle.h"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <string>

namespace splitpd
{
namespace
{
// Per-pair coverage and open amounts are stored as levels into ``values``.
struct Levels
{
    std::vector<std::vector<Load>> values;  // index 0..n-1
    std::vector<size_t> weight;             // mixed-radix place values
    size_t count = 1;                       // number of level vectors

    int level(size_t code, int k) const
    {
        return static_cast<int>(code / weight[k] % values[k].size());
    }
};

Levels makeLevels(Instance const &inst, bool splitFree)
{
    Levels levels;
    for (int i = 1; i <= inst.numPairs(); ++i)
    {
        std::vector<Load> values;
        if (splitFree)
            values = {0, inst.demand(i)};
        else
            for (Load q = 0; q <= inst.demand(i); ++q)
                values.push_back(q);

        levels.weight.push_back(levels.count);
        levels.count *= values.size();
        levels.values.push_back(std::move(values));
    }
    return levels;
}
}  // namespace

OracleResult bruteForceOptimum(Instance const &inst, OracleParams const &params)
{
    int const n = inst.numPairs();
    if (n > params.maxPairs)
        throw OracleSizeError("oracle accepts at most " + std::to_string(params.maxPairs) + " pairs");

    Levels const lv = makeLevels(inst, params.splitFree);
    size_t const C = lv.count;
    size_t const numVertices = 2 * static_cast<size_t>(n) + 1;  // end depot handled apart
    if (C > params.maxStates || C * C > params.maxStates / numVertices)
        throw OracleSizeError("oracle state space too large");

    size_t const S = numVertices * C * C;
    auto encode = [&](size_t v, size_t cov, size_t open) { return (v * C + cov) * C + open; };

    Distance const L = inst.maxLength();
    auto withinLimit = [&](Distance d) { return d <= L + 1e-9 * std::max(1.0, L); };

    std::vector<Distance> dist(S, INF_DISTANCE);
    std::vector<std::int64_t> parent(S, -1);
    std::vector<Distance> routeCost(C, INF_DISTANCE);
    std::vector<std::int64_t> routeEnd(C, -1);

    using Entry = std::pair<Distance, size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[encode(0, 0, 0)] = 0;
    heap.emplace(0, encode(0, 0, 0));

    auto relax = [&](size_t from, size_t to, Distance d) {
        if (d < dist[to] && withinLimit(d))
        {
            dist[to] = d;
            parent[to] = static_cast<std::int64_t>(from);
            heap.emplace(d, to);
        }
    };

    while (!heap.empty())
    {
        auto const [d, s] = heap.top();
        heap.pop();
        if (d > dist[s])
            continue;

        size_t const open = s % C;
        size_t const cov = s / C % C;
        int const v = static_cast<int>(s / (C * C));

        Load load = 0;
        for (int k = 0; k != n; ++k)
            load += lv.values[k][lv.level(open, k)];

        for (int k = 0; k != n; ++k)
        {
            int const j = k + 1;
            auto const &values = lv.values[k];
            int const covLevel = lv.level(cov, k);
            int const openLevel = lv.level(open, k);
            Distance const nd = d + inst.dist(v, j);

            for (size_t next = covLevel + 1; next < values.size(); ++next)
            {
                Load const amount = values[next] - values[covLevel];
                Load const onBoard = values[openLevel] + amount;
                if (load + amount > inst.capacity())
                    break;

                auto const openNext = std::find(values.begin(), values.end(), onBoard);
                if (openNext == values.end())
                    continue;

                size_t const covCode = cov + (next - covLevel) * lv.weight[k];
                size_t const openCode = open + (openNext - values.begin() - openLevel) * lv.weight[k];
                relax(s, encode(j, covCode, openCode), nd);
            }

            if (openLevel > 0)
            {
                size_t const openCode = open - openLevel * lv.weight[k];
                relax(s, encode(inst.deliveryOf(j), cov, openCode), d + inst.dist(v, inst.deliveryOf(j)));
            }
        }

        if (load == 0 && v != 0)
        {
            Distance const total = d + inst.dist(v, inst.endDepot());
            if (withinLimit(total) && total < routeCost[cov])
            {
                routeCost[cov] = total;
                routeEnd[cov] = static_cast<std::int64_t>(s);
            }
        }
    }

    // Combine at most m routes whose coverage levels add up to the demands.
    int const m = inst.numVehicles();
    size_t target = 0;
    for (int k = 0; k != n; ++k)
        target += (lv.values[k].size() - 1) * lv.weight[k];

    auto fits = [&](size_t part, size_t whole) {
        for (int k = 0; k != n; ++k)
            if (lv.level(part, k) > lv.level(whole, k))
                return false;
        return true;
    };

    std::vector<size_t> usable;
    for (size_t c = 1; c != C; ++c)
        if (routeCost[c] < INF_DISTANCE)
            usable.push_back(c);

    std::vector<std::vector<Distance>> best(m + 1, std::vector<Distance>(C, INF_DISTANCE));
    std::vector<std::vector<std::int64_t>> choice(m + 1, std::vector<std::int64_t>(C, -1));
    best[0][0] = 0;
    for (int r = 1; r <= m; ++r)
    {
        best[r] = best[r - 1];
        for (size_t part : usable)
            for (size_t whole = part; whole != C; ++whole)
            {
                if (!fits(part, whole) || best[r - 1][whole - part] == INF_DISTANCE)
                    continue;

                Distance const value = best[r - 1][whole - part] + routeCost[part];
                if (value < best[r][whole] - 1e-12)
                {
                    best[r][whole] = value;
                    choice[r][whole] = static_cast<std::int64_t>(part);
                }
            }
    }

    OracleResult result;
    result.states = S;
    if (best[m][target] == INF_DISTANCE)
        return result;

    Solution sol;
    size_t remaining = target;
    for (int r = m; r > 0 && remaining != 0; --r)
    {
        if (choice[r][remaining] < 0)
            continue;

        size_t const part = static_cast<size_t>(choice[r][remaining]);
        std::vector<Visit> visits;
        for (std::int64_t s = routeEnd[part]; s >= 0 && s / static_cast<std::int64_t>(C * C) != 0;
             s = parent[s])
        {
            int const v = static_cast<int>(s / static_cast<std::int64_t>(C * C));
            Load amount = 0;
            if (inst.isPickup(v))
            {
                size_t const cov = static_cast<size_t>(s) / C % C;
                size_t const prevCov = static_cast<size_t>(parent[s]) / C % C;
                int const k = v - 1;
                amount = lv.values[k][lv.level(cov, k)] - lv.values[k][lv.level(prevCov, k)];
            }
            visits.push_back({v, amount});
        }
        std::reverse(visits.begin(), visits.end());
        sol.routes.emplace_back(std::move(visits), inst);
        remaining -= part;
    }

    result.cost = sol.cost();
    result.best = std::move(sol);
    return result;
}
}  // namespace splitpd

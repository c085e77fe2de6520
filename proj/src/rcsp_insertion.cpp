#include "splitpd/rcsp_insertion.h"

#include <algorithm>
#include <limits>

using splitpd::ArcKind;
using splitpd::AuxArc;
using splitpd::AuxGraph;
using splitpd::Distance;
using splitpd::InsertionLabel;
using splitpd::Instance;
using splitpd::Load;
using splitpd::Phase2Mode;
using splitpd::RouteLabels;
using splitpd::Selection;
using splitpd::Solution;
using splitpd::Visit;

namespace
{
Distance limitWithSlack(Distance maxLength)
{
    return maxLength < splitpd::INF_DISTANCE
               ? maxLength + 1e-9 * std::max(1.0, maxLength)
               : splitpd::INF_DISTANCE;
}
}  // namespace

AuxGraph splitpd::buildAuxGraph(std::vector<Visit> const &routeVisits,
                                int pair,
                                Instance const &inst,
                                bool shuttles)
{
    AuxGraph graph;
    graph.pair = pair;
    graph.maxLength = inst.maxLength();
    graph.route = routeVisits;

    auto &seq = graph.sequence;
    seq.push_back(inst.startDepot());
    std::vector<Load> onBoard(inst.numPairs() + 1, 0);
    Load load = 0;
    graph.freeCapacity.push_back(inst.capacity());
    for (auto const &visit : routeVisits)
    {
        if (inst.pairOf(visit.vertex) == pair)
            throw std::invalid_argument("route still contains the pair to insert");

        seq.push_back(visit.vertex);
        auto const p = inst.pairOf(visit.vertex);
        if (inst.isPickup(visit.vertex))
        {
            onBoard[p] += visit.amount;
            load += visit.amount;
        }
        else
        {
            load -= onBoard[p];
            onBoard[p] = 0;
        }
        graph.freeCapacity.push_back(inst.capacity() - load);
    }
    seq.push_back(inst.endDepot());

    auto const numRoute = static_cast<int>(seq.size());  // N
    graph.out.resize(3 * numRoute - 2);

    // travel[i] = distance along the route from sigma_0 to sigma_i.
    std::vector<Distance> travel(numRoute, 0);
    for (int i = 1; i < numRoute; ++i)
        travel[i] = travel[i - 1] + inst.dist(seq[i - 1], seq[i]);

    auto const x = inst.pickupOf(pair);
    auto const y = inst.deliveryOf(pair);
    auto addArc = [&](int from, int to, Distance dist, Load load, ArcKind kind) {
        graph.out[from].push_back({from, to, dist, load, kind});
    };

    for (int i = 0; i + 1 < numRoute; ++i)
    {
        auto const v = AuxGraph::routeNode(i);
        auto const p = AuxGraph::pickupNode(i);
        auto const d = AuxGraph::deliveryNode(i);
        auto const freeI = graph.freeCapacity[i];

        addArc(v, AuxGraph::routeNode(i + 1), inst.dist(seq[i], seq[i + 1]), 0, ArcKind::Travel);
        addArc(v, p, inst.dist(seq[i], x), 0, ArcKind::Travel);

        if (freeI > 0)
        {
            addArc(p, d, inst.dist(x, y), freeI, ArcKind::Direct);
            if (shuttles)
                addArc(d, d, inst.dist(y, x) + inst.dist(x, y), freeI, ArcKind::Shuttle);
        }

        auto minFree = freeI;
        for (int j = i + 1; j + 1 < numRoute; ++j)
        {
            minFree = std::min(minFree, graph.freeCapacity[j]);
            if (minFree <= 0)
                break;

            auto const carried = inst.dist(x, seq[i + 1]) + travel[j] - travel[i + 1]
                                 + inst.dist(seq[j], y);
            addArc(p, AuxGraph::deliveryNode(j), carried, minFree, ArcKind::IndirectPD);
            addArc(d,
                   AuxGraph::deliveryNode(j),
                   inst.dist(y, x) + carried,
                   minFree,
                   ArcKind::IndirectDD);
        }

        addArc(d, AuxGraph::routeNode(i + 1), inst.dist(y, seq[i + 1]), 0, ArcKind::Travel);
    }

    return graph;
}

std::vector<InsertionLabel> RouteLabels::labels() const
{
    std::vector<InsertionLabel> result;
    result.reserve(frontier.size());
    for (auto const idx : frontier)
        result.push_back(arena[idx].label);
    return result;
}

RouteLabels splitpd::propagateLabels(AuxGraph const &graph,
                                     Load demand,
                                     PropagationOptions const &options)
{
    auto const numNodes = graph.numNodes();
    auto const numRoute = static_cast<int>(graph.sequence.size());
    auto const limit = limitWithSlack(graph.maxLength);

    // Lower bound on the remaining distance from each node to the sink.
    std::vector<Distance> toSink(numNodes, INF_DISTANCE);
    toSink[graph.sink()] = 0;
    for (int u = numNodes - 2; u >= 0; --u)
        for (auto const &arc : graph.out[u])
            if (arc.to != u)
                toSink[u] = std::min(toSink[u], arc.dist + toSink[arc.to]);

    // Distance along the original route from v_i to the sink.
    std::vector<Distance> suffix(numRoute, 0);
    for (int i = numRoute - 2; i >= 0; --i)
    {
        auto const &travelArc = graph.out[AuxGraph::routeNode(i)].front();
        suffix[i] = suffix[i + 1] + travelArc.dist;
    }

    RouteLabels result;
    std::vector<std::vector<int>> frontiers(numNodes);
    Distance bound = INF_DISTANCE;

    auto insert = [&](int node, InsertionLabel label, int parent, int arc, int shuttles) {
        auto const reach = label.dist + toSink[node];
        if (reach > limit)
            return;
        if (options.completionBound && reach > bound + 1e-9)
            return;

        auto &front = frontiers[node];
        auto const &arena = result.arena;
        auto const upper = std::upper_bound(
            front.begin(), front.end(), label.dist,
            [&](Distance d, int idx) { return d < arena[idx].label.dist; });
        if (upper != front.begin() && arena[*(upper - 1)].label.load >= label.load)
            return;  // dominated

        auto first = std::lower_bound(
            front.begin(), front.end(), label.dist,
            [&](int idx, Distance d) { return arena[idx].label.dist < d; });
        auto last = first;
        while (last != front.end() && arena[*last].label.load <= label.load)
            ++last;

        result.arena.push_back({label, node, parent, arc, shuttles});
        auto const pos = front.erase(first, last);
        front.insert(pos, static_cast<int>(result.arena.size() - 1));

        if (options.completionBound && node % 3 == 0 && label.load >= demand)
        {
            auto const complete = label.dist + suffix[node / 3];
            if (complete <= limit)
                bound = std::min(bound, complete);
        }
    };

    insert(0, {0.0, 0}, -1, -1, 0);

    for (int u = 0; u != numNodes; ++u)
    {
        auto const &arcs = graph.out[u];

        for (auto const &arc : arcs)
        {
            if (arc.to != u)
                continue;

            auto const snapshot = frontiers[u];
            for (auto const idx : snapshot)
            {
                auto const base = result.arena[idx].label;
                for (int k = 1; base.load + (k - 1) * arc.load < demand; ++k)
                {
                    InsertionLabel next{base.dist + k * arc.dist,
                                        std::min(demand, base.load + k * arc.load)};
                    insert(u, next, idx, -1, k);
                }
            }
        }

        auto const current = frontiers[u];
        for (auto const idx : current)
        {
            auto const base = result.arena[idx].label;
            for (size_t a = 0; a != arcs.size(); ++a)
            {
                auto const &arc = arcs[a];
                if (arc.to == u)
                    continue;

                InsertionLabel next{base.dist + arc.dist,
                                    std::min(demand, base.load + arc.load)};
                insert(arc.to, next, idx, static_cast<int>(a), 0);
            }
        }
    }

    result.frontier = frontiers[graph.sink()];
    return result;
}

std::vector<Visit> splitpd::realizeLabel(AuxGraph const &graph,
                                         RouteLabels const &labels,
                                         size_t frontierIdx,
                                         Load amount,
                                         Instance const &inst)
{
    std::vector<int> chain;
    for (int idx = labels.frontier.at(frontierIdx); idx >= 0;
         idx = labels.arena[idx].parent)
        chain.push_back(idx);
    std::reverse(chain.begin(), chain.end());

    auto const numRoute = static_cast<int>(graph.sequence.size());
    auto const x = inst.pickupOf(graph.pair);
    auto const y = inst.deliveryOf(graph.pair);

    struct Trip
    {
        size_t pickup;
        Load cap;
    };

    std::vector<Visit> visits;
    std::vector<Trip> trips;
    auto pushRoute = [&](int i) {
        if (i > 0 && i + 1 < numRoute)
            visits.push_back(graph.route[i - 1]);
    };
    auto pushTrip = [&](Load cap, int from, int to) {  // carries sigma_{from..to}
        trips.push_back({visits.size(), cap});
        visits.push_back({x, 0});
        for (int i = from; i <= to; ++i)
            pushRoute(i);
        visits.push_back({y, 0});
    };

    for (size_t c = 1; c < chain.size(); ++c)
    {
        auto const &entry = labels.arena[chain[c]];
        auto const &parent = labels.arena[entry.parent];

        if (entry.arc < 0)
        {
            auto const gap = (entry.node - 2) / 3;
            for (int k = 0; k != entry.shuttles; ++k)
                pushTrip(graph.freeCapacity[gap], 1, 0);
            continue;
        }

        auto const &arc = graph.out[parent.node][entry.arc];
        auto const fromGap = parent.node / 3;
        auto const toGap = arc.to / 3;
        switch (arc.kind)
        {
            case ArcKind::Travel:
                if (arc.to % 3 == 0)
                    pushRoute(toGap);
                break;
            case ArcKind::Direct:
                pushTrip(arc.load, 1, 0);
                break;
            case ArcKind::IndirectPD:
            case ArcKind::IndirectDD:
                pushTrip(arc.load, fromGap + 1, toGap);
                break;
            case ArcKind::Shuttle:
                break;
        }
    }

    Load remaining = amount;
    std::vector<char> drop(visits.size(), 0);
    for (auto const &trip : trips)
    {
        auto const give = std::min(trip.cap, remaining);
        remaining -= give;
        visits[trip.pickup].amount = give;
        if (give == 0)
        {
            drop[trip.pickup] = 1;
            for (auto k = trip.pickup + 1; k != visits.size(); ++k)
                if (visits[k].vertex == y)
                {
                    drop[k] = 1;
                    break;
                }
        }
    }

    if (remaining > 0)
        throw std::logic_error("label cannot carry the requested amount");

    std::vector<Visit> result;
    result.reserve(visits.size());
    for (size_t k = 0; k != visits.size(); ++k)
        if (!drop[k])
            result.push_back(visits[k]);
    return result;
}

namespace
{
struct RatioKey
{
    bool infinite;
    double ratio;
    Load load;

    bool betterThan(RatioKey const &other) const
    {
        if (infinite != other.infinite)
            return infinite;
        if (!infinite && ratio != other.ratio)
            return ratio > other.ratio;
        return load > other.load;
    }
};
}  // namespace

Selection splitpd::combineInsertions(std::vector<std::vector<InsertionLabel>> const &labels,
                                     std::vector<Distance> const &costs,
                                     Load demand,
                                     Phase2Mode mode)
{
    auto const numRoutes = labels.size();
    if (costs.size() != numRoutes)
        throw std::invalid_argument("one route cost per label set expected");

    auto detour = [&](size_t r, InsertionLabel const &label) {
        return std::max(0.0, label.dist - costs[r]);
    };

    std::vector<Load> maxLoad(numRoutes, 0);
    Load total = 0;
    for (size_t r = 0; r != numRoutes; ++r)
    {
        for (auto const &label : labels[r])
            maxLoad[r] = std::max(maxLoad[r], std::min(label.load, demand));
        total += maxLoad[r];
    }
    if (total < demand)
        throw NoCoverError("not enough free capacity to cover the pair");

    Selection selection;
    if (demand <= 0)
        return selection;

    if (mode == Phase2Mode::Greedy)
    {
        std::vector<char> used(numRoutes, 0);
        Load remaining = demand;
        Load unusedCap = total;
        while (remaining > 0)
        {
            bool found = false;
            RatioKey bestKey{};
            Selection::Pick best;
            for (size_t r = 0; r != numRoutes; ++r)
            {
                if (used[r])
                    continue;
                for (size_t l = 0; l != labels[r].size(); ++l)
                {
                    auto const &label = labels[r][l];
                    auto const cover = std::min(label.load, remaining);
                    if (cover <= 0 || remaining - cover > unusedCap - maxLoad[r])
                        continue;

                    auto const extra = detour(r, label);
                    RatioKey key{extra <= COST_EPS, extra > COST_EPS ? cover / extra : 0.0,
                                 label.load};
                    if (!found || key.betterThan(bestKey))
                    {
                        found = true;
                        bestKey = key;
                        best = {r, l, cover};
                    }
                }
            }

            if (!found)
                throw std::logic_error("greedy label selection got stuck");

            used[best.route] = 1;
            unusedCap -= maxLoad[best.route];
            remaining -= best.amount;
            selection.cost += detour(best.route, labels[best.route][best.label]);
            selection.picks.push_back(best);
        }
        return selection;
    }

    // Exact: dp[r][c] = cheapest detour covering c units with the first r routes.
    auto const width = static_cast<size_t>(demand) + 1;
    std::vector<Distance> dp((numRoutes + 1) * width, INF_DISTANCE);
    std::vector<int> choice((numRoutes + 1) * width, -1);  // label index or -1
    std::vector<int> from((numRoutes + 1) * width, -1);
    dp[0] = 0;

    for (size_t r = 0; r != numRoutes; ++r)
        for (size_t c = 0; c != width; ++c)
        {
            auto const here = dp[r * width + c];
            if (here == INF_DISTANCE)
                continue;

            auto const skip = (r + 1) * width + c;
            if (here < dp[skip])
            {
                dp[skip] = here;
                choice[skip] = -1;
                from[skip] = static_cast<int>(c);
            }

            for (size_t l = 0; l != labels[r].size(); ++l)
            {
                auto const &label = labels[r][l];
                if (label.load <= 0)
                    continue;

                auto const nc = std::min<size_t>(demand, c + label.load);
                auto const target = (r + 1) * width + nc;
                auto const value = here + detour(r, label);
                if (value < dp[target])
                {
                    dp[target] = value;
                    choice[target] = static_cast<int>(l);
                    from[target] = static_cast<int>(c);
                }
            }
        }

    if (dp[numRoutes * width + demand] == INF_DISTANCE)
        throw NoCoverError("not enough free capacity to cover the pair");

    selection.cost = dp[numRoutes * width + demand];
    size_t c = demand;
    for (size_t r = numRoutes; r-- > 0;)
    {
        auto const cell = (r + 1) * width + c;
        auto const prev = static_cast<size_t>(from[cell]);
        if (choice[cell] >= 0)
            selection.picks.push_back(
                {r, static_cast<size_t>(choice[cell]), static_cast<Load>(c - prev)});
        c = prev;
    }
    std::reverse(selection.picks.begin(), selection.picks.end());
    return selection;
}

Solution splitpd::rcspInsert(Solution const &sol,
                             int pair,
                             Instance const &inst,
                             Phase2Mode mode)
{
    auto const demand = inst.demand(pair);
    bool const covered = pickedAmounts(sol, inst)[pair] == demand;

    std::vector<std::vector<Visit>> reduced;
    for (auto const &route : sol.routes)
    {
        std::vector<Visit> visits;
        for (auto const &visit : route.visits())
            if (inst.pairOf(visit.vertex) != pair)
                visits.push_back(visit);
        if (!visits.empty())
            reduced.push_back(std::move(visits));
    }
    if (reduced.size() < static_cast<size_t>(inst.numVehicles()))
        reduced.emplace_back();  // candidate new route

    std::vector<AuxGraph> graphs;
    std::vector<RouteLabels> routeLabels;
    std::vector<std::vector<InsertionLabel>> labels;
    std::vector<Distance> costs;
    for (auto const &visits : reduced)
    {
        graphs.push_back(buildAuxGraph(visits, pair, inst));
        routeLabels.push_back(propagateLabels(graphs.back(), demand));
        labels.push_back(routeLabels.back().labels());
        costs.push_back(routeLength(visits, inst));

        // A route that no longer fits the distance limit on its own (possible
        // without the triangle inequality) cannot be handled.
        if (routeLabels.back().frontier.empty())
        {
            if (covered)
                return sol;
            throw NoCoverError("route infeasible after removing the pair");
        }
    }

    auto const selection = combineInsertions(labels, costs, demand, mode);

    for (auto const &pick : selection.picks)
        reduced[pick.route] = realizeLabel(
            graphs[pick.route], routeLabels[pick.route], pick.label, pick.amount, inst);

    Solution result;
    for (auto &visits : reduced)
        if (!visits.empty())
            result.routes.emplace_back(std::move(visits), inst);

    for (auto const &route : result.routes)
        if (!route.feasible())
            throw std::logic_error("insertion produced an infeasible route");

    if (covered && result.cost() > sol.cost() + COST_EPS)
        return sol;
    return result;
}

#include "splitpd/model.h"

#include <algorithm>
#include <numeric>
#include <string>

using splitpd::Distance;
using splitpd::FeasibilityChecker;
using splitpd::Instance;
using splitpd::Load;
using splitpd::Route;
using splitpd::RouteEvaluation;
using splitpd::Solution;
using splitpd::SolutionEvaluation;
using splitpd::Violation;
using splitpd::Visit;

namespace
{
bool exceedsLimit(Distance length, Instance const &inst)
{
    return inst.hasDistanceLimit()
           && length > inst.maxLength() + 1e-9 * std::max(1.0, inst.maxLength());
}

void validateVisit(Visit const &visit, Instance const &inst)
{
    if (!inst.isValidVertex(visit.vertex) || inst.isDepot(visit.vertex))
        throw splitpd::MalformedRoute("invalid customer vertex "
                                      + std::to_string(visit.vertex));

    if (inst.isPickup(visit.vertex)
        && (visit.amount < 1 || visit.amount > inst.demand(visit.vertex)))
        throw splitpd::MalformedRoute("pickup amount out of range at vertex "
                                      + std::to_string(visit.vertex));
}
}  // namespace

char const *splitpd::toString(Violation violation)
{
    switch (violation)
    {
        case Violation::None:
            return "none";
        case Violation::Precedence:
            return "precedence";
        case Violation::Capacity:
            return "capacity";
        case Violation::Distance:
            return "distance";
    }
    return "unknown";
}

Distance splitpd::routeLength(std::span<Visit const> visits, Instance const &inst)
{
    Distance length = 0;
    int prev = inst.startDepot();
    for (auto const &visit : visits)
    {
        length += inst.dist(prev, visit.vertex);
        prev = visit.vertex;
    }
    return length + inst.dist(prev, inst.endDepot());
}

RouteEvaluation splitpd::evaluateRoute(std::span<Visit const> visits,
                                       Instance const &inst)
{
    std::vector<Load> onBoard(inst.numPairs() + 1, 0);
    std::vector<char> picked(inst.numPairs() + 1, 0);

    bool precedence = false;
    bool capacity = false;
    Load load = 0;
    for (auto const &visit : visits)
    {
        validateVisit(visit, inst);
        auto const pair = inst.pairOf(visit.vertex);
        if (inst.isPickup(visit.vertex))
        {
            onBoard[pair] += visit.amount;
            load += visit.amount;
            picked[pair] = 1;
        }
        else
        {
            if (!picked[pair])
                precedence = true;
            load -= onBoard[pair];
            onBoard[pair] = 0;
        }

        if (load > inst.capacity())
            capacity = true;
    }

    if (load != 0)
        precedence = true;

    RouteEvaluation eval;
    eval.length = routeLength(visits, inst);
    if (precedence)
        eval.violation = Violation::Precedence;
    else if (capacity)
        eval.violation = Violation::Capacity;
    else if (exceedsLimit(eval.length, inst))
        eval.violation = Violation::Distance;
    eval.feasible = eval.violation == Violation::None;
    return eval;
}

FeasibilityChecker::FeasibilityChecker(Instance const &inst)
    : inst_(&inst),
      onBoard_(inst.numPairs() + 1, 0),
      picked_(inst.numPairs() + 1, 0)
{
}

bool FeasibilityChecker::check(std::span<Visit const> visits, Distance &length)
{
    auto const &inst = *inst_;
    length = routeLength(visits, inst);

    bool ok = !exceedsLimit(length, inst);
    Load load = 0;
    for (auto const &visit : visits)
    {
        if (!ok)
            break;

        auto const pair = inst.pairOf(visit.vertex);
        if (inst.isPickup(visit.vertex))
        {
            onBoard_[pair] += visit.amount;
            load += visit.amount;
            picked_[pair] = 1;
            ok = load <= inst.capacity();
        }
        else
        {
            ok = picked_[pair] != 0;
            load -= onBoard_[pair];
            onBoard_[pair] = 0;
        }
    }
    ok = ok && load == 0;

    for (auto const &visit : visits)
    {
        auto const pair = inst.pairOf(visit.vertex);
        onBoard_[pair] = 0;
        picked_[pair] = 0;
    }

    return ok;
}

Route::Route(std::vector<Visit> visits, Instance const &inst)
{
    assign(std::move(visits), inst);
}

void Route::assign(std::vector<Visit> visits, Instance const &inst)
{
    auto const eval = evaluateRoute(visits, inst);

    std::vector<Load> onBoard(inst.numPairs() + 1, 0);
    loads_.assign(visits.size(), 0);
    Load load = 0;
    for (size_t idx = 0; idx != visits.size(); ++idx)
    {
        auto &visit = visits[idx];
        auto const pair = inst.pairOf(visit.vertex);
        if (inst.isPickup(visit.vertex))
        {
            onBoard[pair] += visit.amount;
            load += visit.amount;
        }
        else
        {
            visit.amount = onBoard[pair];
            load -= onBoard[pair];
            onBoard[pair] = 0;
        }
        loads_[idx] = load;
    }

    visits_ = std::move(visits);
    length_ = eval.length;
    violation_ = eval.violation;
}

Distance Solution::cost() const
{
    Distance total = 0;
    for (auto const &route : routes)
        total += route.length();
    return total;
}

void Solution::removeEmptyRoutes()
{
    std::erase_if(routes, [](Route const &route) { return route.empty(); });
}

std::vector<Load> splitpd::pickedAmounts(Solution const &sol, Instance const &inst)
{
    std::vector<Load> picked(inst.numPairs() + 1, 0);
    for (auto const &route : sol.routes)
        for (auto const &visit : route.visits())
            if (inst.isPickup(visit.vertex))
                picked[visit.vertex] += visit.amount;
    return picked;
}

SolutionEvaluation splitpd::evaluateSolution(Solution const &sol,
                                             Instance const &inst)
{
    SolutionEvaluation eval;

    size_t used = 0;
    for (auto const &route : sol.routes)
    {
        auto const routeEval = evaluateRoute(route.visits(), inst);
        eval.cost += routeEval.length;
        if (!routeEval.feasible)
            ++eval.infeasibleRoutes;
        if (!route.empty())
            ++used;
    }

    eval.tooManyRoutes = used > static_cast<size_t>(inst.numVehicles());

    auto const picked = pickedAmounts(sol, inst);
    for (int pair = 1; pair <= inst.numPairs(); ++pair)
        if (picked[pair] != inst.demand(pair))
            eval.uncovered.emplace_back(pair, inst.demand(pair) - picked[pair]);

    eval.feasible = eval.infeasibleRoutes == 0 && !eval.tooManyRoutes
                    && eval.uncovered.empty();
    return eval;
}

size_t splitpd::customerVisits(Solution const &sol)
{
    size_t count = 0;
    for (auto const &route : sol.routes)
        count += route.size();
    return count;
}

size_t splitpd::splitPairs(Solution const &sol, Instance const &inst)
{
    std::vector<int> pickups(inst.numPairs() + 1, 0);
    for (auto const &route : sol.routes)
        for (auto const &visit : route.visits())
            if (inst.isPickup(visit.vertex))
                ++pickups[visit.vertex];

    return std::count_if(pickups.begin(), pickups.end(), [](int c) { return c > 1; });
}

namespace
{
// Candidate rewrite of a visit sequence: keep ``keepPickup`` (absorbing the
// amount of ``dropPickup``) and drop the listed positions.
std::vector<Visit> rewrite(std::vector<Visit> const &visits,
                           size_t keepPickup,
                           Load mergedAmount,
                           std::vector<size_t> const &drop)
{
    std::vector<Visit> result;
    result.reserve(visits.size());
    for (size_t idx = 0; idx != visits.size(); ++idx)
    {
        if (std::find(drop.begin(), drop.end(), idx) != drop.end())
            continue;

        auto visit = visits[idx];
        if (idx == keepPickup)
            visit.amount = mergedAmount;
        result.push_back(visit);
    }
    return result;
}

constexpr size_t NONE = static_cast<size_t>(-1);

// Finds the best length-non-increasing merge in ``visits``; returns false when
// no pattern can be merged.
bool mergeOnce(std::vector<Visit> &visits, Instance const &inst)
{
    auto const origEval = splitpd::evaluateRoute(visits, inst);

    for (int pair = 1; pair <= inst.numPairs(); ++pair)
    {
        std::vector<size_t> seq;
        for (size_t idx = 0; idx != visits.size(); ++idx)
            if (inst.pairOf(visits[idx].vertex) == pair)
                seq.push_back(idx);

        for (size_t k = 0; k + 1 < seq.size(); ++k)
        {
            auto const first = seq[k];
            auto const second = seq[k + 1];
            bool const firstPickup = inst.isPickup(visits[first].vertex);
            bool const secondPickup = inst.isPickup(visits[second].vertex);

            // (pickup to keep, pickup to drop, delivery candidates, merged amount)
            std::vector<std::pair<size_t, size_t>> pickupChoices;
            std::vector<size_t> deliveryCands;
            Load merged = 0;

            if (firstPickup && secondPickup)
            {
                size_t t = k + 2;
                while (t < seq.size() && inst.isPickup(visits[seq[t]].vertex))
                    ++t;
                if (t == seq.size())
                    continue;

                pickupChoices = {{first, second}, {second, first}};
                merged = visits[first].amount + visits[second].amount;
                deliveryCands.push_back(seq[t]);
                if (t + 1 < seq.size() && !inst.isPickup(visits[seq[t + 1]].vertex))
                    deliveryCands.push_back(seq[t + 1]);
            }
            else if (!firstPickup && !secondPickup && k > 0)
            {
                // Second delivery of a pair with nothing picked in between.
                pickupChoices = {{NONE, NONE}};
                deliveryCands = {first, second};
            }
            else
                continue;

            Distance bestLength = origEval.length + 1e-9;
            std::vector<Visit> best;
            bool found = false;
            for (auto const &[keepP, dropP] : pickupChoices)
                for (auto const keepD : deliveryCands)
                {
                    std::vector<size_t> drop;
                    if (dropP != NONE)
                        drop.push_back(dropP);
                    for (auto const d : deliveryCands)
                        if (d != keepD)
                            drop.push_back(d);

                    auto cand = rewrite(visits, keepP, merged, drop);
                    auto const eval = splitpd::evaluateRoute(cand, inst);
                    if ((eval.feasible || !origEval.feasible)
                        && eval.length <= bestLength)
                    {
                        bestLength = eval.length;
                        best = std::move(cand);
                        found = true;
                    }
                }

            if (found)
            {
                visits = std::move(best);
                return true;
            }
        }
    }

    return false;
}
}  // namespace

Route splitpd::mergeRedundantVisits(Route const &route, Instance const &inst)
{
    if (!inst.dtiHolds())
        return route;

    auto visits = route.visits();
    bool changed = false;
    while (mergeOnce(visits, inst))
        changed = true;

    return changed ? Route(std::move(visits), inst) : route;
}

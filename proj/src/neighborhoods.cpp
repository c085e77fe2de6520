#include "splitpd/neighborhoods.h"

#include <algorithm>

using splitpd::Block;
using splitpd::BlockKind;
using splitpd::Distance;
using splitpd::Instance;
using splitpd::LocalSearch;
using splitpd::Move;
using splitpd::MoveUndo;
using splitpd::Neighborhood;
using splitpd::Route;
using splitpd::Solution;
using splitpd::Unit;
using splitpd::Visit;

char const *splitpd::toString(Neighborhood kind)
{
    switch (kind)
    {
        case Neighborhood::PairSwap:
            return "PairSwap";
        case Neighborhood::PairShift:
            return "PairShift";
        case Neighborhood::PickShift:
            return "PickShift";
        case Neighborhood::DelShift:
            return "DelShift";
        case Neighborhood::BlockSwap:
            return "BlockSwap";
        case Neighborhood::BlockShift:
            return "BlockShift";
        case Neighborhood::InterPairSwap:
            return "InterPairSwap";
        case Neighborhood::InterPairShift:
            return "InterPairShift";
        case Neighborhood::InterBlockSwap:
            return "InterBlockSwap";
        case Neighborhood::InterBlockShift:
            return "InterBlockShift";
    }
    return "unknown";
}

std::vector<Unit> splitpd::findUnits(Route const &route, Instance const &inst)
{
    auto const &visits = route.visits();
    std::vector<int> lastSeen(inst.numPairs() + 1, -1);  // previous index per pair
    std::vector<Unit> units;

    for (size_t idx = 0; idx != visits.size(); ++idx)
    {
        auto const vertex = visits[idx].vertex;
        auto const pair = inst.pairOf(vertex);
        auto const prev = lastSeen[pair];
        if (inst.isDelivery(vertex) && prev >= 0 && inst.isPickup(visits[prev].vertex))
        {
            // The pickup must not itself follow another pickup of the pair.
            bool wellFormed = true;
            for (int k = prev - 1; k >= 0; --k)
                if (inst.pairOf(visits[k].vertex) == pair)
                {
                    wellFormed = !inst.isPickup(visits[k].vertex);
                    break;
                }

            if (wellFormed)
                units.push_back({pair, static_cast<size_t>(prev), idx});
        }
        lastSeen[pair] = static_cast<int>(idx);
    }

    std::sort(units.begin(), units.end(), [](Unit const &a, Unit const &b) {
        return a.pickup < b.pickup;
    });
    return units;
}

std::vector<Block> splitpd::findBlocks(Route const &route, Instance const &inst)
{
    auto const units = findUnits(route, inst);

    // Unit index owning each position, or -1.
    std::vector<int> owner(route.size(), -1);
    for (size_t u = 0; u != units.size(); ++u)
    {
        owner[units[u].pickup] = static_cast<int>(u);
        owner[units[u].delivery] = static_cast<int>(u);
    }

    std::vector<Block> blocks;
    for (auto const &unit : units)
    {
        bool closed = true;
        for (auto k = unit.pickup + 1; k < unit.delivery && closed; ++k)
        {
            auto const o = owner[k];
            closed = o >= 0 && units[o].pickup > unit.pickup
                     && units[o].delivery < unit.delivery;
        }

        if (closed)
            blocks.push_back({unit.pair,
                              unit.pickup,
                              unit.delivery,
                              unit.delivery == unit.pickup + 1 ? BlockKind::Simple
                                                               : BlockKind::Compound});
    }
    return blocks;
}

namespace
{
// Writes the resulting visit sequences; routes that became empty are kept.
void assignMove(Solution &sol, Move const &move, Instance const &inst)
{
    if (move.route2 == sol.routes.size())
        sol.routes.emplace_back();

    sol.routes[move.route1].assign(move.visits1, inst);
    if (move.interRoute())
        sol.routes[move.route2].assign(move.visits2, inst);
}

void appendRange(std::vector<Visit> &out,
                 std::vector<Visit> const &src,
                 size_t first,
                 size_t last)  // [first, last)
{
    out.insert(out.end(), src.begin() + first, src.begin() + last);
}

// Copies ``src`` without positions ``skip1`` and ``skip2``.
void copyWithout(std::vector<Visit> &out,
                 std::vector<Visit> const &src,
                 size_t skip1,
                 size_t skip2)
{
    out.clear();
    for (size_t idx = 0; idx != src.size(); ++idx)
        if (idx != skip1 && idx != skip2)
            out.push_back(src[idx]);
}

// Builds src[0, p) + pickup + src[p, p + k) + delivery + src[p + k, end).
void insertAt(std::vector<Visit> &out,
              std::vector<Visit> const &src,
              Visit pickup,
              Visit delivery,
              size_t p,
              size_t k)
{
    out.clear();
    appendRange(out, src, 0, p);
    out.push_back(pickup);
    appendRange(out, src, p, p + k);
    out.push_back(delivery);
    appendRange(out, src, p + k, src.size());
}

constexpr size_t NONE = static_cast<size_t>(-1);
}  // namespace

MoveUndo splitpd::applyMove(Solution &sol, Move const &move, Instance const &inst)
{
    MoveUndo undo{sol.routes};
    assignMove(sol, move, inst);
    sol.removeEmptyRoutes();
    return undo;
}

void splitpd::revertMove(Solution &sol, MoveUndo const &undo)
{
    sol.routes = undo.routes;
}

LocalSearch::LocalSearch(Instance const &inst, int delta)
    : inst_(&inst), delta_(delta), checker_(inst)
{
    if (delta < 1)
        throw std::invalid_argument("shift window must be at least 1");
}

bool LocalSearch::accept(Solution const &sol,
                         size_t r1,
                         std::vector<Visit> const &cand1,
                         size_t r2,
                         std::vector<Visit> const *cand2,
                         Distance &delta)
{
    auto const &inst = *inst_;
    Distance oldLength = sol.routes[r1].length();
    Distance newLength = routeLength(cand1, inst);
    if (cand2)
    {
        if (r2 < sol.routes.size())
            oldLength += sol.routes[r2].length();
        newLength += routeLength(*cand2, inst);
    }

    if (newLength >= oldLength - COST_EPS)
        return false;

    Distance length;
    if (!checker_.check(cand1, length))
        return false;
    if (cand2 && !checker_.check(*cand2, length))
        return false;

    delta = newLength - oldLength;
    return true;
}

std::optional<Move> LocalSearch::makeMove(Neighborhood kind,
                                          size_t r1,
                                          size_t r2,
                                          int pair1,
                                          int pair2,
                                          Distance delta,
                                          bool inter)
{
    Move move;
    move.kind = kind;
    move.route1 = r1;
    move.route2 = inter ? r2 : r1;
    move.pair1 = pair1;
    move.pair2 = pair2;
    move.visits1 = cand1_;
    if (inter)
        move.visits2 = cand2_;
    move.delta = delta;
    return move;
}

std::optional<Move> LocalSearch::explore(Solution const &sol,
                                         Neighborhood kind,
                                         std::mt19937_64 &rng)
{
    bool const blockMove = kind == Neighborhood::BlockSwap
                           || kind == Neighborhood::BlockShift
                           || kind == Neighborhood::InterBlockSwap
                           || kind == Neighborhood::InterBlockShift;

    std::vector<Candidate> cands;
    for (size_t r = 0; r != sol.routes.size(); ++r)
    {
        if (blockMove)
            for (auto const &block : findBlocks(sol.routes[r], *inst_))
                cands.push_back({r, {block.pair, block.first, block.last}});
        else
            for (auto const &unit : findUnits(sol.routes[r], *inst_))
                cands.push_back({r, unit});
    }
    std::shuffle(cands.begin(), cands.end(), rng);

    switch (kind)
    {
        case Neighborhood::PairSwap:
            return pairSwap(sol, cands);
        case Neighborhood::PairShift:
            return pairShift(sol, cands);
        case Neighborhood::PickShift:
            return pickShift(sol, cands);
        case Neighborhood::DelShift:
            return delShift(sol, cands);
        case Neighborhood::BlockSwap:
            return blockSwap(sol, cands);
        case Neighborhood::BlockShift:
            return blockShift(sol, cands);
        case Neighborhood::InterPairSwap:
            return interPairSwap(sol, cands);
        case Neighborhood::InterPairShift:
            return interPairShift(sol, cands);
        case Neighborhood::InterBlockSwap:
            return interBlockSwap(sol, cands);
        case Neighborhood::InterBlockShift:
            return interBlockShift(sol, cands);
    }
    return std::nullopt;
}

std::optional<Move> LocalSearch::pairSwap(Solution const &sol,
                                          std::vector<Candidate> const &units)
{
    for (size_t i = 0; i != units.size(); ++i)
        for (size_t j = i + 1; j != units.size(); ++j)
        {
            auto const &u = units[i];
            auto const &v = units[j];
            if (u.route != v.route || u.unit.pair == v.unit.pair)
                continue;

            cand1_ = sol.routes[u.route].visits();
            std::swap(cand1_[u.unit.pickup], cand1_[v.unit.pickup]);
            std::swap(cand1_[u.unit.delivery], cand1_[v.unit.delivery]);

            Distance delta;
            if (accept(sol, u.route, cand1_, NONE, nullptr, delta))
                return makeMove(Neighborhood::PairSwap, u.route, u.route,
                                u.unit.pair, v.unit.pair, delta, false);
        }
    return std::nullopt;
}

std::optional<Move> LocalSearch::pairShift(Solution const &sol,
                                           std::vector<Candidate> const &units)
{
    auto const window = static_cast<size_t>(delta_);
    for (auto const &[r, unit] : units)
    {
        auto const &visits = sol.routes[r].visits();
        copyWithout(reduced1_, visits, unit.pickup, unit.delivery);
        auto const size = reduced1_.size();
        auto const a = unit.pickup;
        auto const gap = unit.delivery - unit.pickup - 1;

        auto const lo = a > window ? a - window : 0;
        auto const hi = std::min(size, a + window);
        for (auto p = lo; p <= hi; ++p)
            for (size_t k = 0; k < window && p + k <= size; ++k)
            {
                if (p == a && k == gap)
                    continue;

                insertAt(cand1_, reduced1_, visits[a], visits[unit.delivery], p, k);
                Distance delta;
                if (accept(sol, r, cand1_, NONE, nullptr, delta))
                    return makeMove(Neighborhood::PairShift, r, r, unit.pair, 0, delta, false);
            }
    }
    return std::nullopt;
}

std::optional<Move> LocalSearch::pickShift(Solution const &sol,
                                           std::vector<Candidate> const &units)
{
    for (auto const &[r, unit] : units)
    {
        auto const &visits = sol.routes[r].visits();
        copyWithout(reduced1_, visits, unit.pickup, NONE);

        // The delivery sits at unit.delivery - 1 in the reduced sequence.
        for (size_t p = 0; p < unit.delivery; ++p)
        {
            if (p == unit.pickup)
                continue;

            cand1_.assign(reduced1_.begin(), reduced1_.end());
            cand1_.insert(cand1_.begin() + p, visits[unit.pickup]);
            Distance delta;
            if (accept(sol, r, cand1_, NONE, nullptr, delta))
                return makeMove(Neighborhood::PickShift, r, r, unit.pair, 0, delta, false);
        }
    }
    return std::nullopt;
}

std::optional<Move> LocalSearch::delShift(Solution const &sol,
                                          std::vector<Candidate> const &units)
{
    for (auto const &[r, unit] : units)
    {
        auto const &visits = sol.routes[r].visits();
        copyWithout(reduced1_, visits, unit.delivery, NONE);

        for (auto p = unit.pickup + 1; p <= reduced1_.size(); ++p)
        {
            if (p == unit.delivery)
                continue;

            cand1_.assign(reduced1_.begin(), reduced1_.end());
            cand1_.insert(cand1_.begin() + p, visits[unit.delivery]);
            Distance delta;
            if (accept(sol, r, cand1_, NONE, nullptr, delta))
                return makeMove(Neighborhood::DelShift, r, r, unit.pair, 0, delta, false);
        }
    }
    return std::nullopt;
}

std::optional<Move> LocalSearch::blockSwap(Solution const &sol,
                                           std::vector<Candidate> const &blocks)
{
    for (size_t i = 0; i != blocks.size(); ++i)
        for (size_t j = i + 1; j != blocks.size(); ++j)
        {
            if (blocks[i].route != blocks[j].route)
                continue;

            auto u = blocks[i].unit;
            auto v = blocks[j].unit;
            if (u.pickup > v.pickup)
                std::swap(u, v);
            if (u.delivery >= v.pickup)  // nested blocks
                continue;

            auto const r = blocks[i].route;
            auto const &visits = sol.routes[r].visits();
            cand1_.clear();
            appendRange(cand1_, visits, 0, u.pickup);
            appendRange(cand1_, visits, v.pickup, v.delivery + 1);
            appendRange(cand1_, visits, u.delivery + 1, v.pickup);
            appendRange(cand1_, visits, u.pickup, u.delivery + 1);
            appendRange(cand1_, visits, v.delivery + 1, visits.size());

            Distance delta;
            if (accept(sol, r, cand1_, NONE, nullptr, delta))
                return makeMove(Neighborhood::BlockSwap, r, r,
                                blocks[i].unit.pair, blocks[j].unit.pair, delta, false);
        }
    return std::nullopt;
}

std::optional<Move> LocalSearch::blockShift(Solution const &sol,
                                            std::vector<Candidate> const &blocks)
{
    for (auto const &[r, block] : blocks)
    {
        auto const &visits = sol.routes[r].visits();
        reduced1_.clear();
        appendRange(reduced1_, visits, 0, block.pickup);
        appendRange(reduced1_, visits, block.delivery + 1, visits.size());

        for (size_t p = 0; p <= reduced1_.size(); ++p)
        {
            if (p == block.pickup)
                continue;

            cand1_.clear();
            appendRange(cand1_, reduced1_, 0, p);
            appendRange(cand1_, visits, block.pickup, block.delivery + 1);
            appendRange(cand1_, reduced1_, p, reduced1_.size());

            Distance delta;
            if (accept(sol, r, cand1_, NONE, nullptr, delta))
                return makeMove(Neighborhood::BlockShift, r, r, block.pair, 0, delta, false);
        }
    }
    return std::nullopt;
}

std::optional<Move> LocalSearch::interPairSwap(Solution const &sol,
                                               std::vector<Candidate> const &units)
{
    for (size_t i = 0; i != units.size(); ++i)
        for (size_t j = i + 1; j != units.size(); ++j)
        {
            auto const &u = units[i];
            auto const &v = units[j];
            if (u.route == v.route)
                continue;

            auto const &visits1 = sol.routes[u.route].visits();
            auto const &visits2 = sol.routes[v.route].visits();
            cand1_ = visits1;
            cand2_ = visits2;
            cand1_[u.unit.pickup] = visits2[v.unit.pickup];
            cand1_[u.unit.delivery] = visits2[v.unit.delivery];
            cand2_[v.unit.pickup] = visits1[u.unit.pickup];
            cand2_[v.unit.delivery] = visits1[u.unit.delivery];

            Distance delta;
            if (accept(sol, u.route, cand1_, v.route, &cand2_, delta))
                return makeMove(Neighborhood::InterPairSwap, u.route, v.route,
                                u.unit.pair, v.unit.pair, delta, true);
        }
    return std::nullopt;
}

std::optional<Move> LocalSearch::interPairShift(Solution const &sol,
                                                std::vector<Candidate> const &units)
{
    auto const numRoutes = sol.routes.size();
    bool const canOpen = numRoutes < static_cast<size_t>(inst_->numVehicles());
    auto const window = static_cast<size_t>(delta_);
    std::vector<Visit> const empty;

    for (auto const &[r1, unit] : units)
    {
        auto const &visits = sol.routes[r1].visits();
        copyWithout(reduced1_, visits, unit.pickup, unit.delivery);
        cand1_ = reduced1_;

        for (size_t r2 = 0; r2 != numRoutes + (canOpen ? 1 : 0); ++r2)
        {
            if (r2 == r1)
                continue;

            auto const &target = r2 < numRoutes ? sol.routes[r2].visits() : empty;
            for (size_t p = 0; p <= target.size(); ++p)
                for (size_t k = 0; k < window && p + k <= target.size(); ++k)
                {
                    insertAt(cand2_, target, visits[unit.pickup], visits[unit.delivery], p, k);
                    Distance delta;
                    if (accept(sol, r1, cand1_, r2, &cand2_, delta))
                        return makeMove(Neighborhood::InterPairShift, r1, r2,
                                        unit.pair, 0, delta, true);
                }
        }
    }
    return std::nullopt;
}

std::optional<Move> LocalSearch::interBlockSwap(Solution const &sol,
                                                std::vector<Candidate> const &blocks)
{
    for (size_t i = 0; i != blocks.size(); ++i)
        for (size_t j = i + 1; j != blocks.size(); ++j)
        {
            auto const &u = blocks[i];
            auto const &v = blocks[j];
            if (u.route == v.route)
                continue;

            auto const &visits1 = sol.routes[u.route].visits();
            auto const &visits2 = sol.routes[v.route].visits();

            cand1_.clear();
            appendRange(cand1_, visits1, 0, u.unit.pickup);
            appendRange(cand1_, visits2, v.unit.pickup, v.unit.delivery + 1);
            appendRange(cand1_, visits1, u.unit.delivery + 1, visits1.size());

            cand2_.clear();
            appendRange(cand2_, visits2, 0, v.unit.pickup);
            appendRange(cand2_, visits1, u.unit.pickup, u.unit.delivery + 1);
            appendRange(cand2_, visits2, v.unit.delivery + 1, visits2.size());

            Distance delta;
            if (accept(sol, u.route, cand1_, v.route, &cand2_, delta))
                return makeMove(Neighborhood::InterBlockSwap, u.route, v.route,
                                u.unit.pair, v.unit.pair, delta, true);
        }
    return std::nullopt;
}

std::optional<Move> LocalSearch::interBlockShift(Solution const &sol,
                                                 std::vector<Candidate> const &blocks)
{
    auto const numRoutes = sol.routes.size();
    bool const canOpen = numRoutes < static_cast<size_t>(inst_->numVehicles());
    std::vector<Visit> const empty;

    for (auto const &[r1, block] : blocks)
    {
        auto const &visits = sol.routes[r1].visits();
        cand1_.clear();
        appendRange(cand1_, visits, 0, block.pickup);
        appendRange(cand1_, visits, block.delivery + 1, visits.size());

        for (size_t r2 = 0; r2 != numRoutes + (canOpen ? 1 : 0); ++r2)
        {
            if (r2 == r1)
                continue;

            auto const &target = r2 < numRoutes ? sol.routes[r2].visits() : empty;
            for (size_t p = 0; p <= target.size(); ++p)
            {
                cand2_.clear();
                appendRange(cand2_, target, 0, p);
                appendRange(cand2_, visits, block.pickup, block.delivery + 1);
                appendRange(cand2_, target, p, target.size());

                Distance delta;
                if (accept(sol, r1, cand1_, r2, &cand2_, delta))
                    return makeMove(Neighborhood::InterBlockShift, r1, r2,
                                    block.pair, 0, delta, true);
            }
        }
    }
    return std::nullopt;
}

Solution LocalSearch::rvnd(Solution sol, std::mt19937_64 &rng, unsigned mask)
{
    std::vector<Neighborhood> order;
    for (int k = 0; k != NUM_NEIGHBORHOODS; ++k)
        if (mask & (1u << k))
            order.push_back(NEIGHBORHOODS[k]);
    std::shuffle(order.begin(), order.end(), rng);

    size_t idx = 0;
    while (idx < order.size())
    {
        auto const move = explore(sol, order[idx], rng);
        if (!move)
        {
            ++idx;
            continue;
        }

        assignMove(sol, *move, *inst_);
        auto &route1 = sol.routes[move->route1];
        route1 = mergeRedundantVisits(route1, *inst_);
        if (move->interRoute())
        {
            auto &route2 = sol.routes[move->route2];
            route2 = mergeRedundantVisits(route2, *inst_);
        }
        sol.removeEmptyRoutes();
        idx = 0;
    }

    return sol;
}

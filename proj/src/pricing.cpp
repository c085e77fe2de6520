#include "splitpd/pricing.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <map>
#include <set>
#include <unordered_map>

namespace splitpd
{
namespace
{
constexpr double TIE_EPS = 1e-9;

// Shortest distance from every vertex to the end depot (Dijkstra on the
// reversed complete graph; the matrix need not be metric).
std::vector<Distance> distancesToEnd(Instance const &inst)
{
    int const V = inst.numVertices();
    int const end = inst.endDepot();
    std::vector<Distance> dist(V, INF_DISTANCE);
    std::vector<char> done(V, 0);
    dist[end] = 0;

    for (int iter = 0; iter != V; ++iter)
    {
        int best = -1;
        for (int v = 0; v != V; ++v)
            if (!done[v] && (best < 0 || dist[v] < dist[best]))
                best = v;

        if (best < 0 || dist[best] == INF_DISTANCE)
            break;

        done[best] = 1;
        for (int u = 0; u != V; ++u)
            if (!done[u] && u != end)
                dist[u] = std::min(dist[u], inst.dist(u, best) + dist[best]);
    }

    return dist;
}

struct Label
{
    int vertex = 0;
    int parent = -1;
    Distance d = 0;
    double f = 0;
    Load load = 0;
    Load amount = 0;  // handled at ``vertex``
    bool alive = true;
};

struct Completion
{
    double f;
    Distance d;
    int last;  // label at the last customer
};

class Labeller
{
public:
    Labeller(PricingDuals const &duals, Instance const &inst, PricingOptions const &options)
        : duals_(duals),
          inst_(inst),
          options_(options),
          n_(inst.numPairs()),
          V_(inst.numVertices()),
          toEnd_(distancesToEnd(inst)),
          base_(static_cast<size_t>(V_) * V_),
          loaded_(static_cast<size_t>(V_) * V_)
    {
        maxLength_ = std::min(inst.maxLength(), options.maxLength);
        scale_ = std::pow(10.0, options.scale);

        for (int i = 0; i != V_; ++i)
            for (int j = 0; j != V_; ++j)
            {
                double value = options.costFactor * inst.dist(i, j);
                if (i == 0)
                    value -= duals.vehicle;
                if (inst.isPickup(j))
                    value -= duals.pickupVisit[j];
                base_[idx(i, j)] = value;
            }

        for (auto const &[arc, value] : duals.edge)
            base_[idx(arc.first, arc.second)] -= value;

        for (auto const &[leg, value] : duals.loadedEdge)
            if (value != 0)
            {
                loaded_[idx(leg.from, leg.to)].push_back({leg, value});
                hasLoadedDuals_ = true;
            }

        dti_ = inst.dtiHolds() && !hasLoadedDuals_
               && reducedCostsSatisfyDti(duals, inst, options.costFactor);
    }

    PricingResult run()
    {
        push(Label{}, std::vector<Load>(2 * static_cast<size_t>(n_), 0));

        for (size_t step = 1; !queue_.empty(); ++step)
        {
            if (options_.deadline && step % 1024 == 0 && std::chrono::steady_clock::now() > *options_.deadline)
                throw PricingTimeout("pricing deadline passed");

            auto const [d, id] = queue_.top();
            queue_.pop();
            if (!labels_[id].alive)
                continue;
            extend(id);
        }

        return collect();
    }

private:
    struct LoadedDual
    {
        Leg leg;
        double value;
    };

    size_t idx(int i, int j) const { return static_cast<size_t>(i) * V_ + j; }

    // Per label: n open loads followed by n picked-up totals.
    Load const *open(int label) const { return open_.data() + static_cast<size_t>(label) * 2 * n_; }

    double arcCost(int i, int j, Load hi, Load hj) const
    {
        double value = base_[idx(i, j)];
        for (auto const &[leg, dual] : loaded_[idx(i, j)])
            if (leg.fromAmount == hi && leg.toAmount == hj)
                value -= dual;
        return value;
    }

    bool dominates(int a, Label const &lb, Load const *openB) const
    {
        Label const &la = labels_[a];
        if (la.d > lb.d + TIE_EPS || la.f > lb.f + TIE_EPS)
            return false;

        if (options_.dominance == Dominance::Relaxed)
            return true;

        Load const *openA = open(a);
        for (int k = n_; k != 2 * n_; ++k)
            if (openA[k] > openB[k])
                return false;

        if (hasLoadedDuals_)
            return la.amount == lb.amount && std::equal(openA, openA + n_, openB);

        for (int k = 0; k != n_; ++k)
        {
            if (openA[k] > openB[k])
                return false;
            if (!dti_ && (openA[k] > 0) != (openB[k] > 0))
                return false;
        }

        return true;
    }

    // Labels can only dominate each other within a group: same vertex, plus the
    // handled amount and open loads under loaded-edge duals, or the set of open
    // pairs when the delivery triangle inequality fails.
    std::vector<Load> groupKey(Label const &label, Load const *openLoads) const
    {
        std::vector<Load> key = {label.vertex};
        if (options_.dominance == Dominance::Relaxed)
            return key;
        if (hasLoadedDuals_)
        {
            key.push_back(label.amount);
            key.insert(key.end(), openLoads, openLoads + n_);
        }
        else if (!dti_)
            for (int k = 0; k != n_; ++k)
                key.push_back(openLoads[k] > 0);
        return key;
    }

    long long bucketKey(int vertex, Distance d) const
    {
        return static_cast<long long>(std::floor(d * scale_ + TIE_EPS)) * V_ + vertex;
    }

    void kill(int id) { labels_[id].alive = false; }

    void push(Label label, std::vector<Load> const &openLoads)
    {
        auto &here = groups_[groupKey(label, openLoads.data())];
        std::erase_if(here, [&](int id) { return !labels_[id].alive; });

        for (int id : here)
            if (dominates(id, label, openLoads.data()))
                return;

        std::vector<int> *bucket = nullptr;
        if (options_.bucketLimit >= 0)
        {
            bucket = &buckets_[bucketKey(label.vertex, label.d)];
            std::erase_if(*bucket, [&](int id) { return !labels_[id].alive; });
            if (static_cast<int>(bucket->size()) >= options_.bucketLimit)
            {
                if (bucket->empty())
                    return;

                auto worst = std::max_element(bucket->begin(), bucket->end(), [&](int a, int b) {
                    return labels_[a].f < labels_[b].f;
                });
                if (labels_[*worst].f <= label.f)
                    return;
                kill(*worst);
                bucket->erase(worst);
            }
        }

        if (labels_.size() >= options_.labelCap)
            throw PricingLimitError("pricing label limit reached");

        int const id = static_cast<int>(labels_.size());
        labels_.push_back(label);
        open_.insert(open_.end(), openLoads.begin(), openLoads.end());

        for (int other : here)
        {
            if (labels_[other].alive && dominates(id, labels_[other], open(other)))
                kill(other);
        }

        here.push_back(id);
        if (bucket)
            bucket->push_back(id);
        queue_.emplace(label.d, id);
    }

    void extend(int id)
    {
        Label const from = labels_[id];
        std::vector<Load> const openLoads(open(id), open(id) + 2 * n_);
        int const i = from.vertex;
        Load const Q = inst_.capacity();
        ExtensionFilter const *filter = options_.filter;

        auto reachable = [&](int j, Distance nd) {
            if (filter && filter->forbids(i, j, from.d))
                return false;
            return nd + toEnd_[j] <= maxLength_ + 1e-9 * std::max(1.0, maxLength_);
        };

        for (int j = 1; j <= n_ && from.load < Q; ++j)
        {
            // An open pair may be topped up; a route never picks up more than q_j in total.
            Load const maxAmount = std::min(inst_.demand(j) - openLoads[n_ + j - 1], Q - from.load);
            if (maxAmount <= 0)
                continue;

            Distance const nd = from.d + inst_.dist(i, j);
            if (!reachable(j, nd))
                continue;

            std::vector<Load> next = openLoads;
            for (Load q = 1; q <= maxAmount; ++q)
            {
                next[j - 1] = openLoads[j - 1] + q;
                next[n_ + j - 1] = openLoads[n_ + j - 1] + q;
                double const f = from.f + arcCost(i, j, from.amount, q) - duals_.pair[j] * q;
                push(Label{j, id, nd, f, from.load + q, q, true}, next);
            }
        }

        for (int k = 1; k <= n_; ++k)
        {
            Load const amount = openLoads[k - 1];
            if (amount == 0)
                continue;

            int const j = inst_.deliveryOf(k);
            Distance const nd = from.d + inst_.dist(i, j);
            if (!reachable(j, nd))
                continue;

            std::vector<Load> next = openLoads;
            next[k - 1] = 0;
            double const f = from.f + arcCost(i, j, from.amount, amount);
            push(Label{j, id, nd, f, from.load - amount, amount, true}, next);
        }

        if (from.load == 0 && i != 0)
        {
            int const end = inst_.endDepot();
            Distance const nd = from.d + inst_.dist(i, end);
            if (nd <= maxLength_ + 1e-9 * std::max(1.0, maxLength_))
            {
                double const f = from.f + arcCost(i, end, from.amount, 0);
                minReducedCost_ = std::min(minReducedCost_, f);
                if (f < -options_.rcEpsilon)
                    completions_.push_back({f, nd, id});
            }
        }
    }

    std::vector<Visit> visitsOf(int last) const
    {
        std::vector<Visit> visits;
        for (int id = last; id >= 0 && labels_[id].vertex != 0; id = labels_[id].parent)
            visits.push_back({labels_[id].vertex, labels_[id].amount});
        std::reverse(visits.begin(), visits.end());
        return visits;
    }

    PricingResult collect()
    {
        PricingResult result;
        result.labels = labels_.size();
        result.minReducedCost = minReducedCost_;

        std::stable_sort(completions_.begin(), completions_.end(),
                         [](Completion const &a, Completion const &b) { return a.f < b.f; });

        std::set<std::vector<std::pair<int, Load>>> seen;
        for (auto const &completion : completions_)
        {
            if (result.columns.size() >= options_.maxColumns)
                break;

            auto visits = visitsOf(completion.last);
            std::vector<std::pair<int, Load>> key;
            for (auto const &visit : visits)
                key.emplace_back(visit.vertex, visit.amount);
            if (!seen.insert(key).second)
                continue;

            result.columns.push_back(makeColumn(visits, inst_));
            result.reducedCosts.push_back(completion.f);
        }

        return result;
    }

    PricingDuals const &duals_;
    Instance const &inst_;
    PricingOptions const &options_;
    int n_;
    int V_;
    Distance maxLength_ = INF_DISTANCE;
    double scale_ = 1;
    bool dti_ = true;
    bool hasLoadedDuals_ = false;

    std::vector<Distance> toEnd_;
    std::vector<double> base_;
    std::vector<std::vector<LoadedDual>> loaded_;

    std::vector<Label> labels_;
    std::vector<Load> open_;
    std::map<std::vector<Load>, std::vector<int>> groups_;
    std::unordered_map<long long, std::vector<int>> buckets_;
    std::priority_queue<std::pair<Distance, int>,
                        std::vector<std::pair<Distance, int>>,
                        std::greater<>>
        queue_;

    std::vector<Completion> completions_;
    double minReducedCost_ = INF_DISTANCE;
};
}  // namespace

Column makeColumn(std::vector<Visit> const &visits, Instance const &inst)
{
    int const n = inst.numPairs();
    Route const route(visits, inst);

    Column column;
    column.visits = route.visits();
    column.cost = route.length();
    column.coverage.assign(n + 1, 0);
    column.pickupVisits.assign(n + 1, 0);

    int prev = inst.startDepot();
    Load prevAmount = 0;
    for (auto const &visit : column.visits)
    {
        if (inst.isPickup(visit.vertex))
        {
            column.coverage[visit.vertex] += visit.amount;
            column.pickupVisits[visit.vertex] += 1;
        }

        column.legs.push_back({prev, visit.vertex, prevAmount, visit.amount});
        prev = visit.vertex;
        prevAmount = visit.amount;
    }

    column.legs.push_back({prev, inst.endDepot(), prevAmount, 0});
    return column;
}

PricingDuals::PricingDuals(int numPairs) : pair(numPairs + 1, 0), pickupVisit(numPairs + 1, 0)
{
}

double reducedCost(Column const &column, PricingDuals const &duals, double costFactor)
{
    double value = costFactor * column.cost - duals.vehicle;

    for (size_t i = 1; i < column.coverage.size(); ++i)
        value -= duals.pair[i] * column.coverage[i] + duals.pickupVisit[i] * column.pickupVisits[i];

    for (auto const &leg : column.legs)
    {
        if (auto it = duals.edge.find({leg.from, leg.to}); it != duals.edge.end())
            value -= it->second;
        if (auto it = duals.loadedEdge.find(leg); it != duals.loadedEdge.end())
            value -= it->second;
    }

    return value;
}

ExtensionFilter::ExtensionFilter(Instance const &inst, Distance maxLength)
    : stride_(inst.numVertices()), thresholds_(stride_ * stride_, INF_DISTANCE)
{
    int const n = inst.numPairs();
    Distance const L = std::min(inst.maxLength(), maxLength);
    int const end = inst.endDepot();
    auto d = [&](int a, int b) { return inst.dist(a, b); };
    auto set = [&](int i, int j, Distance value) { thresholds_[i * stride_ + j] = value; };

    if (L == INF_DISTANCE)
        return;

    for (int j = 1; j <= n; ++j)
        set(0, j, L - (d(0, j) + d(j, n + j) + d(n + j, end)));

    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
        {
            if (i == j)
                continue;

            Distance const viaI = d(i, j) + d(j, n + i) + d(n + i, n + j) + d(n + j, end);
            Distance const viaJ = d(i, j) + d(j, n + j) + d(n + j, n + i) + d(n + i, end);
            set(i, j, L - std::min(viaI, viaJ));
        }

    for (int i = 1; i <= n; ++i)
        for (int j = n + 1; j <= 2 * n; ++j)
            set(i, j, L - (d(i, j) + d(j, n + i) + d(n + i, end)));

    for (int i = n + 1; i <= 2 * n; ++i)
        for (int j = 1; j <= n; ++j)
            set(i, j, L - (d(i, j) + d(j, n + j) + d(n + j, end)));

    for (int i = n + 1; i <= 2 * n; ++i)
        for (int j = n + 1; j <= 2 * n; ++j)
            if (i != j)
                set(i, j, L - (d(i, j) + d(j, end)));
}

bool reducedCostsSatisfyDti(PricingDuals const &duals, Instance const &inst, double costFactor)
{
    int const V = inst.numVertices();
    int const n = inst.numPairs();
    std::vector<double> rc(static_cast<size_t>(V) * V);
    for (int i = 0; i != V; ++i)
        for (int j = 0; j != V; ++j)
            rc[i * V + j] = costFactor * inst.dist(i, j);

    for (auto const &[arc, value] : duals.edge)
        rc[arc.first * V + arc.second] -= value;

    // Vehicle and pickup-visit duals sit on every arc leaving the depot or
    // entering a pickup, so they cancel in the comparison.
    for (int k = n + 1; k <= 2 * n; ++k)
        for (int i = 0; i != V - 1; ++i)
            for (int j = 1; j != V; ++j)
            {
                if (i == k || j == k || i == j)
                    continue;
                if (rc[i * V + j] > rc[i * V + k] + rc[k * V + j] + 1e-9)
                    return false;
            }

    return true;
}

PricingResult priceExact(PricingDuals const &duals, Instance const &inst, PricingOptions const &options)
{
    Labeller labeller(duals, inst, options);
    return labeller.run();
}

CascadeResult priceCascade(PricingDuals const &duals, Instance const &inst, PricingOptions const &base)
{
    struct Stage
    {
        Dominance dominance;
        int limit;
    };

    static constexpr Stage stages[] = {
        {Dominance::Relaxed, 1},  {Dominance::Relaxed, 3},   {Dominance::Relaxed, 10},
        {Dominance::Relaxed, 100}, {Dominance::Relaxed, -1}, {Dominance::Full, 3},
        {Dominance::Full, 10},    {Dominance::Full, 100},    {Dominance::Full, -1},
    };

    CascadeResult result;
    for (size_t s = 0; s != std::size(stages); ++s)
    {
        PricingOptions options = base;
        options.dominance = stages[s].dominance;
        options.bucketLimit = stages[s].limit;

        auto priced = priceExact(duals, inst, options);
        result.stagesRun = static_cast<int>(s) + 1;
        if (!priced.columns.empty())
        {
            result.columns = std::move(priced.columns);
            result.reducedCosts = std::move(priced.reducedCosts);
            result.stage = static_cast<int>(s);
            return result;
        }
    }

    result.stage = static_cast<int>(std::size(stages)) - 1;
    result.proven = true;
    return result;
}
}  // namespace splitpd

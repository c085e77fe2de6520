#ifndef SPLITPD_RCSP_INSERTION_H
#define SPLITPD_RCSP_INSERTION_H

#include "splitpd/instance.h"
#include "splitpd/model.h"

#include <stdexcept>
#include <vector>

namespace splitpd
{
enum class ArcKind
{
    Travel,      // original route leg, or a leg to/from the inserted pair
    Direct,      // pickup x then straight to delivery n+x in the same gap
    IndirectPD,  // pickup x, follow the route, deliver n+x later
    IndirectDD,  // after delivering n+x, pick up x again and deliver later
    Shuttle,     // extra n+x -> x -> n+x round trip inside one gap
};

struct AuxArc
{
    int from = 0;
    int to = 0;
    Distance dist = 0;
    Load load = 0;
    ArcKind kind = ArcKind::Travel;
};

/**
 * Layered DAG for inserting one pair into one route. With the route written
 * as sigma_0 = depot, sigma_1, ..., sigma_{N-1} = depot, node 3i is the route
 * node v_i, 3i + 1 the insert-pickup node after sigma_i and 3i + 2 the
 * insert-delivery node; v_{N-1} = 3(N-1) is the sink. Node order is a
 * topological order. Shuttle arcs are self-loops on delivery nodes.
 */
struct AuxGraph
{
    int pair = 0;
    std::vector<Visit> route;       // sigma_1..sigma_{N-2}
    std::vector<int> sequence;      // sigma_0..sigma_{N-1}
    std::vector<Load> freeCapacity;  // Q - load after sigma_i, for i < N-1
    std::vector<std::vector<AuxArc>> out;
    Distance maxLength = INF_DISTANCE;

    int numNodes() const noexcept { return static_cast<int>(out.size()); }
    int sink() const noexcept { return numNodes() - 1; }

    static int routeNode(int i) noexcept { return 3 * i; }
    static int pickupNode(int i) noexcept { return 3 * i + 1; }
    static int deliveryNode(int i) noexcept { return 3 * i + 2; }
};

/**
 * Builds the graph for ``routeVisits`` (which must not contain the pair).
 * Arcs carrying zero load are omitted. Shuttle self-loops can be disabled to
 * get the plain layered graph.
 */
AuxGraph buildAuxGraph(std::vector<Visit> const &routeVisits,
                       int pair,
                       Instance const &inst,
                       bool shuttles = true);

struct InsertionLabel
{
    Distance dist = 0;  // length of the route with the insertion
    Load load = 0;      // units of the pair that can be moved, capped at q_x

    bool operator==(InsertionLabel const &) const = default;
};

struct PropagationOptions
{
    bool completionBound = true;
};

/// Non-dominated labels at the sink plus what is needed to rebuild the paths.
struct RouteLabels
{
    struct Entry
    {
        InsertionLabel label;
        int node = 0;
        int parent = -1;  // arena index, -1 at the source
        int arc = -1;     // index into out[parent node], -1 for shuttles
        int shuttles = 0;
    };

    std::vector<Entry> arena;
    std::vector<int> frontier;  // arena indices at the sink, dist ascending

    std::vector<InsertionLabel> labels() const;
};

/**
 * Label propagation in topological order with dominance (s is dominated by s'
 * when s.dist >= s'.dist and min(s.load, q) <= min(s'.load, q)), the route
 * distance limit, and an optional completion bound.
 */
RouteLabels propagateLabels(AuxGraph const &graph,
                            Load demand,
                            PropagationOptions const &options = {});

/**
 * Visit sequence realising the frontier label ``frontierIdx`` while moving
 * ``amount`` units of the pair. Amounts go to the earliest trips first up to
 * each trip's free capacity; trips left with nothing are dropped.
 */
std::vector<Visit> realizeLabel(AuxGraph const &graph,
                                RouteLabels const &labels,
                                size_t frontierIdx,
                                Load amount,
                                Instance const &inst);

enum class Phase2Mode
{
    Greedy,
    Exact,
};

class NoCoverError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Selection
{
    struct Pick
    {
        size_t route = 0;
        size_t label = 0;
        Load amount = 0;
    };

    std::vector<Pick> picks;
    Distance cost = 0;  // total detour
};

/**
 * Chooses at most one label per route so that the selected loads cover
 * ``demand`` at minimum total detour (dist - costs[r], clamped at zero). Greedy
 * repeatedly takes the label of largest covered-load to detour ratio among
 * those that keep full coverage reachable; Exact is a dynamic program over
 * (route, covered load). Throws NoCoverError when coverage is impossible.
 */
Selection combineInsertions(std::vector<std::vector<InsertionLabel>> const &labels,
                            std::vector<Distance> const &costs,
                            Load demand,
                            Phase2Mode mode);

/**
 * Removes every visit of ``pair`` and reinserts the full demand optimally per
 * route, possibly split over several routes and trips. A new route may be
 * opened when fewer than m are in use. If the pair was covered and the result
 * would be more expensive, the input is returned. Throws NoCoverError when the
 * pair cannot be covered at all.
 */
Solution rcspInsert(Solution const &sol,
                    int pair,
                    Instance const &inst,
                    Phase2Mode mode = Phase2Mode::Greedy);
}  // namespace splitpd

#endif  // SPLITPD_RCSP_INSERTION_H

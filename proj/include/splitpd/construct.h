#ifndef SPLITPD_CONSTRUCT_H
#define SPLITPD_CONSTRUCT_H

#include "splitpd/instance.h"
#include "splitpd/model.h"

#include <cstdint>
#include <vector>

namespace splitpd
{
struct ConstructionResult
{
    Solution solution;

    /// Pairs that could not be placed. Non-empty means the solution is partial.
    std::vector<int> unrouted;

    bool incomplete() const noexcept { return !unrouted.empty(); }
};

/**
 * Greedy insertion of unsplit pairs. Each step inserts the pickup with the
 * smallest distance increase over all routes, restricted to positions that
 * admit a feasible delivery position, and then places the delivery at its
 * cheapest feasible position after the pickup. A new route is opened only when
 * no remaining pair fits into any existing route and fewer than m routes are
 * in use.
 *
 * Ties go to the lowest pair index, then the earliest route and position. A
 * non-zero seed replaces the index order by a seeded permutation.
 */
ConstructionResult greedyConstruct(Instance const &inst, std::uint64_t seed = 0);

struct PairInsertion
{
    size_t pickupPos = 0;    // insert before this index of the original route
    size_t deliveryPos = 0;  // idem, deliveryPos >= pickupPos
    Distance pickupDelta = 0;
    Distance delta = 0;      // total distance increase
};

/**
 * Insertion of the full pair into ``route`` as one pickup and one delivery
 * visit: the cheapest pickup position that admits a feasible delivery, then
 * the cheapest delivery position after it. Returns false if no feasible
 * position exists.
 */
bool bestPairInsertion(Route const &route,
                       int pair,
                       Load amount,
                       Instance const &inst,
                       PairInsertion &best);

/// Returns a copy of ``visits`` with the pickup and delivery inserted.
std::vector<Visit> insertPair(std::vector<Visit> const &visits,
                              int pair,
                              Load amount,
                              size_t pickupPos,
                              size_t deliveryPos,
                              Instance const &inst);
}  // namespace splitpd

#endif  // SPLITPD_CONSTRUCT_H

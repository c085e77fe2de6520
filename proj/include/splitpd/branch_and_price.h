#ifndef SPLITPD_BRANCH_AND_PRICE_H
#define SPLITPD_BRANCH_AND_PRICE_H

#include "splitpd/instance.h"
#include "splitpd/lp.h"
#include "splitpd/model.h"
#include "splitpd/pricing.h"

#include <optional>
#include <ostream>
#include <vector>

namespace splitpd
{
enum class BranchRule
{
    Vehicles = 1,      // sum of all route variables
    PickupDegree = 2,  // visits of one pickup
    Edge = 3,          // traversals of one directed arc
    LoadedEdge = 4,    // traversals of one arc with given amounts at both ends
};

/// One branching constraint: sum_r coef(r) lambda_r (sense) rhs.
struct BranchRow
{
    BranchRule rule = BranchRule::Vehicles;
    int pickup = 0;
    Leg leg;  // arc for Edge (amounts unused) and LoadedEdge
    RowSense sense = RowSense::LessEqual;
    double rhs = 0;

    double coefficient(Column const &column) const;
};

enum class BpStatus
{
    Optimal,
    Infeasible,
    TimeLimit,
    NodeLimit,
    BranchingIncomplete,  // a node had integral branching quantities but fractional routes
};

char const *toString(BpStatus status);

struct BpParams
{
    double timeLimit = 60;  // wall-clock seconds
    long nodeLimit = -1;    // negative: none
    std::optional<Solution> warmStart;
    double alpha = 0.9;      // initial dual smoothing weight; 0 disables smoothing
    double alphaStep = 0.1;  // decrease on every mispricing
    bool preprocessing = true;  // distance-limit extension filter (metric instances only)
    int scale = 1;              // pricing distance buckets are floor(d * 10^scale)
    std::ostream *log = nullptr;
};

struct BpResult
{
    BpStatus status = BpStatus::Infeasible;
    std::optional<Solution> best;
    double lowerBound = 0;
    double upperBound = INF_DISTANCE;
    double rootBound = 0;
    long nodes = 0;
    size_t columns = 0;
    long pricingCalls = 0;
    double elapsed = 0;
    std::optional<PricingDuals> rootDuals;  // at root convergence, when it converged

    /// 100 (UB - LB) / UB, or infinity without an incumbent.
    double gap() const;
};

/**
 * Branching decision for a master solution ``lambda`` over ``columns``: the
 * first rule among vehicles, pickup degree, edge and loaded edge with a
 * fractional quantity, taking the quantity whose fractional part is closest to
 * 0.5 (first in a fixed order on ties). Returns the (<= floor, >= ceil) rows,
 * or nothing when all four rules are integral although some lambda is not.
 * Throws std::invalid_argument when lambda is integral.
 */
std::optional<std::pair<BranchRow, BranchRow>> chooseBranching(std::vector<Column> const &columns,
                                                               std::vector<double> const &lambda,
                                                               Instance const &inst);

/**
 * Branch-and-price over the route-based set-partitioning formulation with
 * demand coverage rows, a fleet row and branching rows. Each node runs a
 * two-phase column generation (explicit artificial columns in phase 1, dual
 * smoothing in phase 2) with the pricing cascade. Branching takes the first
 * rule among vehicles, pickup degree, edge and loaded edge with a fractional
 * quantity, most fractional first; nodes are explored best-first.
 *
 * Routes longer than the best known cost cannot occur in an improving
 * solution, so the pricing only generates routes up to that length.
 */
BpResult branchAndPrice(Instance const &inst, BpParams const &params = {});
}  // namespace splitpd

#endif  // SPLITPD_BRANCH_AND_PRICE_H

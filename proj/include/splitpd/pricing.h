#ifndef SPLITPD_PRICING_H
#define SPLITPD_PRICING_H

#include "splitpd/instance.h"
#include "splitpd/model.h"

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace splitpd
{
/// One traversed arc of a route with the amounts handled at both ends.
struct Leg
{
    int from = 0;
    int to = 0;
    Load fromAmount = 0;
    Load toAmount = 0;

    auto operator<=>(Leg const &) const = default;
};

/**
 * A route variable of the set-partitioning master. Coverage may exceed the
 * demand of a pair; such columns simply never appear in integer solutions.
 */
struct Column
{
    std::vector<Visit> visits;
    Distance cost = 0;
    std::vector<Load> coverage;     // per pair, index 1..n
    std::vector<int> pickupVisits;  // per pair, index 1..n
    std::vector<Leg> legs;          // depot to depot

    bool operator==(Column const &other) const { return visits == other.visits; }
};

/// Builds a column from a visit sequence (delivery amounts are derived).
Column makeColumn(std::vector<Visit> const &visits, Instance const &inst);

/**
 * Duals in the form the pricing needs. ``vehicle`` applies to every arc
 * leaving the start depot, ``pickupVisit[i]`` to every arc entering pickup i,
 * ``edge`` to a directed arc and ``loadedEdge`` to a directed arc traversed
 * with the given amounts handled at its tail and head.
 */
struct PricingDuals
{
    std::vector<double> pair;  // index 1..n
    double vehicle = 0;
    std::vector<double> pickupVisit;  // index 1..n
    std::map<std::pair<int, int>, double> edge;
    std::map<Leg, double> loadedEdge;

    explicit PricingDuals(int numPairs = 0);
};

/// d_r * costFactor minus the duals collected by the column.
double reducedCost(Column const &column, PricingDuals const &duals, double costFactor = 1.0);

/**
 * Distance-limit preprocessing: extending a partial path of length d from i to
 * j is forbidden when d > threshold(i, j). Only valid under the triangle
 * inequality.
 */
class ExtensionFilter
{
public:
    ExtensionFilter() = default;
    /// ``maxLength`` may tighten the instance limit (for example to an upper bound).
    explicit ExtensionFilter(Instance const &inst, Distance maxLength = INF_DISTANCE);

    Distance threshold(int from, int to) const
    {
        return thresholds_.empty() ? INF_DISTANCE
                                   : thresholds_[static_cast<size_t>(from) * stride_ + to];
    }

    bool forbids(int from, int to, Distance d) const
    {
        return d > threshold(from, to) + 1e-9;
    }

private:
    size_t stride_ = 0;
    std::vector<Distance> thresholds_;
};

class PricingLimitError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class PricingTimeout : public PricingLimitError
{
public:
    using PricingLimitError::PricingLimitError;
};

enum class Dominance
{
    Relaxed,  // vertex, distance and reduced cost only (heuristic)
    Full,     // adds the open-load comparison; exact
};

struct PricingOptions
{
    int bucketLimit = -1;  // labels kept per (vertex, distance bucket); negative = no limit
    Dominance dominance = Dominance::Full;
    double costFactor = 1.0;   // 0 in phase 1 of the column generation
    int scale = 1;             // buckets are floor(d * 10^scale)
    size_t maxColumns = 30;
    size_t labelCap = 4'000'000;
    double rcEpsilon = 1e-6;
    Distance maxLength = INF_DISTANCE;  // tighter route length limit, if any
    ExtensionFilter const *filter = nullptr;
    std::optional<std::chrono::steady_clock::time_point> deadline;  // PricingTimeout once passed
};

struct PricingResult
{
    std::vector<Column> columns;  // reduced cost < -rcEpsilon, most negative first
    std::vector<double> reducedCosts;
    double minReducedCost = INF_DISTANCE;  // over every completed route found
    size_t labels = 0;
};

/**
 * Forward labelling over states (vertex, distance, open loads, amount) from
 * the start depot. A pickup at j takes any amount that keeps the units of pair
 * j picked up so far within q_j and the vehicle within capacity (a column
 * covering more than q_j can never be part of an integer solution, and the cap
 * keeps the labelling finite without a distance limit); deliveries unload the
 * whole open amount; the end depot requires an empty vehicle.
 *
 * With Full dominance, a label dominates another at the same vertex if its
 * distance and reduced cost are not larger and its open loads and picked-up
 * totals are componentwise not larger. This uses the delivery triangle inequality of the
 * reduced-cost matrix; when it does not hold, the dominating label must also
 * have the same set of open pairs.
 */
PricingResult priceExact(PricingDuals const &duals,
                         Instance const &inst,
                         PricingOptions const &options = {});

/// True when d_ij costFactor - (edge duals) satisfies the delivery triangle inequality.
bool reducedCostsSatisfyDti(PricingDuals const &duals, Instance const &inst, double costFactor);

struct CascadeResult
{
    std::vector<Column> columns;
    std::vector<double> reducedCosts;
    int stage = 0;        // index of the stage that produced the columns
    int stagesRun = 0;
    bool proven = false;  // no negative column exists
};

/**
 * Heuristic-to-exact sequence: bucket limit 1 with relaxed dominance, then
 * relaxed dominance at limits 3, 10, 100 and unlimited, then full dominance at
 * the same limits. Returns the first non-empty batch; an empty result after
 * the last stage proves that no negative column exists.
 */
CascadeResult priceCascade(PricingDuals const &duals,
                           Instance const &inst,
                           PricingOptions const &base = {});
}  // namespace splitpd

#endif  // SPLITPD_PRICING_H

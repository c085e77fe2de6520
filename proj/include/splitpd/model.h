#ifndef SPLITPD_MODEL_H
#define SPLITPD_MODEL_H

#include "splitpd/instance.h"

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace splitpd
{
/**
 * One stop of a vehicle. At a pickup, ``amount`` is the number of units loaded
 * for that pair. At a delivery the vehicle unloads everything it carries for
 * the pair, so the amount is derived from the preceding pickups.
 */
struct Visit
{
    int vertex = 0;
    Load amount = 0;

    bool operator==(Visit const &) const = default;
};

enum class Violation
{
    None,
    Precedence,
    Capacity,
    Distance,
};

char const *toString(Violation violation);

class MalformedRoute : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct RouteEvaluation
{
    Distance length = 0;
    bool feasible = true;
    Violation violation = Violation::None;
};

/**
 * Evaluates a visit sequence (depots implicit). Violations are reported with
 * priority Precedence > Capacity > Distance. A delivery is a precedence
 * violation when no pickup of its pair occurs earlier in the route, and load
 * left on board at the end depot is one as well.
 *
 * Throws MalformedRoute for unknown or depot vertices, and for pickup amounts
 * outside [1, q_i].
 */
RouteEvaluation evaluateRoute(std::span<Visit const> visits, Instance const &inst);

/// Route length of a visit sequence, depots included.
Distance routeLength(std::span<Visit const> visits, Instance const &inst);

/**
 * Reusable scratch space for checking many candidate visit sequences without
 * allocating. Same semantics as evaluateRoute, without the diagnostics.
 */
class FeasibilityChecker
{
public:
    explicit FeasibilityChecker(Instance const &inst);

    /// Returns true when feasible; ``length`` receives the route length.
    bool check(std::span<Visit const> visits, Distance &length);

private:
    Instance const *inst_;
    std::vector<Load> onBoard_;
    std::vector<char> picked_;
};

/**
 * Visit sequence with cached length and load profile. Delivery amounts are
 * normalised to the derived unloaded quantity on every assignment.
 */
class Route
{
public:
    Route() = default;
    Route(std::vector<Visit> visits, Instance const &inst);

    void assign(std::vector<Visit> visits, Instance const &inst);

    std::vector<Visit> const &visits() const noexcept { return visits_; }
    size_t size() const noexcept { return visits_.size(); }
    bool empty() const noexcept { return visits_.empty(); }
    Visit const &operator[](size_t idx) const { return visits_[idx]; }

    Distance length() const noexcept { return length_; }

    /// On-board load after each visit.
    std::vector<Load> const &loads() const noexcept { return loads_; }

    bool feasible() const noexcept { return violation_ == Violation::None; }
    Violation violation() const noexcept { return violation_; }

    bool operator==(Route const &other) const { return visits_ == other.visits_; }

private:
    std::vector<Visit> visits_;
    std::vector<Load> loads_;
    Distance length_ = 0;
    Violation violation_ = Violation::None;
};

struct Solution
{
    std::vector<Route> routes;

    Distance cost() const;

    /// Drops routes without visits.
    void removeEmptyRoutes();

    bool operator==(Solution const &) const = default;
};

struct SolutionEvaluation
{
    Distance cost = 0;
    bool feasible = true;
    bool tooManyRoutes = false;
    size_t infeasibleRoutes = 0;
    /// (pair, q_i minus total picked amount) for every pair not exactly covered.
    std::vector<std::pair<int, Load>> uncovered;
};

SolutionEvaluation evaluateSolution(Solution const &sol, Instance const &inst);

/// Total picked amount per pair, indexed 1..n.
std::vector<Load> pickedAmounts(Solution const &sol, Instance const &inst);

/// Number of customer (non-depot) visits over all routes.
size_t customerVisits(Solution const &sol);

/// Number of pairs served by more than one pickup visit.
size_t splitPairs(Solution const &sol, Instance const &inst);

/**
 * Post-optimisation for repeated visits of one pair: two pickups of a pair
 * that are not separated by one of its deliveries are merged into a single
 * pickup, keeping the cheapest feasible of the (up to) 2 x 2 placements of the
 * merged pickup and delivery. Redundant empty deliveries are dropped the same
 * way. Repeats until no merge applies. The result is never longer than the
 * input and stays feasible. No-op when the instance violates the delivery
 * triangle inequality.
 */
Route mergeRedundantVisits(Route const &route, Instance const &inst);
}  // namespace splitpd

#endif  // SPLITPD_MODEL_H

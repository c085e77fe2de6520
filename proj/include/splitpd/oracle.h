#ifndef SPLITPD_ORACLE_H
#define SPLITPD_ORACLE_H

#include "splitpd/instance.h"
#include "splitpd/model.h"

#include <optional>
#include <stdexcept>

namespace splitpd
{
class OracleSizeError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct OracleParams
{
    bool splitFree = false;       // every pair picked up once with its full demand
    int maxPairs = 4;
    size_t maxStates = 20'000'000;  // refuse larger state spaces
};

struct OracleResult
{
    std::optional<Solution> best;  // empty when the instance is infeasible
    Distance cost = INF_DISTANCE;
    size_t states = 0;
};

/**
 * Exact optimum by exhaustive dynamic programming. First the shortest feasible
 * route for every per-pair coverage vector c (0 <= c_i <= q_i) is computed by a
 * shortest-path search over (vertex, open loads, coverage); then at most m
 * routes are combined so that their coverages sum to the demands. Routes that
 * pick up more than q_i of a pair never occur in a feasible solution, which
 * bounds the number of visits per route.
 *
 * Throws OracleSizeError for more than maxPairs pairs or too many states.
 */
OracleResult bruteForceOptimum(Instance const &inst, OracleParams const &params = {});
}  // namespace splitpd

#endif  // SPLITPD_ORACLE_H

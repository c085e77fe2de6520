#ifndef SPLITPD_ILS_H
#define SPLITPD_ILS_H

#include "splitpd/instance.h"
#include "splitpd/model.h"
#include "splitpd/neighborhoods.h"
#include "splitpd/rcsp_insertion.h"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace splitpd
{
struct IlsParams
{
    int pMax = 3;
    int delta = 5;
    double timeLimit = 10.0;  // wall-clock seconds
    std::uint64_t seed = 0;
    long maxIterations = -1;  // negative: no cap
    std::optional<Distance> targetCost;  // stop once the best cost reaches it
    bool useRcsp = true;
    Phase2Mode phase2 = Phase2Mode::Greedy;
    unsigned neighborhoods = ALL_NEIGHBORHOODS;
};

struct IlsTraceEntry
{
    long iteration = 0;
    double elapsed = 0;
    Distance current = 0;      // after local search
    Distance best = 0;         // after the acceptance step
    bool improved = false;
    Distance perturbBase = 0;  // cost of the solution the next perturbation starts from
};

struct IlsResult
{
    Solution best;
    std::vector<IlsTraceEntry> trace;
    Distance initialCost = 0;
    bool constructionIncomplete = false;
    long iterations = 0;
    double elapsed = 0;
};

/**
 * Relocates between 1 and pMax random pairs: all visits of a chosen pair are
 * removed and the full demand is inserted as one consecutive pickup-delivery
 * at a random feasible position. After a bounded number of failed attempts the
 * pair is reinserted with rcspInsert instead.
 */
Solution perturb(Solution const &sol,
                 Instance const &inst,
                 IlsParams const &params,
                 std::mt19937_64 &rng);

/**
 * Iterated local search: greedy construction (partial constructions are
 * repaired with rcspInsert), then per iteration RVND, an rcspInsert sweep over
 * all pairs in random order, best-solution update and a perturbation of the
 * best solution. Runs until the time limit, iteration cap or target cost is
 * reached. Throws std::runtime_error when no feasible solution can be built.
 */
IlsResult runIls(Instance const &inst, IlsParams const &params);
}  // namespace splitpd

#endif  // SPLITPD_ILS_H

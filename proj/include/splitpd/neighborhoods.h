#ifndef SPLITPD_NEIGHBORHOODS_H
#define SPLITPD_NEIGHBORHOODS_H

#include "splitpd/instance.h"
#include "splitpd/model.h"

#include <array>
#include <optional>
#include <random>
#include <vector>

namespace splitpd
{
enum class Neighborhood
{
    PairSwap,         // N1
    PairShift,        // N2
    PickShift,        // N3
    DelShift,         // N4
    BlockSwap,        // N5
    BlockShift,       // N6
    InterPairSwap,    // N7
    InterPairShift,   // N8
    InterBlockSwap,   // N9
    InterBlockShift,  // N10
};

inline constexpr int NUM_NEIGHBORHOODS = 10;
inline constexpr unsigned ALL_NEIGHBORHOODS = (1u << NUM_NEIGHBORHOODS) - 1;

inline constexpr std::array<Neighborhood, NUM_NEIGHBORHOODS> NEIGHBORHOODS = {
    Neighborhood::PairSwap,       Neighborhood::PairShift,
    Neighborhood::PickShift,      Neighborhood::DelShift,
    Neighborhood::BlockSwap,      Neighborhood::BlockShift,
    Neighborhood::InterPairSwap,  Neighborhood::InterPairShift,
    Neighborhood::InterBlockSwap, Neighborhood::InterBlockShift,
};

char const *toString(Neighborhood kind);

/**
 * A well-formed occurrence of a pair in a route: a pickup visit whose next
 * visit of the same pair is a delivery, and which does not itself follow
 * another pickup of that pair. Moves relocate units; split pairs contribute
 * one unit per occurrence.
 */
struct Unit
{
    int pair = 0;
    size_t pickup = 0;
    size_t delivery = 0;
};

enum class BlockKind
{
    Simple,    // pickup immediately followed by its delivery
    Compound,  // only complete units in between
};

struct Block
{
    int pair = 0;
    size_t first = 0;
    size_t last = 0;
    BlockKind kind = BlockKind::Simple;
};

std::vector<Unit> findUnits(Route const &route, Instance const &inst);

/// Units whose span [pickup, delivery] forms a block.
std::vector<Block> findBlocks(Route const &route, Instance const &inst);

/**
 * An improving move, stored as the resulting visit sequences of the touched
 * routes. ``route2`` equal to the current route count denotes a new route.
 */
struct Move
{
    Neighborhood kind = Neighborhood::PairSwap;
    size_t route1 = 0;
    size_t route2 = 0;
    int pair1 = 0;
    int pair2 = 0;
    std::vector<Visit> visits1;
    std::vector<Visit> visits2;
    Distance delta = 0;

    bool interRoute() const noexcept { return route1 != route2; }
};

struct MoveUndo
{
    std::vector<Route> routes;
};

/// Applies the move and drops routes that became empty.
MoveUndo applyMove(Solution &sol, Move const &move, Instance const &inst);

void revertMove(Solution &sol, MoveUndo const &undo);

class LocalSearch
{
public:
    explicit LocalSearch(Instance const &inst, int delta = 5);

    /**
     * Scans moves of ``kind`` over units in random order and returns the
     * first one that reduces the cost by more than COST_EPS and keeps all
     * touched routes feasible.
     */
    std::optional<Move>
    explore(Solution const &sol, Neighborhood kind, std::mt19937_64 &rng);

    /**
     * Randomised variable neighbourhood descent over the enabled
     * neighbourhoods (bit k of ``mask`` enables NEIGHBORHOODS[k]). Touched
     * routes are post-processed with mergeRedundantVisits after each move.
     */
    Solution rvnd(Solution sol, std::mt19937_64 &rng, unsigned mask = ALL_NEIGHBORHOODS);

    int delta() const noexcept { return delta_; }

private:
    struct Candidate
    {
        size_t route;
        Unit unit;
    };

    bool accept(Solution const &sol,
                size_t r1,
                std::vector<Visit> const &cand1,
                size_t r2,
                std::vector<Visit> const *cand2,
                Distance &delta);

    std::optional<Move> makeMove(Neighborhood kind,
                                 size_t r1,
                                 size_t r2,
                                 int pair1,
                                 int pair2,
                                 Distance delta,
                                 bool inter);

    std::optional<Move> pairSwap(Solution const &sol, std::vector<Candidate> const &units);
    std::optional<Move> pairShift(Solution const &sol, std::vector<Candidate> const &units);
    std::optional<Move> pickShift(Solution const &sol, std::vector<Candidate> const &units);
    std::optional<Move> delShift(Solution const &sol, std::vector<Candidate> const &units);
    std::optional<Move> blockSwap(Solution const &sol, std::vector<Candidate> const &blocks);
    std::optional<Move> blockShift(Solution const &sol, std::vector<Candidate> const &blocks);
    std::optional<Move> interPairSwap(Solution const &sol, std::vector<Candidate> const &units);
    std::optional<Move> interPairShift(Solution const &sol, std::vector<Candidate> const &units);
    std::optional<Move> interBlockSwap(Solution const &sol, std::vector<Candidate> const &blocks);
    std::optional<Move> interBlockShift(Solution const &sol, std::vector<Candidate> const &blocks);

    Instance const *inst_;
    int delta_;
    FeasibilityChecker checker_;
    std::vector<Visit> reduced1_;
    std::vector<Visit> reduced2_;
    std::vector<Visit> cand1_;
    std::vector<Visit> cand2_;
};
}  // namespace splitpd

#endif  // SPLITPD_NEIGHBORHOODS_H

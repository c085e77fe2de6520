#ifndef SPLITPD_INSTANCE_IO_H
#define SPLITPD_INSTANCE_IO_H

#include "splitpd/instance.h"
#include "splitpd/model.h"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace splitpd
{
class ParseError : public std::runtime_error
{
public:
    ParseError(std::string const &what, int line);

    /// 1-based line number of the offending line, or 0 when not line-specific.
    int line() const noexcept { return line_; }

private:
    int line_;
};

enum class InstanceFormat
{
    Auto,
    Coordinates,
    Matrix,
};

/**
 * Parses the plain-text instance format:
 *
 *     # comment
 *     MPDPSL <n> <m> <Q> <L>          (L = -1 means unlimited)
 *     NODES                           (or MATRIX)
 *     <id> <x> <y>                    (ids 0..2n, depot is 0)
 *     DEMANDS
 *     <pair> <q>                      (pairs 1..n)
 *     EOF
 *
 * A MATRIX section holds 2n+1 rows of 2n+1 distances instead. ``format``
 * restricts which section is accepted; Auto accepts either.
 *
 * Throws ParseError on syntax errors and ValidationError for data that
 * violates the instance invariants.
 */
Instance parseInstance(std::string_view text,
                       InstanceFormat format = InstanceFormat::Auto);

Instance readInstance(std::filesystem::path const &path);

/// Coordinates are written when present, the matrix otherwise. Round-trips.
std::string writeInstance(Instance const &inst);

/**
 * Solution format:
 *
 *     MPDPSL-SOLUTION <n> <routes>
 *     ROUTE <vertex>(<amount>) ...
 *     COST <cost>
 *
 * Throws std::invalid_argument when the solution is not feasible.
 */
std::string writeSolution(Solution const &sol, Instance const &inst);

/// Parses a solution file. Does not require feasibility.
Solution parseSolution(std::string_view text, Instance const &inst);

Solution readSolution(std::filesystem::path const &path, Instance const &inst);

void writeFile(std::filesystem::path const &path, std::string const &contents);

/// Shortest decimal text that parses back to exactly ``value``.
std::string formatDouble(double value);

struct GeneratorParams
{
    int numPairs = 10;
    int numVehicles = 3;
    Load capacity = 100;
    Distance maxLength = 300;
    int pickupLocations = 10;    // == numPairs for fully random pickups
    int deliveryLocations = 10;  // == numPairs for fully random deliveries
    int demandLo = 51;           // percent of capacity
    int demandHi = 60;
    std::uint64_t seed = 0;
};

/**
 * Random Euclidean instance on [0, 100]^2. Pickups and deliveries are placed
 * on a number of shared sites, or each at its own site when the site count
 * equals the number of pairs. Demands are uniform in
 * [ceil(lo Q / 100), floor(hi Q / 100)]. With a finite distance limit, pair
 * placements are redrawn until the depot -> pickup -> delivery -> depot tour
 * fits.
 */
Instance generateInstance(GeneratorParams const &params);
}  // namespace splitpd

#endif  // SPLITPD_INSTANCE_IO_H

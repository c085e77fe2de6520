#include "splitpd/instance.h"

#include <algorithm>
#include <cmath>
#include <string>

using splitpd::Distance;
using splitpd::Instance;
using splitpd::Load;
using splitpd::Point;

namespace
{
// Relative slack for triangle-inequality checks on real-valued distances.
bool leq(double lhs, double rhs)
{
    return lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs));
}
}  // namespace

Instance::Instance(int numPairs,
                   int numVehicles,
                   Load capacity,
                   Distance maxLength,
                   std::vector<Load> pickupDemands,
                   std::vector<Distance> const &matrix)
    : n_(numPairs),
      m_(numVehicles),
      capacity_(capacity),
      maxLength_(maxLength),
      stride_(2 * static_cast<size_t>(numPairs) + 2)
{
    if (n_ < 0)
        throw ValidationError("number of pairs must be non-negative");
    if (m_ < 1)
        throw ValidationError("number of vehicles must be at least one");
    if (capacity_ < 1)
        throw ValidationError("vehicle capacity must be positive");
    if (!(maxLength_ > 0) || std::isnan(maxLength_))
        throw ValidationError("distance limit must be positive");
    if (pickupDemands.size() != static_cast<size_t>(n_))
        throw ValidationError("expected one demand per pair");

    auto const locs = static_cast<size_t>(2 * n_ + 1);
    if (matrix.size() != locs * locs)
        throw ValidationError("distance matrix must be (2n+1) x (2n+1)");

    demand_.assign(n_ + 1, 0);
    for (int i = 1; i <= n_; ++i)
    {
        auto const q = pickupDemands[i - 1];
        if (q <= 0)
            throw ValidationError("demand of pair " + std::to_string(i)
                                  + " must be positive");
        if (q > capacity_)
            throw ValidationError("demand of pair " + std::to_string(i)
                                  + " exceeds vehicle capacity");
        demand_[i] = q;
    }

    dist_.assign(stride_ * stride_, 0.0);
    auto loc = [&](size_t v) { return v == stride_ - 1 ? 0 : v; };
    for (size_t i = 0; i != stride_; ++i)
        for (size_t j = 0; j != stride_; ++j)
        {
            auto const d = matrix[loc(i) * locs + loc(j)];
            if (std::isnan(d) || d < 0)
                throw ValidationError("distances must be non-negative");
            dist_[i * stride_ + j] = d;
        }

    for (size_t i = 0; i != locs; ++i)
        if (matrix[i * locs + i] != 0)
            throw ValidationError("distance from a location to itself must be 0");

    computeFlags();
}

Instance Instance::fromCoordinates(int numPairs,
                                   int numVehicles,
                                   Load capacity,
                                   Distance maxLength,
                                   std::vector<Load> pickupDemands,
                                   std::vector<Point> const &locations)
{
    auto const locs = 2 * static_cast<size_t>(std::max(numPairs, 0)) + 1;
    if (locations.size() != locs)
        throw ValidationError("expected 2n+1 locations");

    std::vector<Distance> matrix(locs * locs);
    for (size_t i = 0; i != locs; ++i)
        for (size_t j = 0; j != locs; ++j)
            matrix[i * locs + j] = std::hypot(locations[i].x - locations[j].x,
                                              locations[i].y - locations[j].y);

    Instance inst(numPairs,
                  numVehicles,
                  capacity,
                  maxLength,
                  std::move(pickupDemands),
                  matrix);
    inst.locations_ = locations;
    return inst;
}

Load Instance::signedDemand(int v) const noexcept
{
    if (isPickup(v))
        return demand_[v];
    if (isDelivery(v))
        return -demand_[v - n_];
    return 0;
}

std::vector<Distance> Instance::locationMatrix() const
{
    auto const locs = stride_ - 1;
    std::vector<Distance> matrix(locs * locs);
    for (size_t i = 0; i != locs; ++i)
        for (size_t j = 0; j != locs; ++j)
            matrix[i * locs + j] = dist_[i * stride_ + j];
    return matrix;
}

std::vector<Load> Instance::pickupDemands() const
{
    return {demand_.begin() + 1, demand_.end()};
}

void Instance::computeFlags()
{
    auto const size = static_cast<int>(stride_);

    dtiHolds_ = true;
    for (int k = n_ + 1; k <= 2 * n_ && dtiHolds_; ++k)
        for (int i = 0; i != size && dtiHolds_; ++i)
            for (int j = 0; j != size; ++j)
                if (!leq(dist(i, j), dist(i, k) + dist(k, j)))
                {
                    dtiHolds_ = false;
                    break;
                }

    metric_ = dtiHolds_;
    for (int k = 0; k != size && metric_; ++k)
    {
        if (isDelivery(k))
            continue;
        for (int i = 0; i != size && metric_; ++i)
            for (int j = 0; j != size; ++j)
                if (!leq(dist(i, j), dist(i, k) + dist(k, j)))
                {
                    metric_ = false;
                    break;
                }
    }
}

#ifndef SPLITPD_INSTANCE_H
#define SPLITPD_INSTANCE_H

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitpd
{
using Load = int;
using Distance = double;

inline constexpr Distance INF_DISTANCE = std::numeric_limits<Distance>::infinity();

// Tolerance used for every cost comparison in the heuristics.
inline constexpr double COST_EPS = 1e-6;

class ValidationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Point
{
    double x = 0;
    double y = 0;

    bool operator==(Point const &) const = default;
};

/**
 * Immutable problem data for the multi-vehicle one-to-one pickup and delivery
 * problem with split loads.
 *
 * Vertices are numbered 0..2n+1. Vertex 0 is the start depot and 2n+1 the end
 * depot; both share the same location. Pickups are 1..n and the delivery of
 * pickup i is n+i. Distances are given over the 2n+1 locations 0..2n; the end
 * depot mirrors row and column 0.
 */
class Instance
{
public:
    /// Builds an instance from an explicit (2n+1) x (2n+1) row-major matrix.
    Instance(int numPairs,
             int numVehicles,
             Load capacity,
             Distance maxLength,
             std::vector<Load> pickupDemands,
             std::vector<Distance> const &matrix);

    /// Builds a Euclidean instance from 2n+1 locations (depot first).
    static Instance fromCoordinates(int numPairs,
                                    int numVehicles,
                                    Load capacity,
                                    Distance maxLength,
                                    std::vector<Load> pickupDemands,
                                    std::vector<Point> const &locations);

    int numPairs() const noexcept { return n_; }
    int numVehicles() const noexcept { return m_; }
    Load capacity() const noexcept { return capacity_; }
    Distance maxLength() const noexcept { return maxLength_; }
    bool hasDistanceLimit() const noexcept { return maxLength_ < INF_DISTANCE; }

    int numVertices() const noexcept { return 2 * n_ + 2; }
    int startDepot() const noexcept { return 0; }
    int endDepot() const noexcept { return 2 * n_ + 1; }

    bool isPickup(int v) const noexcept { return v >= 1 && v <= n_; }
    bool isDelivery(int v) const noexcept { return v > n_ && v <= 2 * n_; }
    bool isDepot(int v) const noexcept { return v == 0 || v == 2 * n_ + 1; }
    bool isValidVertex(int v) const noexcept { return v >= 0 && v <= 2 * n_ + 1; }

    /// Pair index (1..n) of a pickup or delivery vertex.
    int pairOf(int v) const noexcept { return v > n_ ? v - n_ : v; }
    int pickupOf(int pair) const noexcept { return pair; }
    int deliveryOf(int pair) const noexcept { return pair + n_; }

    /// Demand q_i of pair i (positive).
    Load demand(int pair) const noexcept { return demand_[pair]; }

    /// Signed demand of vertex v: q_i at pickups, -q_i at deliveries, 0 at depots.
    Load signedDemand(int v) const noexcept;

    Distance dist(int from, int to) const noexcept
    {
        return dist_[static_cast<size_t>(from) * stride_ + to];
    }

    /// True when d_ij <= d_ik + d_kj for all i, j and every delivery k.
    bool dtiHolds() const noexcept { return dtiHolds_; }

    /// True when the full triangle inequality holds over all vertices.
    bool isMetric() const noexcept { return metric_; }

    /// Locations 0..2n when built from coordinates.
    std::optional<std::vector<Point>> const &locations() const noexcept
    {
        return locations_;
    }

    /// The (2n+1) x (2n+1) matrix over locations 0..2n, row-major.
    std::vector<Distance> locationMatrix() const;

    std::vector<Load> pickupDemands() const;

private:
    void computeFlags();

    int n_;
    int m_;
    Load capacity_;
    Distance maxLength_;
    std::vector<Load> demand_;  // index 1..n
    size_t stride_;
    std::vector<Distance> dist_;  // (2n+2)^2
    std::optional<std::vector<Point>> locations_;
    bool dtiHolds_ = false;
    bool metric_ = false;
};
}  // namespace splitpd

#endif  // SPLITPD_INSTANCE_H

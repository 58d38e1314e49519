#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kcover/geometry.hpp"
#include "kcover/sampler.hpp"

namespace kcover {

// Uniform-grid index over the region's bounding box answering exact k-NN
// and range-count queries under the region's metric (Euclidean, or
// wrap-around on the torus). Immutable after construction; concurrent
// queries are safe. cell_size is a performance knob only.
class SpatialIndex {
  public:
    // cell_size <= 0 picks the default (bbox volume / point count)^(1/d),
    // clamped to [1e-6, shortest box side].
    SpatialIndex(std::span<const double> points_flat, const Region& region,
                 double cell_size = 0.0);

    std::size_t point_count() const { return count_; }
    int dim() const { return d_; }
    double cell_side(int axis) const { return cell_[static_cast<std::size_t>(axis)]; }

    // Exact k-th order statistic of distances from q to the indexed points.
    // Throws if k == 0 or k > point_count (threshold undefined; callers map
    // that to +infinity).
    double kth_nearest_distance(std::span<const double> q, std::size_t k) const {
        return kth_nearest_capped(q, k, -1.0);
    }

    // Same search, but allowed to stop once the k-th best distance is known
    // to be <= cap; the return value is then some upper bound on the true
    // k-th distance that is itself <= cap. With cap < 0 the search is exact.
    // Used by coverage_threshold, where only record-setting queries matter.
    double kth_nearest_capped(std::span<const double> q, std::size_t k, double cap) const;

    // Number of indexed points within closed metric distance r of q.
    std::size_t count_in_ball(std::span<const double> q, double r) const;

  private:
    static constexpr int kMaxDim = 8;

    double min_dist2_to_cell(std::span<const double> q, const int* cell_coord) const;
    double point_dist2(std::span<const double> q, const double* p) const;

    int d_ = 2;
    bool wrap_ = false;
    double side_ = 0.0; // torus side when wrap_
    std::size_t count_ = 0;
    double lo_[kMaxDim] = {};
    double cell_[kMaxDim] = {};
    int dims_[kMaxDim] = {};
    double min_cell_ = 0.0;
    std::vector<double> pts_;              // coordinates regrouped by cell
    std::vector<std::uint32_t> cell_start_; // CSR offsets, size ncells+1
};

SpatialIndex build_index(std::span<const double> points_flat, const Region& region,
                         double cell_size = 0.0);

// R_{n,m,k}: max over y in ys of the k-th nearest X distance; equivalently
// the smallest r with at least k X-points in every closed ball B(y, r).
// Returns +infinity when there are fewer than k X-points, and 0 for an
// empty Y-sample (vacuous coverage, Poisson mode only).
double coverage_threshold(const ProcessPair& pair, const Region& region_for_metric,
                          std::size_t k);

} // namespace kcover

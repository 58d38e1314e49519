#include "kcover/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kcover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

SpatialIndex::SpatialIndex(std::span<const double> points_flat, const Region& region,
                           double cell_size) {
    d_ = region.dim();
    if (d_ > kMaxDim) throw std::invalid_argument("SpatialIndex: dimension too large");
    const std::size_t d = static_cast<std::size_t>(d_);
    if (points_flat.empty() || points_flat.size() % d != 0)
        throw std::invalid_argument("SpatialIndex: point list empty or malformed");
    count_ = points_flat.size() / d;

    wrap_ = region.kind() == RegionKind::torus;
    side_ = wrap_ ? region.side() : 0.0;

    double hi[kMaxDim];
    region.bounding_box({lo_, d}, {hi, d});

    double box_vol = 1.0;
    double min_extent = kInf;
    for (std::size_t j = 0; j < d; ++j) {
        const double e = hi[j] - lo_[j];
        box_vol *= e;
        min_extent = std::min(min_extent, e);
    }
    double target = cell_size > 0.0
                        ? cell_size
                        : std::pow(box_vol / static_cast<double>(std::max<std::size_t>(count_, 1)),
                                   1.0 / d_);
    target = std::clamp(target, 1e-6, min_extent);

    std::size_t ncells = 1;
    min_cell_ = kInf;
    for (std::size_t j = 0; j < d; ++j) {
        const double e = hi[j] - lo_[j];
        int nj = static_cast<int>(std::floor(e / target));
        nj = std::clamp(nj, 1, 2048);
        dims_[j] = nj;
        cell_[j] = e / nj;
        min_cell_ = std::min(min_cell_, cell_[j]);
        ncells *= static_cast<std::size_t>(nj);
    }

    auto cell_of = [&](const double* p) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < d; ++j) {
            int cj = static_cast<int>(std::floor((p[j] - lo_[j]) / cell_[j]));
            cj = std::clamp(cj, 0, dims_[j] - 1);
            idx = idx * static_cast<std::size_t>(dims_[j]) + static_cast<std::size_t>(cj);
        }
        return idx;
    };

    // counting sort of points into cells
    cell_start_.assign(ncells + 1, 0);
    for (std::size_t i = 0; i < count_; ++i) ++cell_start_[cell_of(points_flat.data() + i * d) + 1];
    for (std::size_t c = 0; c < ncells; ++c) cell_start_[c + 1] += cell_start_[c];
    pts_.resize(points_flat.size());
    std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < count_; ++i) {
        const std::size_t c = cell_of(points_flat.data() + i * d);
        const std::size_t slot = cursor[c]++;
        std::copy_n(points_flat.data() + i * d, d, pts_.data() + slot * d);
    }
}

double SpatialIndex::point_dist2(std::span<const double> q, const double* p) const {
    double s = 0.0;
    if (wrap_) {
        for (int j = 0; j < d_; ++j) {
            double dj = std::abs(q[static_cast<std::size_t>(j)] - p[j]);
            dj = std::min(dj, side_ - dj);
            s += dj * dj;
        }
    } else {
        for (int j = 0; j < d_; ++j) {
            const double dj = q[static_cast<std::size_t>(j)] - p[j];
            s += dj * dj;
        }
    }
    return s;
}

double SpatialIndex::min_dist2_to_cell(std::span<const double> q, const int* cell_coord) const {
    double s = 0.0;
    for (int j = 0; j < d_; ++j) {
        const std::size_t ju = static_cast<std::size_t>(j);
        const double a = lo_[ju] + cell_coord[j] * cell_[ju];
        const double b = a + cell_[ju];
        const double x = q[ju];
        double dj = 0.0;
        if (x < a)
            dj = a - x;
        else if (x > b)
            dj = x - b;
        if (wrap_ && dj > 0.0) {
            // the wrapped image of the interval may be closer
            const double alt = std::min(std::abs(x - (a - side_)), std::abs(x - (b - side_)));
            const double alt2 = std::min(std::abs(x - (a + side_)), std::abs(x - (b + side_)));
            dj = std::min({dj, alt, alt2});
        }
        s += dj * dj;
    }
    return s;
}

double SpatialIndex::kth_nearest_capped(std::span<const double> q, std::size_t k,
                                        double cap) const {
    if (k == 0) throw std::invalid_argument("kth_nearest_distance: k must be >= 1");
    if (k > count_)
        throw std::invalid_argument("kth_nearest_distance: k exceeds point count");
    const double cap2 = cap < 0.0 ? -1.0 : cap * cap;

    const std::size_t d = static_cast<std::size_t>(d_);

    // k smallest squared distances, ascending; tiny k so insertion sort
    constexpr std::size_t kStackK = 16;
    double best_stack[kStackK];
    std::vector<double> best_heap;
    double* best;
    if (k <= kStackK) {
        best = best_stack;
    } else {
        best_heap.assign(k, kInf);
        best = best_heap.data();
    }
    for (std::size_t i = 0; i < k; ++i) best[i] = kInf;
    std::size_t filled = 0;

    auto offer = [&](double d2) {
        if (d2 >= best[k - 1]) return;
        std::size_t pos = k - 1;
        while (pos > 0 && best[pos - 1] > d2) {
            best[pos] = best[pos - 1];
            --pos;
        }
        best[pos] = d2;
        if (filled < k) ++filled;
    };

    int base[kMaxDim];
    for (std::size_t j = 0; j < d; ++j) {
        int cj = static_cast<int>(std::floor((q[j] - lo_[j]) / cell_[j]));
        base[j] = std::clamp(cj, 0, dims_[j] - 1);
    }

    // per-dim offset window for the current shell and the previous one
    int lo_off[kMaxDim], hi_off[kMaxDim], prev_lo[kMaxDim], prev_hi[kMaxDim];
    auto window = [&](int ring, std::size_t j, int& olo, int& ohi) {
        if (wrap_) {
            if (2 * ring + 1 >= dims_[j]) {
                olo = -(dims_[j] / 2);
                ohi = dims_[j] - 1 - dims_[j] / 2;
            } else {
                olo = -ring;
                ohi = ring;
            }
        } else {
            olo = std::max(-ring, -base[j]);
            ohi = std::min(ring, dims_[j] - 1 - base[j]);
        }
    };

    int max_ring = 0;
    for (std::size_t j = 0; j < d; ++j) {
        const int span = wrap_ ? dims_[j] / 2 + 1 : std::max(base[j], dims_[j] - 1 - base[j]);
        max_ring = std::max(max_ring, span);
    }

    int coord[kMaxDim];
    int off[kMaxDim];
    for (int ring = 0; ring <= max_ring; ++ring) {
        // stop once every unvisited cell is provably farther than the k-th best
        if (ring > 0 && filled == k) {
            const double bound = (ring - 1) * min_cell_ > 0 ? (ring - 1) * min_cell_ : 0.0;
            if (best[k - 1] <= bound * bound) break;
        }
        for (std::size_t j = 0; j < d; ++j) {
            window(ring, j, lo_off[j], hi_off[j]);
            if (ring > 0)
                window(ring - 1, j, prev_lo[j], prev_hi[j]);
            else
                prev_lo[j] = 1, prev_hi[j] = 0; // empty
        }

        // iterate the product of offset windows, skipping the inner box
        for (std::size_t j = 0; j < d; ++j) off[j] = lo_off[j];
        for (;;) {
            bool in_prev = ring > 0;
            for (std::size_t j = 0; j < d && in_prev; ++j)
                in_prev = off[j] >= prev_lo[j] && off[j] <= prev_hi[j];
            if (!in_prev) {
                std::size_t idx = 0;
                for (std::size_t j = 0; j < d; ++j) {
                    int cj = base[j] + off[j];
                    if (wrap_) cj = (cj % dims_[j] + dims_[j]) % dims_[j];
                    coord[j] = cj;
                    idx = idx * static_cast<std::size_t>(dims_[j]) + static_cast<std::size_t>(cj);
                }
                if (!(filled == k && min_dist2_to_cell(q, coord) >= best[k - 1])) {
                    const std::uint32_t beg = cell_start_[idx], end = cell_start_[idx + 1];
                    for (std::uint32_t s = beg; s < end; ++s)
                        offer(point_dist2(q, pts_.data() + static_cast<std::size_t>(s) * d));
                    if (filled == k && best[k - 1] <= cap2) return std::sqrt(best[k - 1]);
                }
            }
            // advance multi-index
            std::size_t j = 0;
            while (j < d && ++off[j] > hi_off[j]) {
                off[j] = lo_off[j];
                ++j;
            }
            if (j == d) break;
        }
    }
    return std::sqrt(best[k - 1]);
}

std::size_t SpatialIndex::count_in_ball(std::span<const double> q, double r) const {
    if (r < 0.0) throw std::invalid_argument("count_in_ball: r must be >= 0");
    const std::size_t d = static_cast<std::size_t>(d_);

    int lo_c[kMaxDim], hi_c[kMaxDim];
    for (std::size_t j = 0; j < d; ++j) {
        if (wrap_ && 2.0 * r >= side_ - cell_[j]) {
            lo_c[j] = 0;
            hi_c[j] = dims_[j] - 1;
        } else {
            const int cl = static_cast<int>(std::floor((q[j] - r - lo_[j]) / cell_[j]));
            const int ch = static_cast<int>(std::floor((q[j] + r - lo_[j]) / cell_[j]));
            if (wrap_) {
                lo_c[j] = cl;
                hi_c[j] = ch;
            } else {
                lo_c[j] = std::max(cl, 0);
                hi_c[j] = std::min(ch, dims_[j] - 1);
            }
        }
        if (hi_c[j] < lo_c[j]) return 0;
    }

    std::size_t n = 0;
    int cur[kMaxDim], coord[kMaxDim];
    for (std::size_t j = 0; j < d; ++j) cur[j] = lo_c[j];
    for (;;) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < d; ++j) {
            int cj = cur[j];
            if (wrap_) cj = (cj % dims_[j] + dims_[j]) % dims_[j];
            coord[j] = cj;
            idx = idx * static_cast<std::size_t>(dims_[j]) + static_cast<std::size_t>(cj);
        }
        // compare in distance space: r is typically itself a sqrt of a
        // squared distance, and re-squaring would lose the closed-ball
        // boundary cases
        if (std::sqrt(min_dist2_to_cell(q, coord)) <= r) {
            const std::uint32_t beg = cell_start_[idx], end = cell_start_[idx + 1];
            for (std::uint32_t s = beg; s < end; ++s)
                if (std::sqrt(point_dist2(q, pts_.data() + static_cast<std::size_t>(s) * d)) <= r)
                    ++n;
        }
        std::size_t j = 0;
        while (j < d && ++cur[j] > hi_c[j]) {
            cur[j] = lo_c[j];
            ++j;
        }
        if (j == d) break;
    }
    return n;
}

SpatialIndex build_index(std::span<const double> points_flat, const Region& region,
                         double cell_size) {
    return SpatialIndex(points_flat, region, cell_size);
}

double coverage_threshold(const ProcessPair& pair, const Region& region_for_metric,
                          std::size_t k) {
    if (pair.y_count() == 0) return 0.0; // vacuous coverage (Poisson mode)
    if (pair.x_count() < k) return kInf; // inf{} convention
    const SpatialIndex index(pair.xs, region_for_metric);
    const std::size_t d = static_cast<std::size_t>(pair.dim);
    double worst = 0.0;
    for (std::size_t i = 0; i < pair.y_count(); ++i) {
        // capped search: a query that provably cannot raise the running
        // maximum stops early; record candidates are computed exactly
        const double di =
            index.kth_nearest_capped({pair.ys.data() + i * d, d}, k, worst);
        if (di > worst) worst = di;
    }
    return worst;
}

} // namespace kcover

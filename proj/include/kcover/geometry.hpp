#pragma once

#include <array>
#include <span>
#include <vector>

#include "kcover/rng.hpp"

namespace kcover {

// Volume of the d-dimensional unit ball.
double unit_ball_volume(int d);

// h(a): volume of the slice of the unit ball between the hyperplanes
// {y_1 = 0} and {y_1 = a}. Closed forms for d = 2, 3; adaptive quadrature
// otherwise. Strictly increasing on [0,1] with h(1) = theta_d / 2.
double slice_volume(double a, int d);

// Half-space approximation (theta_d/2 + h(a/r)) r^d of the volume of a
// radius-r ball centred at boundary distance a, valid for 0 <= a < r.
double cap_approx_volume(double a, double r, int d);

// Volume of the cap {y in B_R(o) : y_1 >= c} for signed c in [-R, R].
double ball_cap_volume(double R, double c, int d);

// Volume of the intersection of two balls with radii R and r whose centres
// are distance rho apart.
double ball_lens_volume(double R, double r, double rho, int d);

enum class RegionKind { square, disk, ball, torus, polygon };

// A sampling domain with exact volume, perimeter, boundary distances and
// ball-intersection geometry. Immutable after construction; all methods are
// const and safe for concurrent use.
class Region {
  public:
    static Region square(double side);
    static Region disk(double radius);
    static Region ball(int d, double radius);
    static Region torus(int d, double side);
    static Region polygon(std::vector<std::array<double, 2>> vertices);

    RegionKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double volume() const { return volume_; }
    double perimeter() const; // throws for torus (no boundary)
    // Sphere-condition radius: radius for disk/ball, 0 for polygons,
    // +infinity for the torus.
    double reach() const { return reach_; }

    double side() const;   // square / torus
    double radius() const; // disk / ball
    // Counterclockwise vertex list; available for polygon and square.
    const std::vector<std::array<double, 2>>& vertices() const;

    bool contains(std::span<const double> x) const;
    void bounding_box(std::span<double> lo, std::span<double> hi) const;

    // Euclidean distance from an interior point to the boundary
    // (+infinity on the torus). Throws if x is outside the region.
    double distance_to_boundary(std::span<const double> x) const;

    // Exact |B(x, r) intersect region| for x in the region.
    double ball_intersection_volume(std::span<const double> x, double r) const;

    // Writes one exact uniform draw into out[0..d).
    void sample_uniform(Rng& rng, std::span<double> out) const;

    // Euclidean metric, except the torus which wraps each coordinate.
    double metric_distance(std::span<const double> x, std::span<const double> y) const;

    bool has_boundary() const { return kind_ != RegionKind::torus; }

  private:
    Region() = default;
    void build_polygon_cache();
    void require_inside(std::span<const double> x) const;

    RegionKind kind_ = RegionKind::square;
    int dim_ = 2;
    double size_ = 1.0; // side or radius
    double volume_ = 1.0;
    double perimeter_ = 4.0;
    double reach_ = 0.0;
    std::vector<std::array<double, 2>> vertices_;
    // triangulation of the polygon, used for exact uniform sampling
    std::vector<std::array<int, 3>> triangles_;
    std::vector<double> tri_cum_area_;
};

// sigma_A = |boundary| / |A|^(1 - 1/d); scale invariant. Torus rejected.
double sigma(const Region& region);

// X-domain A and Y-domain B. interior_flag means closure(B) inside the
// interior of A (assumption "B in a larger region"); otherwise B = A.
struct DomainPair {
    Region A;
    Region B;
    bool interior_flag = false;

    static DomainPair same(Region a);
    static DomainPair nested(Region a, Region b);
};

// Exact area of the intersection of a disk with a simple polygon given by
// counterclockwise vertices (arc/chord decomposition, no sampling).
double circle_polygon_area(const std::vector<std::array<double, 2>>& vertices,
                           double cx, double cy, double r);

} // namespace kcover

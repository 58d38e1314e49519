#include "kcover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kcover/quadrature.hpp"

namespace kcover {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sq(double x) { return x * x; }

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

double point_segment_distance(double px, double py, double ax, double ay, double bx,
                              double by) {
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

// wrap an angle difference into (-pi, pi]
double wrap_angle(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a <= -kPi) a += 2.0 * kPi;
    return a;
}

bool segments_properly_intersect(const std::array<double, 2>& a, const std::array<double, 2>& b,
                                 const std::array<double, 2>& c, const std::array<double, 2>& d) {
    auto orient = [](const std::array<double, 2>& p, const std::array<double, 2>& q,
                     const std::array<double, 2>& r) {
        return cross2(q[0] - p[0], q[1] - p[1], r[0] - p[0], r[1] - p[1]);
    };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
           o4 != 0;
}

double polygon_signed_area(const std::vector<std::array<double, 2>>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        s += cross2(p[0], p[1], q[0], q[1]);
    }
    return 0.5 * s;
}

bool point_in_triangle(double px, double py, const std::array<double, 2>& a,
                       const std::array<double, 2>& b, const std::array<double, 2>& c) {
    const double d1 = cross2(b[0] - a[0], b[1] - a[1], px - a[0], py - a[1]);
    const double d2 = cross2(c[0] - b[0], c[1] - b[1], px - b[0], py - b[1]);
    const double d3 = cross2(a[0] - c[0], a[1] - c[1], px - c[0], py - c[1]);
    const bool has_neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
    const bool has_pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
    return !(has_neg && has_pos);
}

} // namespace

double unit_ball_volume(int d) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
    return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double slice_volume(double a, int d) {
    if (d < 1) throw std::invalid_argument("slice_volume: d must be >= 1");
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("slice_volume: a must be in [0,1]");
    if (a == 0.0) return 0.0;
    switch (d) {
        case 1:
            return a;
        case 2:
            return a * std::sqrt(1.0 - a * a) + std::asin(a);
        case 3:
            return kPi * (a - a * a * a / 3.0);
        default: {
            const double ex = 0.5 * (d - 1);
            const double val = integrate(
                [ex](double y) { return std::pow(std::max(1.0 - y * y, 0.0), ex); }, 0.0, a,
                {1e-13, 1e-13, 4000});
            return unit_ball_volume(d - 1) * val;
        }
    }
}

double cap_approx_volume(double a, double r, int d) {
    if (!(a >= 0.0) || !(a < r))
        throw std::invalid_argument("cap_approx_volume: need 0 <= a < r");
    return (0.5 * unit_ball_volume(d) + slice_volume(a / r, d)) * std::pow(r, d);
}

double ball_cap_volume(double R, double c, int d) {
    if (c >= R) return 0.0;
    if (c <= -R) return unit_ball_volume(d) * std::pow(R, d);
    switch (d) {
        case 2:
            return R * R * std::acos(clamp_unit(c / R)) - c * std::sqrt(std::max(R * R - c * c, 0.0));
        case 3:
            return kPi * sq(R - c) * (2.0 * R + c) / 3.0;
        default: {
            const double h = slice_volume(std::abs(c) / R, d);
            const double half = 0.5 * unit_ball_volume(d);
            return std::pow(R, d) * (c >= 0.0 ? half - h : half + h);
        }
    }
}

double ball_lens_volume(double R, double r, double rho, int d) {
    if (rho >= R + r) return 0.0;
    if (rho <= std::abs(R - r)) return unit_ball_volume(d) * std::pow(std::min(R, r), d);
    const double c1 = (rho * rho + R * R - r * r) / (2.0 * rho);
    const double c2 = rho - c1;
    return ball_cap_volume(R, c1, d) + ball_cap_volume(r, c2, d);
}

double circle_polygon_area(const std::vector<std::array<double, 2>>& vertices, double cx,
                           double cy, double r) {
    const std::size_t n = vertices.size();
    double area = 0.0;
    const double r2 = r * r;
    for (std::size_t i = 0; i < n; ++i) {
        // edge translated so the circle centre is the origin
        const double px = vertices[i][0] - cx, py = vertices[i][1] - cy;
        const double qx = vertices[(i + 1) % n][0] - cx, qy = vertices[(i + 1) % n][1] - cy;
        const double dx = qx - px, dy = qy - py;

        // split [0,1] at circle crossings of the edge
        double ts[4] = {0.0, 1.0, 1.0, 1.0};
        int nt = 2;
        const double A = dx * dx + dy * dy;
        const double B = 2.0 * (px * dx + py * dy);
        const double C = px * px + py * py - r2;
        if (A > 0.0) {
            const double disc = B * B - 4.0 * A * C;
            if (disc > 0.0) {
                const double sdisc = std::sqrt(disc);
                const double t1 = (-B - sdisc) / (2.0 * A);
                const double t2 = (-B + sdisc) / (2.0 * A);
                if (t1 > 0.0 && t1 < 1.0) ts[nt++] = t1;
                if (t2 > 0.0 && t2 < 1.0) ts[nt++] = t2;
            }
        }
        std::sort(ts, ts + nt);

        for (int j = 0; j + 1 < nt; ++j) {
            const double ta = ts[j], tb = ts[j + 1];
            if (tb <= ta) continue;
            const double ax = px + ta * dx, ay = py + ta * dy;
            const double bx = px + tb * dx, by = py + tb * dy;
            const double tm = 0.5 * (ta + tb);
            const double mx = px + tm * dx, my = py + tm * dy;
            if (mx * mx + my * my <= r2) {
                area += 0.5 * cross2(ax, ay, bx, by); // chord part: triangle with centre
            } else {
                area += 0.5 * r2 * wrap_angle(std::atan2(by, bx) - std::atan2(ay, ax));
            }
        }
    }
    return std::abs(area);
}

Region Region::square(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("square: side must be positive");
    Region reg;
    reg.kind_ = RegionKind::square;
    reg.dim_ = 2;
    reg.size_ = s;
    reg.volume_ = s * s;
    reg.perimeter_ = 4.0 * s;
    reg.reach_ = 0.0;
    reg.vertices_ = {{0.0, 0.0}, {s, 0.0}, {s, s}, {0.0, s}};
    return reg;
}

Region Region::disk(double radius) { return ball(2, radius); }

Region Region::ball(int d, double radius) {
    if (d < 2) throw std::invalid_argument("ball: dimension must be >= 2");
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
    Region reg;
    reg.kind_ = d == 2 ? RegionKind::disk : RegionKind::ball;
    reg.dim_ = d;
    reg.size_ = radius;
    reg.volume_ = unit_ball_volume(d) * std::pow(radius, d);
    reg.perimeter_ = d * unit_ball_volume(d) * std::pow(radius, d - 1);
    reg.reach_ = radius;
    return reg;
}

Region Region::torus(int d, double s) {
    if (d < 2) throw std::invalid_argument("torus: dimension must be >= 2");
    if (!(s > 0.0)) throw std::invalid_argument("torus: side must be positive");
    Region reg;
    reg.kind_ = RegionKind::torus;
    reg.dim_ = d;
    reg.size_ = s;
    reg.volume_ = std::pow(s, d);
    reg.perimeter_ = 0.0;
    reg.reach_ = kInf;
    return reg;
}

Region Region::polygon(std::vector<std::array<double, 2>> vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon: need at least 3 vertices");
    const double signed_area = polygon_signed_area(vertices);
    if (!(signed_area > 0.0))
        throw std::invalid_argument("polygon: vertices must be counterclockwise with positive area");
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_properly_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                                            vertices[(j + 1) % n]))
                throw std::invalid_argument("polygon: self-intersecting vertex list");
        }
    }
    Region reg;
    reg.kind_ = RegionKind::polygon;
    reg.dim_ = 2;
    reg.size_ = 0.0;
    reg.volume_ = signed_area;
    double per = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = vertices[i];
        const auto& q = vertices[(i + 1) % n];
        per += std::hypot(q[0] - p[0], q[1] - p[1]);
    }
    reg.perimeter_ = per;
    reg.reach_ = 0.0;
    reg.vertices_ = std::move(vertices);
    reg.build_polygon_cache();
    return reg;
}

void Region::build_polygon_cache() {
    // ear clipping; polygons here are small, O(n^2) is fine
    std::vector<int> idx(vertices_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);

    auto is_ear = [&](std::size_t pos) {
        const int ip = idx[(pos + idx.size() - 1) % idx.size()];
        const int ic = idx[pos];
        const int in = idx[(pos + 1) % idx.size()];
        const auto &a = vertices_[ip], &b = vertices_[ic], &c = vertices_[in];
        const double cr = cross2(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]);
        if (cr <= 0.0) return cr == 0.0; // degenerate ears are clipped, reflex ones are not
        for (int other : idx) {
            if (other == ip || other == ic || other == in) continue;
            if (point_in_triangle(vertices_[other][0], vertices_[other][1], a, b, c)) return false;
        }
        return true;
    };

    while (idx.size() > 3) {
        bool clipped = false;
        for (std::size_t pos = 0; pos < idx.size(); ++pos) {
            if (!is_ear(pos)) continue;
            const int ip = idx[(pos + idx.size() - 1) % idx.size()];
            const int ic = idx[pos];
            const int in = idx[(pos + 1) % idx.size()];
            triangles_.push_back({ip, ic, in});
            idx.erase(idx.begin() + static_cast<long>(pos));
            clipped = true;
            break;
        }
        if (!clipped) throw std::runtime_error("polygon: triangulation failed");
    }
    triangles_.push_back({idx[0], idx[1], idx[2]});

    tri_cum_area_.resize(triangles_.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < triangles_.size(); ++i) {
        const auto& t = triangles_[i];
        const auto &a = vertices_[t[0]], &b = vertices_[t[1]], &c = vertices_[t[2]];
        cum += 0.5 * std::abs(cross2(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]));
        tri_cum_area_[i] = cum;
    }
}

double Region::perimeter() const {
    if (kind_ == RegionKind::torus)
        throw std::invalid_argument("perimeter: torus has no boundary");
    return perimeter_;
}

double Region::side() const {
    if (kind_ != RegionKind::square && kind_ != RegionKind::torus)
        throw std::invalid_argument("side: region is not a square or torus");
    return size_;
}

double Region::radius() const {
    if (kind_ != RegionKind::disk && kind_ != RegionKind::ball)
        throw std::invalid_argument("radius: region is not a disk or ball");
    return size_;
}

const std::vector<std::array<double, 2>>& Region::vertices() const {
    if (vertices_.empty())
        throw std::invalid_argument("vertices: region has no polygon representation");
    return vertices_;
}

bool Region::contains(std::span<const double> x) const {
    switch (kind_) {
        case RegionKind::square:
        case RegionKind::torus: {
            for (int i = 0; i < dim_; ++i)
                if (x[i] < 0.0 || x[i] > size_) return false;
            return true;
        }
        case RegionKind::disk:
        case RegionKind::ball: {
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) s += x[i] * x[i];
            return s <= size_ * size_;
        }
        case RegionKind::polygon: {
            // ray crossing; boundary points count as inside
            bool inside = false;
            const std::size_t n = vertices_.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                const auto &p = vertices_[j], &q = vertices_[i];
                if (point_segment_distance(x[0], x[1], p[0], p[1], q[0], q[1]) == 0.0) return true;
                if ((q[1] > x[1]) != (p[1] > x[1])) {
                    const double t = (x[1] - q[1]) / (p[1] - q[1]);
                    if (x[0] < q[0] + t * (p[0] - q[0])) inside = !inside;
                }
            }
            return inside;
        }
    }
    return false;
}

void Region::bounding_box(std::span<double> lo, std::span<double> hi) const {
    switch (kind_) {
        case RegionKind::square:
        case RegionKind::torus:
            for (int i = 0; i < dim_; ++i) {
                lo[i] = 0.0;
                hi[i] = size_;
            }
            break;
        case RegionKind::disk:
        case RegionKind::ball:
            for (int i = 0; i < dim_; ++i) {
                lo[i] = -size_;
                hi[i] = size_;
            }
            break;
        case RegionKind::polygon: {
            lo[0] = lo[1] = kInf;
            hi[0] = hi[1] = -kInf;
            for (const auto& v : vertices_) {
                lo[0] = std::min(lo[0], v[0]);
                lo[1] = std::min(lo[1], v[1]);
                hi[0] = std::max(hi[0], v[0]);
                hi[1] = std::max(hi[1], v[1]);
            }
            break;
        }
    }
}

void Region::require_inside(std::span<const double> x) const {
    if (!contains(x)) throw std::invalid_argument("point is outside the region");
}

double Region::distance_to_boundary(std::span<const double> x) const {
    require_inside(x);
    switch (kind_) {
        case RegionKind::torus:
            return kInf;
        case RegionKind::disk:
        case RegionKind::ball: {
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) s += x[i] * x[i];
            return size_ - std::sqrt(s);
        }
        case RegionKind::square:
            return std::min(std::min(x[0], size_ - x[0]), std::min(x[1], size_ - x[1]));
        case RegionKind::polygon: {
            double best = kInf;
            const std::size_t n = vertices_.size();
            for (std::size_t i = 0; i < n; ++i) {
                const auto &p = vertices_[i], &q = vertices_[(i + 1) % n];
                best = std::min(best,
                                point_segment_distance(x[0], x[1], p[0], p[1], q[0], q[1]));
            }
            return best;
        }
    }
    return 0.0;
}

double Region::ball_intersection_volume(std::span<const double> x, double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("ball_intersection_volume: r must be positive");
    require_inside(x);
    if (kind_ == RegionKind::torus) {
        if (!(r < 0.5 * size_))
            throw std::invalid_argument("ball_intersection_volume: torus needs r < side/2");
        return unit_ball_volume(dim_) * std::pow(r, dim_);
    }
    if (distance_to_boundary(x) >= r) return unit_ball_volume(dim_) * std::pow(r, dim_);
    switch (kind_) {
        case RegionKind::disk:
        case RegionKind::ball: {
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) s += x[i] * x[i];
            return ball_lens_volume(size_, r, std::sqrt(s), dim_);
        }
        case RegionKind::square:
        case RegionKind::polygon:
            return circle_polygon_area(vertices_, x[0], x[1], r);
        default:
            break;
    }
    return 0.0;
}

void Region::sample_uniform(Rng& rng, std::span<double> out) const {
    switch (kind_) {
        case RegionKind::square:
        case RegionKind::torus:
            for (int i = 0; i < dim_; ++i) out[i] = size_ * rng.uniform();
            return;
        case RegionKind::disk:
        case RegionKind::ball: {
            double norm2 = 0.0;
            do {
                norm2 = 0.0;
                for (int i = 0; i < dim_; ++i) {
                    out[i] = rng.gaussian();
                    norm2 += out[i] * out[i];
                }
            } while (norm2 == 0.0);
            const double rad =
                size_ * std::pow(rng.uniform(), 1.0 / dim_) / std::sqrt(norm2);
            for (int i = 0; i < dim_; ++i) out[i] *= rad;
            return;
        }
        case RegionKind::polygon: {
            const double u = rng.uniform() * tri_cum_area_.back();
            const auto it = std::lower_bound(tri_cum_area_.begin(), tri_cum_area_.end(), u);
            const auto& t =
                triangles_[static_cast<std::size_t>(it - tri_cum_area_.begin())];
            const auto &a = vertices_[t[0]], &b = vertices_[t[1]], &c = vertices_[t[2]];
            const double s1 = std::sqrt(rng.uniform());
            const double s2 = rng.uniform();
            out[0] = (1.0 - s1) * a[0] + s1 * ((1.0 - s2) * b[0] + s2 * c[0]);
            out[1] = (1.0 - s1) * a[1] + s1 * ((1.0 - s2) * b[1] + s2 * c[1]);
            return;
        }
    }
}

double Region::metric_distance(std::span<const double> x, std::span<const double> y) const {
    double s = 0.0;
    if (kind_ == RegionKind::torus) {
        for (int i = 0; i < dim_; ++i) {
            double d = std::abs(x[i] - y[i]);
            d = std::min(d, size_ - d);
            s += d * d;
        }
    } else {
        for (int i = 0; i < dim_; ++i) s += sq(x[i] - y[i]);
    }
    return std::sqrt(s);
}

double sigma(const Region& region) {
    if (!region.has_boundary()) throw std::invalid_argument("sigma: torus has no boundary");
    const int d = region.dim();
    return region.perimeter() / std::pow(region.volume(), 1.0 - 1.0 / d);
}

DomainPair DomainPair::same(Region a) {
    DomainPair p{a, std::move(a), false};
    return p;
}

DomainPair DomainPair::nested(Region a, Region b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("DomainPair: dimension mismatch");
    if (a.kind() == RegionKind::torus || b.kind() == RegionKind::torus)
        throw std::invalid_argument("DomainPair: nested pair cannot involve a torus");
    // closure(B) must sit strictly inside the interior of A: walk sampled
    // boundary points of B and require positive clearance from boundary(A).
    const int d = b.dim();
    const int n_samples = 512;
    std::vector<double> pt(static_cast<std::size_t>(d));
    double clearance = std::numeric_limits<double>::infinity();
    auto check = [&](std::span<const double> x) {
        if (!a.contains(x)) throw std::invalid_argument("DomainPair: B is not contained in A");
        clearance = std::min(clearance, a.distance_to_boundary(x));
    };
    switch (b.kind()) {
        case RegionKind::disk:
        case RegionKind::ball: {
            Rng rng(0x5EEDBA11);
            for (int i = 0; i < n_samples; ++i) {
                double norm2 = 0.0;
                do {
                    norm2 = 0.0;
                    for (int j = 0; j < d; ++j) {
                        pt[static_cast<std::size_t>(j)] = rng.gaussian();
                        norm2 += sq(pt[static_cast<std::size_t>(j)]);
                    }
                } while (norm2 == 0.0);
                for (int j = 0; j < d; ++j)
                    pt[static_cast<std::size_t>(j)] *= b.radius() / std::sqrt(norm2);
                check(pt);
            }
            break;
        }
        case RegionKind::square:
        case RegionKind::polygon: {
            const auto& v = b.vertices();
            for (std::size_t i = 0; i < v.size(); ++i) {
                const auto &p = v[i], &q = v[(i + 1) % v.size()];
                for (int s = 0; s < n_samples / static_cast<int>(v.size()) + 1; ++s) {
                    const double t =
                        static_cast<double>(s) / (n_samples / static_cast<double>(v.size()) + 1.0);
                    pt[0] = p[0] + t * (q[0] - p[0]);
                    pt[1] = p[1] + t * (q[1] - p[1]);
                    check(pt);
                }
            }
            break;
        }
        default:
            break;
    }
    if (!(clearance > 0.0))
        throw std::invalid_argument("DomainPair: closure(B) must lie in the interior of A");
    DomainPair pr{std::move(a), std::move(b), true};
    return pr;
}

} // namespace kcover

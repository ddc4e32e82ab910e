#include "stretchline/hyp2.hpp"
#include "stretchline/error.hpp"

#include <cmath>
#include <limits>

namespace stretchline::hyp2 {

namespace {

bool finite(double v) { return std::isfinite(v); }

// log(sinh x) and log(cosh x) valid for large x.
double log_sinh(double x) { return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x)); }
double log_cosh(double x) { return x - std::log(2.0) + std::log1p(std::exp(-2.0 * x)); }

// Circle-or-line form of a geodesic: vertical <=> one endpoint at infinity.
struct ArcForm {
    bool vertical = false;
    double x = 0.0;      // line abscissa when vertical
    double center = 0.0; // otherwise semicircle center and radius
    double radius = 0.0;
};

ArcForm arc_form(const HGeodesic& g) {
    ArcForm f;
    const bool si = g.src.is_infinity(1e-300);
    const bool di = g.dst.is_infinity(1e-300);
    if (si && di) throw domain_error("degenerate geodesic: both endpoints at infinity");
    if (si || di) {
        f.vertical = true;
        f.x = si ? g.dst.value() : g.src.value();
        return f;
    }
    const double a = g.src.value(), b = g.dst.value();
    if (a == b) throw domain_error("degenerate geodesic: equal endpoints");
    f.center = 0.5 * (a + b);
    f.radius = 0.5 * std::fabs(b - a);
    return f;
}

} // namespace

bool IdealPoint::is_infinity(double tol) const {
    return std::fabs(v) <= tol * std::fabs(u) || (v == 0.0);
}

double IdealPoint::value() const {
    if (v == 0.0) return u > 0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
    return u / v;
}

double cross(const IdealPoint& a, const IdealPoint& b) {
    return a.u * b.v - a.v * b.u;
}

bool same_ideal_point(const IdealPoint& a, const IdealPoint& b, double tol) {
    const double na = std::hypot(a.u, a.v), nb = std::hypot(b.u, b.v);
    if (na == 0.0 || nb == 0.0) throw domain_error("zero projective pair");
    return std::fabs(cross(a, b)) <= tol * na * nb;
}

double dist(const HPoint& p, const HPoint& q) {
    if (!finite(p.x) || !finite(p.y) || !finite(q.x) || !finite(q.y))
        throw domain_error("dist: non-finite input");
    if (p.y <= 0.0 || q.y <= 0.0) throw domain_error("dist: point not in upper half-plane");
    const double dx = p.x - q.x, dy = p.y - q.y;
    // cosh d = 1 + (dx^2+dy^2)/(2 y1 y2), rewritten through sinh(d/2) so
    // nearby points lose no precision.
    return 2.0 * std::asinh(std::sqrt((dx * dx + dy * dy) / (4.0 * p.y * q.y)));
}

HIsometry normalized(double a, double b, double c, double d) {
    const double det = a * d - b * c;
    if (!finite(det) || det <= 0.0)
        throw domain_error("isometry must have positive determinant");
    const double s = std::sqrt(det);
    HIsometry f{a / s, b / s, c / s, d / s};
    const double tr = f.trace();
    if (tr < 0.0 && std::fabs(tr) >= 2.0) {
        f.a = -f.a; f.b = -f.b; f.c = -f.c; f.d = -f.d;
    }
    return f;
}

HIsometry compose(const HIsometry& f, const HIsometry& g) {
    return normalized(f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d,
                      f.c * g.a + f.d * g.c, f.c * g.b + f.d * g.d);
}

HIsometry inverse(const HIsometry& f) {
    return normalized(f.d, -f.b, -f.c, f.a);
}

HPoint apply(const HIsometry& f, const HPoint& p) {
    const double nre = f.c * p.x + f.d;
    const double nim = f.c * p.y;
    const double den = nre * nre + nim * nim;
    if (den == 0.0) throw domain_error("isometry maps point to infinity");
    const double norm2 = p.x * p.x + p.y * p.y;
    const double re = (f.a * f.c * norm2 + (f.a * f.d + f.b * f.c) * p.x + f.b * f.d) / den;
    const double im = p.y / den; // det = 1
    return {re, im};
}

IdealPoint apply(const HIsometry& f, const IdealPoint& p) {
    IdealPoint q{f.a * p.u + f.b * p.v, f.c * p.u + f.d * p.v};
    // keep the pair well scaled
    const double n = std::max(std::fabs(q.u), std::fabs(q.v));
    if (n > 0.0) { q.u /= n; q.v /= n; }
    return q;
}

HGeodesic apply(const HIsometry& f, const HGeodesic& g) {
    return {apply(f, g.src), apply(f, g.dst)};
}

HIsometry normalize_to_imaginary_axis(const HGeodesic& g) {
    if (same_ideal_point(g.src, g.dst))
        throw domain_error("geodesic endpoints coincide");
    double a = g.src.v, b = -g.src.u;
    const double c = g.dst.v, d = -g.dst.u;
    if (a * d - b * c < 0.0) { a = -a; b = -b; }
    return normalized(a, b, c, d);
}

HPoint point_at(const HGeodesic& g, double t) {
    const HIsometry h = inverse(normalize_to_imaginary_axis(g));
    return apply(h, HPoint{0.0, std::exp(t)});
}

HGeodesic geodesic_through(const HPoint& p, const HPoint& q) {
    if (p.y <= 0.0 || q.y <= 0.0) throw domain_error("points must lie in upper half-plane");
    const double dx = q.x - p.x;
    if (std::fabs(dx) <= 1e-14 * (std::fabs(p.x) + std::fabs(q.x) + 1.0)) {
        if (p.y == q.y) throw domain_error("geodesic_through: coincident points");
        if (q.y > p.y) return {IdealPoint::of(p.x), IdealPoint::infinity()};
        return {IdealPoint::infinity(), IdealPoint::of(p.x)};
    }
    const double c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * dx);
    const double r = std::hypot(p.x - c, p.y);
    if (dx > 0.0) return HGeodesic::through_reals(c - r, c + r);
    return HGeodesic::through_reals(c + r, c - r);
}

HGeodesic perpendicular_at(const HGeodesic& g, double t) {
    const HIsometry h = inverse(normalize_to_imaginary_axis(g));
    const double s = std::exp(t);
    // perpendicular to the imaginary axis at height s: semicircle (-s, s)
    HGeodesic perp = HGeodesic::through_reals(-s, s);
    return apply(h, perp);
}

bool geodesics_cross(const HGeodesic& g1, const HGeodesic& g2) {
    const double f1 = cross(g1.src, g2.src) * cross(g1.dst, g2.src);
    const double f2 = cross(g1.src, g2.dst) * cross(g1.dst, g2.dst);
    return f1 * f2 < 0.0;
}

bool share_endpoint(const HGeodesic& g1, const HGeodesic& g2, double tol) {
    return same_ideal_point(g1.src, g2.src, tol) || same_ideal_point(g1.src, g2.dst, tol) ||
           same_ideal_point(g1.dst, g2.src, tol) || same_ideal_point(g1.dst, g2.dst, tol);
}

HPoint crossing_point(const HGeodesic& g1, const HGeodesic& g2) {
    if (!geodesics_cross(g1, g2)) throw domain_error("geodesics do not cross");
    const ArcForm f1 = arc_form(g1), f2 = arc_form(g2);
    if (f1.vertical && f2.vertical) throw domain_error("parallel vertical geodesics");
    if (f1.vertical || f2.vertical) {
        const ArcForm& line = f1.vertical ? f1 : f2;
        const ArcForm& circ = f1.vertical ? f2 : f1;
        const double dx = line.x - circ.center;
        const double y2 = circ.radius * circ.radius - dx * dx;
        if (y2 <= 0.0) throw domain_error("numeric failure in crossing_point");
        return {line.x, std::sqrt(y2)};
    }
    const double dc = f2.center - f1.center;
    if (dc == 0.0) throw domain_error("concentric geodesics do not cross");
    // xs solves (x-c1)^2 - r1^2 = (x-c2)^2 - r2^2
    const double xs = (f1.radius * f1.radius - f2.radius * f2.radius +
                       f2.center * f2.center - f1.center * f1.center) / (2.0 * dc);
    const double y2 = f1.radius * f1.radius - (xs - f1.center) * (xs - f1.center);
    if (y2 <= 0.0) throw domain_error("numeric failure in crossing_point");
    return {xs, std::sqrt(y2)};
}

std::pair<HPoint, double> foot_and_distance(const HPoint& p, const HGeodesic& g) {
    const HIsometry h = normalize_to_imaginary_axis(g);
    const HPoint q = apply(h, p);
    const double d = std::asinh(std::fabs(q.x) / q.y);
    const HPoint foot{0.0, std::hypot(q.x, q.y)};
    return {apply(inverse(h), foot), d};
}

PerpData common_perpendicular(const HGeodesic& g1, const HGeodesic& g2) {
    if (share_endpoint(g1, g2)) throw asymptotic_error("geodesics share an ideal endpoint");
    if (geodesics_cross(g1, g2)) throw intersecting_error("geodesics intersect");
    const HIsometry h = normalize_to_imaginary_axis(g1);
    const HIsometry hinv = inverse(h);
    double p = apply(h, g2.src).value();
    double q = apply(h, g2.dst).value();
    if (!finite(p) || !finite(q) || p * q <= 0.0)
        throw domain_error("common_perpendicular: unexpected configuration");
    const double sp = (p > 0.0) ? 1.0 : -1.0;
    p = std::fabs(p); q = std::fabs(q);
    const double root = std::sqrt(p * q);
    const HPoint foot1{0.0, root};
    const HPoint foot2{sp * 2.0 * p * q / (p + q), root * std::fabs(q - p) / (p + q)};
    PerpData out;
    out.foot_on_first = apply(hinv, foot1);
    out.foot_on_second = apply(hinv, foot2);
    out.length = std::asinh(2.0 * root / std::fabs(q - p));
    return out;
}

HIsometry axis_translation(const HGeodesic& g, double ell) {
    if (!finite(ell)) throw domain_error("axis_translation: non-finite length");
    const HIsometry h = normalize_to_imaginary_axis(g);
    const HIsometry dil = normalized(std::exp(ell / 2.0), 0.0, 0.0, std::exp(-ell / 2.0));
    return compose(inverse(h), compose(dil, h));
}

double translation_length(const HIsometry& f) {
    const double half = std::fabs(f.trace()) / 2.0;
    if (half <= 1.0) throw not_hyperbolic("translation_length: |trace| <= 2");
    return 2.0 * std::acosh(half);
}

std::optional<HGeodesic> axis_of(const HIsometry& f) {
    const double tr = f.trace();
    const double disc = tr * tr - 4.0;
    if (disc <= 0.0) return std::nullopt;
    const double s = std::sqrt(disc);
    // eigenvalues (tr +- s)/2; fixed point (lambda - d)/c for c != 0
    if (std::fabs(f.c) > 1e-300) {
        const double lam_plus = (tr >= 0 ? (tr + s) : (tr - s)) / 2.0; // larger |.|
        const double lam_minus = (tr >= 0 ? (tr - s) : (tr + s)) / 2.0;
        const IdealPoint attract{lam_plus - f.d, f.c};
        const IdealPoint repel{lam_minus - f.d, f.c};
        return HGeodesic{repel, attract};
    }
    // c = 0: fixed points are infinity and b/(d-a)
    const IdealPoint inf = IdealPoint::infinity();
    const IdealPoint fin = IdealPoint::of(f.b / (f.d - f.a));
    if (std::fabs(f.a) > std::fabs(f.d)) return HGeodesic{fin, inf};
    return HGeodesic{inf, fin};
}

CloserCertificate closer_check(double eps1, double eps2,
                               const HGeodesic& lam, const HGeodesic& alpha,
                               double t0, double t1, double t2, double tol) {
    if (!(eps1 > 0.0) || !(eps2 > eps1))
        throw domain_error("closer_check: need 0 < eps1 < eps2");
    CloserCertificate cert;
    cert.required_gap = std::log(2.0 * std::sinh(eps2) / std::sinh(eps1));
    cert.bound = eps1;
    if (!(t0 < t1 && t1 < t2)) throw hypothesis_failed("points out of order along lam");
    if (t1 - t0 < cert.required_gap - tol || t2 - t1 < cert.required_gap - tol)
        throw hypothesis_failed("point gaps below L");
    const HPoint p0 = point_at(lam, t0);
    const HPoint p1 = point_at(lam, t1);
    const HPoint p2 = point_at(lam, t2);
    if (foot_and_distance(p0, alpha).second > eps2 + tol)
        throw hypothesis_failed("d(p0, alpha) > eps2");
    if (foot_and_distance(p2, alpha).second > eps2 + tol)
        throw hypothesis_failed("d(p2, alpha) > eps2");
    cert.measured = foot_and_distance(p1, alpha).second;
    cert.slack = cert.bound - cert.measured;
    cert.ok = cert.measured <= eps1 + tol;
    return cert;
}

double projection_span(const HGeodesic& alpha, const HGeodesic& lam) {
    if (geodesics_cross(alpha, lam)) throw intersecting_error("geodesics intersect");
    if (share_endpoint(alpha, lam)) throw asymptotic_error("geodesics share an ideal endpoint");
    const HIsometry h = normalize_to_imaginary_axis(alpha);
    const double p = apply(h, lam.src).value();
    const double q = apply(h, lam.dst).value();
    return std::fabs(std::log(std::fabs(p)) - std::log(std::fabs(q)));
}

bool translate_intersect_check(const HGeodesic& alpha, const HGeodesic& lam, double ell) {
    if (geodesics_cross(alpha, lam))
        throw intersecting_error("translate_intersect_check: alpha crosses lam");
    if (!(ell > 0.0)) throw domain_error("translate_intersect_check: ell must be positive");
    const HIsometry phi = axis_translation(alpha, ell);
    return geodesics_cross(lam, apply(phi, lam));
}

double lambert_fourth_side(double side, double adj) {
    if (!(side > 0.0) || !(adj >= 0.0) || !finite(side) || !finite(adj))
        throw domain_error("lambert_fourth_side: need side > 0, adj >= 0");
    if (side + adj < 350.0)
        return std::asinh(std::sinh(side) * std::cosh(adj));
    // log-space form; asinh(X) = log(2X) up to O(1/X^2)
    return log_sinh(side) + log_cosh(adj) + std::log(2.0);
}

double lambert_side_from_fourth(double fourth, double adj) {
    if (!(fourth > 0.0) || !(adj >= 0.0)) throw domain_error("lambert_side_from_fourth");
    if (fourth < 350.0 && adj < 350.0)
        return std::asinh(std::sinh(fourth) / std::cosh(adj));
    const double lg = log_sinh(fourth) - log_cosh(adj);
    if (lg > 30.0) return lg + std::log(2.0);
    return std::asinh(std::exp(lg));
}

double collar_crossing_length(double v) {
    if (!(v > 0.0)) throw domain_error("collar_crossing_length: v must be positive");
    return 2.0 * std::asinh(1.0 / std::sinh(v / 2.0));
}

double collar_chord_length(double w, double sin_theta) {
    if (!(w > 0.0) || !(sin_theta > 0.0) || sin_theta > 1.0 + 1e-12)
        throw domain_error("collar_chord_length: bad arguments");
    return 2.0 * std::asinh(std::sinh(w) / std::min(sin_theta, 1.0));
}

double crossing_angle_sine(double u, double v) {
    if (!(u < 0.0 && v > 0.0)) throw domain_error("crossing_angle_sine: need u < 0 < v");
    return 2.0 * std::sqrt(-u * v) / (v - u);
}

} // namespace stretchline::hyp2

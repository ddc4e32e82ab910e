#pragma once

// Exact kernel for the hyperbolic plane in the upper half-plane model.
// Geodesics are stored by their ideal endpoints as projective pairs so
// vertical geodesics need no special casing; isometries are unit
// determinant 2x2 real matrices acting by fractional-linear maps and
// identified with their negation.

#include <cstdint>
#include <optional>
#include <utility>

namespace stretchline::hyp2 {

inline constexpr double kDefaultTol = 1e-9;

struct HPoint {
    double x = 0.0;
    double y = 1.0; // > 0
};

// Boundary point u/v of the real projective line; (1, 0) is infinity.
struct IdealPoint {
    double u = 0.0;
    double v = 1.0;

    static IdealPoint infinity() { return {1.0, 0.0}; }
    static IdealPoint of(double x) { return {x, 1.0}; }
    bool is_infinity(double tol = 0.0) const;
    double value() const; // u/v, +-inf allowed
};

// cross(a, b) = a.u*b.v - a.v*b.u; zero iff projectively equal.
double cross(const IdealPoint& a, const IdealPoint& b);
bool same_ideal_point(const IdealPoint& a, const IdealPoint& b, double tol = 1e-12);

struct HGeodesic {
    IdealPoint src; // orientation: from src toward dst
    IdealPoint dst;

    static HGeodesic through_reals(double a, double b) {
        return {IdealPoint::of(a), IdealPoint::of(b)};
    }
    static HGeodesic imaginary_axis() {
        return {IdealPoint::of(0.0), IdealPoint::infinity()};
    }
};

struct HIsometry {
    // Unit determinant; sign fixed so the trace is >= 0 whenever |trace| >= 2.
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static HIsometry identity() { return {}; }
    double trace() const { return a + d; }
};

struct PerpData {
    HPoint foot_on_first;
    HPoint foot_on_second;
    double length = 0.0;
};

// --- basic ops -----------------------------------------------------------

double dist(const HPoint& p, const HPoint& q);

HIsometry normalized(double a, double b, double c, double d);
HIsometry compose(const HIsometry& f, const HIsometry& g); // f after g
HIsometry inverse(const HIsometry& f);
HPoint apply(const HIsometry& f, const HPoint& p);
IdealPoint apply(const HIsometry& f, const IdealPoint& p);
HGeodesic apply(const HIsometry& f, const HGeodesic& g);

// Unique isometry sending g to the imaginary axis with src -> 0, dst -> inf.
HIsometry normalize_to_imaginary_axis(const HGeodesic& g);

// Unit-speed parameterization of g; t = 0 at the point mapped to i by
// normalize_to_imaginary_axis, increasing toward dst.
HPoint point_at(const HGeodesic& g, double t);

// Geodesic through two distinct interior points, oriented from p to q.
HGeodesic geodesic_through(const HPoint& p, const HPoint& q);

// Geodesic meeting g at right angle at point_at(g, t).
HGeodesic perpendicular_at(const HGeodesic& g, double t);

// Strict transversal crossing (shared ideal endpoints count as non-crossing).
bool geodesics_cross(const HGeodesic& g1, const HGeodesic& g2);
bool share_endpoint(const HGeodesic& g1, const HGeodesic& g2, double tol = 1e-12);

// Crossing point of two transversal geodesics.
HPoint crossing_point(const HGeodesic& g1, const HGeodesic& g2);

std::pair<HPoint, double> foot_and_distance(const HPoint& p, const HGeodesic& g);

PerpData common_perpendicular(const HGeodesic& g1, const HGeodesic& g2);

HIsometry axis_translation(const HGeodesic& g, double ell);

// Translation length 2*arccosh(|tr|/2) of a hyperbolic element.
double translation_length(const HIsometry& f);

// Axis of a hyperbolic element, oriented from repelling to attracting
// fixed point; nullopt when |trace| <= 2.
std::optional<HGeodesic> axis_of(const HIsometry& f);

// --- named verifiers ------------------------------------------------------

struct CloserCertificate {
    double required_gap = 0.0;   // L = log(2 sinh(eps2)/sinh(eps1))
    double measured = 0.0;       // d(p1, alpha)
    double bound = 0.0;          // eps1
    double slack = 0.0;          // bound - measured
    bool ok = false;
};

// Three-point fellow-traveling check. The points are given by arclength
// parameters along lam (t0 < t1 < t2) to remove ordering ambiguity.
CloserCertificate closer_check(double eps1, double eps2,
                               const HGeodesic& lam, const HGeodesic& alpha,
                               double t0, double t1, double t2,
                               double tol = kDefaultTol);

// Arclength extent of the orthogonal projection of lam onto alpha
// (distance between the feet of lam's ideal endpoints). Requires the two
// geodesics to be disjoint and non-asymptotic.
double projection_span(const HGeodesic& alpha, const HGeodesic& lam);

// Whether phi(lam) crosses lam for phi the translation of length ell along
// alpha. Guaranteed true when 0 < ell < projection_span(alpha, lam).
bool translate_intersect_check(const HGeodesic& alpha, const HGeodesic& lam,
                               double ell);

// Fourth-side relation of a quadrilateral with three right angles:
// sinh(D) = sinh(side) * cosh(adj), and its inverse.
double lambert_fourth_side(double side, double adj);
double lambert_side_from_fourth(double fourth, double adj);

// Length of the chord a crossing geodesic cuts out of the w_v-neighborhood
// of another geodesic, where v is the core translation length:
// L = 2 arcsinh(1/sinh(v/2)); an involution.
double collar_crossing_length(double v);

// Chord cut out of the w-neighborhood of a geodesic by a transversal
// crossing at angle theta: 2 arcsinh(sinh(w)/sin(theta)).
double collar_chord_length(double w, double sin_theta);

// sin of the crossing angle between the imaginary axis and the geodesic
// with endpoints u < 0 < v:  2 sqrt(|u| v) / (v - u).
double crossing_angle_sine(double u, double v);

} // namespace stretchline::hyp2

#pragma once

// Marked cusped surfaces from ideal triangulations with shear
// coordinates: holonomy, curve lengths, slope enumeration, short
// markings, stretch paths, and the developing-map lift machinery used by
// the collar and twisting measurements.

#include "stretchline/hyp2.hpp"
#include "stretchline/triangulation.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace stretchline::surface {

// 2x2 real matrix stored with a separate log scale so that long holonomy
// products (trace ~ exp(curve length / 2)) never overflow. True matrix
// = exp(log_scale) * [[a,b],[c,d]]; products of unit-determinant inputs
// keep true determinant 1.
struct ScaledMat {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    double log_scale = 0.0;

    static ScaledMat identity() { return {}; }
    static ScaledMat from_entries(double a, double b, double c, double d);
    static ScaledMat from_isometry(const hyp2::HIsometry& f);

    ScaledMat operator*(const ScaledMat& o) const;
    ScaledMat inv() const; // valid when the true determinant is 1

    double log_abs_trace() const;
    double scaled_det() const { return a * d - b * c; }

    hyp2::IdealPoint apply(const hyp2::IdealPoint& p) const;
    // Unit-determinant representative; requires positive scaled det.
    hyp2::HIsometry isometry() const;
};

// Deck transformation mapping developed triple src onto triple dst.
ScaledMat mobius_from_triples(const std::array<hyp2::IdealPoint, 3>& src,
                              const std::array<hyp2::IdealPoint, 3>& dst);

// Length 2 arccosh(|tr|/2) from a log-scaled trace; throws not_hyperbolic
// when |tr| <= 2 + 1e-12.
double length_from_log_trace(double log_abs_trace);

// --- curve classes ---------------------------------------------------------

// Primitive slope on the once-punctured torus: q > 0 with gcd(|p|,q) = 1,
// or (1,0). Curves are unoriented so (p,q) ~ (-p,-q).
struct Slope {
    long p = 1, q = 0;
    bool operator==(const Slope& o) const { return p == o.p && q == o.q; }
};

Slope normalized_slope(long p, long q);
long intersection_number(const Slope& a, const Slope& b); // |ps - qr|
std::string to_string(const Slope& s);

// Word over the free generators: +1/-1 for the first, +2/-2 for the
// second; Christoffel word from the Stern-Brocot descent.
std::vector<int> slope_word(const Slope& s);

// All slopes in the Stern-Brocot tree to the given depth plus mirrors:
// {(1,0),(0,1),(1,1),(-1,1)} at depth 0.
std::vector<Slope> enumerate_slopes(int depth);

// Slopes s' at distance one in the Farey graph from s (i(s,s') = 1)
// drawn from enumerate_slopes(depth).
std::vector<Slope> farey_neighbors(const Slope& s, int depth);

// Image of s under the n-th power of the Dehn twist about t.
Slope dehn_twist(const Slope& s, const Slope& t, long n);

struct CurveClass {
    std::optional<Slope> slope;
    std::vector<int> word; // reduced word in the surface generators

    static CurveClass from_slope(const Slope& s);
    static CurveClass from_word(std::vector<int> w);
    std::string name() const;
};

// --- marked surfaces --------------------------------------------------------

struct MarkedSurface {
    IdealTriangulation tri;
    std::vector<double> shears;

    // free generators of the deck group (dual loops off a spanning tree)
    std::vector<ScaledMat> gens;
    // one peripheral transformation per cusp
    std::vector<ScaledMat> peripherals;
    // one developed copy of each triangle, connected through the tree
    std::vector<std::array<hyp2::IdealPoint, 3>> base_triples;

    ScaledMat holonomy_word(const std::vector<int>& word) const;
    ScaledMat holonomy(const CurveClass& c) const;
};

// Build the surface: validates combinatorics, checks that every cusp
// shear sum vanishes (completeness), develops the triangulation and
// derives holonomy generators; verifies peripheral parabolicity.
MarkedSurface build_surface(const IdealTriangulation& tri,
                            const std::vector<double>& shears,
                            double tol = 1e-9);

MarkedSurface build_once_punctured_torus(double x, double y, double z,
                                         double tol = 1e-9);

// JSON surface spec: {"triangles":[[1,2,3],[-1,-2,-3]], "shears":[...],
// "label": "..."} with signed 1-based edge ids.
MarkedSurface load_surface_json(const std::string& path);
MarkedSurface parse_surface_json(const std::string& text);

double curve_length(const MarkedSurface& X, const CurveClass& c);
double curve_length(const MarkedSurface& X, const Slope& s);

struct SlopeLength {
    Slope slope;
    double length = 0.0;
};

// Lengths of all enumerated slopes in a fixed deterministic order;
// computed by carrying matrix products down the Stern-Brocot tree.
std::vector<SlopeLength> slope_lengths(const MarkedSurface& X, int depth);

struct Marking {
    Slope base;
    Slope transversal;
    double base_len = 0.0;
    double transversal_len = 0.0;
    bool boundary_attained = false; // length minimum hit the search frontier
};

Marking short_marking(const MarkedSurface& X, int depth);

struct StretchPath {
    MarkedSurface base;
    double t0 = 0.0;
    double t1 = 0.0;

    // Surface at time t: shears scaled by exp(t - t0).
    MarkedSurface at(double t) const;
};

StretchPath make_stretch_path(const MarkedSurface& base, double t0, double t1);

// max over enumerated curves of log(l_Y / l_X); a certified lower bound
// for the Thurston distance from X to Y, nondecreasing in depth.
double thurston_distance_lower_bound(const MarkedSurface& X, const MarkedSurface& Y,
                                     int depth);

// --- lifts ------------------------------------------------------------------

struct LiftData {
    hyp2::HGeodesic axis;       // axis of the deck transformation, surface frame
    ScaledMat deck;             // the holonomy of the curve
    hyp2::HIsometry to_frame;   // maps the axis to the imaginary axis
    double length = 0.0;
};

LiftData develop_lift(const MarkedSurface& X, const CurveClass& c);

// Frame in which gamma's axis is the imaginary axis; gamma's holonomy
// acts by z -> exp(core_length) z.
struct AnnularFrame {
    double core_length = 0.0;
    hyp2::HIsometry conj;            // surface frame -> annular frame
    std::vector<ScaledMat> fgens;     // frame-conjugated generators and inverses
    ScaledMat core;                   // frame-conjugated holonomy of gamma
};

AnnularFrame annular_frame(const MarkedSurface& X, const CurveClass& gamma);

// A geodesic crossing the imaginary axis with endpoints u < 0 < v,
// recorded up to the action of the core translation.
struct CrossingArc {
    double log_mu = 0.0;    // log(-u)
    double log_mv = 0.0;    // log(v)
    double sin_theta = 0.0; // crossing angle against the core axis
    double phase = 0.0;     // crossing height mod core_length
    int source = -1;        // edge id, or -1 for a curve lift
};

struct ArcSearchBudget {
    int max_depth = 11;
    int max_nodes = 400000;
    int stable_rounds = 2;
};

// Distinct arc classes of a curve's geodesic crossing the core, one per
// transit of the annulus; completceness is checked against i(curve, gamma)
// when both are slopes.
std::vector<CrossingArc> crossing_arcs_of_curve(const MarkedSurface& X,
                                                const AnnularFrame& frame,
                                                const CurveClass& curve,
                                                const ArcSearchBudget& budget = {});

// Arc classes of the triangulation leaves (the maximal stretch
// lamination) crossing the core.
std::vector<CrossingArc> crossing_arcs_of_leaves(const MarkedSurface& X,
                                                 const AnnularFrame& frame,
                                                 const ArcSearchBudget& budget = {});

struct CollarArcs {
    double core_len = 0.0;
    double width = 0.0;           // w_{l(gamma)}
    std::vector<double> lengths;  // chord of each arc class inside the collar
    double max_len = 0.0;
};

// Lengths of the arcs the other curve (or the lamination when `other` is
// nullopt) cuts inside the standard collar of gamma.
CollarArcs collar_trace(const MarkedSurface& X, const CurveClass& gamma,
                        const std::optional<CurveClass>& other,
                        const ArcSearchBudget& budget = {});

struct TwistValue {
    int value = 0;
    int uncertainty = 1;
};

// Signed relative twisting of b about gamma as seen from a, computed in
// the annular cover from one canonical crossing arc of each.
TwistValue relative_twist(const MarkedSurface& X, const CurveClass& gamma,
                          const CurveClass& a, const CurveClass& b);

// Same with the lamination in place of b.
TwistValue relative_twist_vs_leaves(const MarkedSurface& X, const CurveClass& gamma,
                                    const CurveClass& a);

// Annular subsurface coefficient between two crossing arcs:
// 0 for the same class, else 1 + (essential crossings in the annulus).
int annular_distance(const AnnularFrame& frame, const CrossingArc& a,
                     const CrossingArc& b);

// Whether the two arcs have disjoint representatives in the annular cover
// restricted to the collar of the core (lift-level disjointness).
bool arcs_disjoint_in_collar(const AnnularFrame& frame, const CrossingArc& a,
                             const CrossingArc& b, double width);

// Lifts of the core curve itself crossing a given arc, with the crossing
// parameter measured by arclength along the arc. Everything is returned
// in coordinates shifted by exp(-sigma) to stay in floating range.
struct CoreLiftCrossing {
    double param = 0.0;
    hyp2::HGeodesic geod;
    hyp2::HPoint point;
};

struct CoreLiftCrossings {
    double sigma = 0.0;
    hyp2::HGeodesic target;
    std::vector<CoreLiftCrossing> hits; // sorted by param
};

CoreLiftCrossings core_lifts_crossing_arc(const MarkedSurface& X,
                                          const AnnularFrame& frame,
                                          const CrossingArc& target,
                                          const ArcSearchBudget& budget = {});

// Whether the two arcs are disjoint in the full annular cover.
bool arcs_disjoint_in_annulus(const AnnularFrame& frame, const CrossingArc& a,
                              const CrossingArc& b);

} // namespace stretchline::surface

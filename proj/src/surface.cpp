#include "stretchline/surface.hpp"
#include "stretchline/collar.hpp"
#include "stretchline/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>

namespace stretchline::surface {

using hyp2::HGeodesic;
using hyp2::HIsometry;
using hyp2::HPoint;
using hyp2::IdealPoint;

// --- scaled matrices --------------------------------------------------------

namespace {

ScaledMat renormalized(double a, double b, double c, double d, double log_scale) {
    const double m = std::max(std::max(std::fabs(a), std::fabs(b)),
                              std::max(std::fabs(c), std::fabs(d)));
    if (!(m > 0.0) || !std::isfinite(m))
        throw domain_error("ScaledMat: degenerate matrix");
    return {a / m, b / m, c / m, d / m, log_scale + std::log(m)};
}

} // namespace

ScaledMat ScaledMat::from_entries(double a, double b, double c, double d) {
    return renormalized(a, b, c, d, 0.0);
}

ScaledMat ScaledMat::from_isometry(const HIsometry& f) {
    return renormalized(f.a, f.b, f.c, f.d, 0.0);
}

ScaledMat ScaledMat::operator*(const ScaledMat& o) const {
    return renormalized(a * o.a + b * o.c, a * o.b + b * o.d,
                        c * o.a + d * o.c, c * o.b + d * o.d,
                        log_scale + o.log_scale);
}

ScaledMat ScaledMat::inv() const {
    // true matrix has determinant one, so the true inverse is the adjugate
    return renormalized(d, -b, -c, a, log_scale);
}

double ScaledMat::log_abs_trace() const {
    const double t = std::fabs(a + d);
    if (t == 0.0) return -std::numeric_limits<double>::infinity();
    return log_scale + std::log(t);
}

IdealPoint ScaledMat::apply(const IdealPoint& p) const {
    IdealPoint q{a * p.u + b * p.v, c * p.u + d * p.v};
    const double n = std::max(std::fabs(q.u), std::fabs(q.v));
    if (!(n > 0.0)) throw domain_error("ScaledMat: projective image degenerate");
    q.u /= n;
    q.v /= n;
    return q;
}

HIsometry ScaledMat::isometry() const {
    const double det = scaled_det();
    if (!(det > 0.0))
        throw state_error("ScaledMat: unit-determinant representative unavailable at this scale");
    return hyp2::normalized(a, b, c, d);
}

ScaledMat mobius_from_triples(const std::array<IdealPoint, 3>& src,
                              const std::array<IdealPoint, 3>& dst) {
    // STD(p,q,r) sends (p,q,r) -> (0, inf, 1)
    auto std_map = [](const std::array<IdealPoint, 3>& t) {
        auto C = [](const IdealPoint& x, const IdealPoint& y) {
            return x.v * y.u - x.u * y.v;
        };
        const double cqr = C(t[1], t[2]);
        const double cpr = C(t[0], t[2]);
        if (cqr == 0.0 || cpr == 0.0)
            throw domain_error("mobius_from_triples: repeated ideal points");
        return ScaledMat::from_entries(cqr * t[0].v, -cqr * t[0].u,
                                       cpr * t[1].v, -cpr * t[1].u);
    };
    const ScaledMat m1 = std_map(src);
    const ScaledMat m2 = std_map(dst);
    ScaledMat out = m2.inv() * m1;
    if (!(out.scaled_det() > 0.0)) {
        // adjugate of a negative-determinant map: fix the sign convention by
        // negating one row (both triples must be consistently oriented)
        throw domain_error("mobius_from_triples: orientation mismatch");
    }
    // rescale so the true determinant is one
    const double det = out.scaled_det();
    const double corr = -0.5 * std::log(det);
    out.log_scale += corr - out.log_scale; // true det e^{2k} det_hat = 1
    out.log_scale = corr;
    return out;
}

double length_from_log_trace(double log_abs_trace) {
    const double gate = std::log(2.0 + 1e-12);
    if (!(log_abs_trace > gate))
        throw not_hyperbolic("trace too close to parabolic");
    if (log_abs_trace > 35.0) {
        // arccosh(T/2) = log T - O(1/T^2)
        return 2.0 * log_abs_trace;
    }
    return 2.0 * std::acosh(std::exp(log_abs_trace) / 2.0);
}

// --- slopes ------------------------------------------------------------------

Slope normalized_slope(long p, long q) {
    if (p == 0 && q == 0) throw domain_error("slope (0,0) is not a curve");
    if (q < 0 || (q == 0 && p < 0)) { p = -p; q = -q; }
    const long g = std::gcd(std::labs(p), std::labs(q));
    if (g > 1) throw domain_error("slope is not primitive: " + std::to_string(p) + "/" +
                                  std::to_string(q));
    return {p, q};
}

long intersection_number(const Slope& a, const Slope& b) {
    return std::labs(a.p * b.q - a.q * b.p);
}

std::string to_string(const Slope& s) {
    return std::to_string(s.p) + "/" + std::to_string(s.q);
}

std::vector<int> slope_word(const Slope& s) {
    if (s.q == 0) return {+1};
    if (s.p == 0) return {+2};
    const long p = std::labs(s.p), q = s.q;
    // Stern-Brocot descent between 0/1 (word B) and 1/0 (word A)
    long lp = 0, lq = 1, hp = 1, hq = 0;
    std::vector<int> wl{+2}, wh{+1};
    std::vector<int> word;
    for (;;) {
        const long mp = lp + hp, mq = lq + hq;
        std::vector<int> wm = wl;
        wm.insert(wm.end(), wh.begin(), wh.end());
        if (mp == p && mq == q) { word = std::move(wm); break; }
        if (p * mq < mp * q) { hp = mp; hq = mq; wh = std::move(wm); }
        else { lp = mp; lq = mq; wl = std::move(wm); }
        if (word.size() > 1u << 22)
            throw domain_error("slope_word: slope too deep");
    }
    if (s.p < 0)
        for (int& g : word)
            if (g == 1) g = -1;
    return word;
}

std::vector<Slope> enumerate_slopes(int depth) {
    if (depth < 0) throw domain_error("enumerate_slopes: depth must be >= 0");
    std::vector<Slope> out{{1, 0}, {0, 1}};
    struct Node { long lp, lq, hp, hq; int d; };
    for (int sign : {+1, -1}) {
        std::deque<Node> queue{{0, 1, 1, 0, 0}};
        while (!queue.empty()) {
            const Node n = queue.front();
            queue.pop_front();
            const long mp = n.lp + n.hp, mq = n.lq + n.hq;
            out.push_back({sign * mp, mq});
            if (n.d < depth) {
                queue.push_back({n.lp, n.lq, mp, mq, n.d + 1});
                queue.push_back({mp, mq, n.hp, n.hq, n.d + 1});
            }
        }
    }
    return out;
}

std::vector<Slope> farey_neighbors(const Slope& s, int depth) {
    std::vector<Slope> out;
    for (const Slope& t : enumerate_slopes(depth))
        if (intersection_number(s, t) == 1) out.push_back(t);
    return out;
}

Slope dehn_twist(const Slope& s, const Slope& t, long n) {
    const long i = s.p * t.q - s.q * t.p;
    return normalized_slope(s.p - n * i * t.p, s.q - n * i * t.q);
}

CurveClass CurveClass::from_slope(const Slope& s) {
    CurveClass c;
    c.slope = s;
    c.word = slope_word(s);
    return c;
}

CurveClass CurveClass::from_word(std::vector<int> w) {
    if (w.empty()) throw domain_error("empty word is not a curve");
    CurveClass c;
    c.word = std::move(w);
    return c;
}

std::string CurveClass::name() const {
    if (slope) return to_string(*slope);
    std::string s = "w:";
    for (int g : word) s += (g > 0 ? "+" : "-") + std::to_string(std::abs(g));
    return s;
}

// --- developing and holonomy -------------------------------------------------

namespace {

constexpr double kMaxShear = 600.0;

// Normalized frame for a side: maps (side tail, side head, opposite
// vertex) to (0, inf, -1); the vertex across the side sits at exp(shear).
std::array<IdealPoint, 3> standard_triple() {
    return {IdealPoint::of(0.0), IdealPoint::infinity(), IdealPoint::of(-1.0)};
}

struct Developer {
    const IdealTriangulation& tri;
    const std::vector<double>& shears;

    // Develop across side k of the developed triangle (t, triple);
    // returns the neighbor triangle index and its developed triple.
    std::pair<int, std::array<IdealPoint, 3>> cross(
        int t, const std::array<IdealPoint, 3>& triple, int k) const {
        const int e = tri.triangle(t).edge[k];
        const double z = shears[e];
        const std::array<IdealPoint, 3> local{triple[k], triple[(k + 1) % 3],
                                              triple[(k + 2) % 3]};
        const ScaledMat to_std = mobius_from_triples(local, standard_triple());
        const IdealPoint w = to_std.inv().apply(IdealPoint::of(std::exp(z)));
        const SideRef m = tri.mate(t, k);
        std::array<IdealPoint, 3> out;
        out[m.side] = triple[(k + 1) % 3];
        out[(m.side + 1) % 3] = triple[k];
        out[(m.side + 2) % 3] = w;
        return {m.tri, out};
    }
};

} // namespace

ScaledMat MarkedSurface::holonomy_word(const std::vector<int>& word) const {
    if (word.empty()) throw domain_error("holonomy of the empty word");
    ScaledMat m = ScaledMat::identity();
    for (int g : word) {
        const int idx = std::abs(g) - 1;
        if (idx < 0 || idx >= static_cast<int>(gens.size()))
            throw domain_error("word references unknown generator");
        m = m * (g > 0 ? gens[idx] : gens[idx].inv());
    }
    return m;
}

ScaledMat MarkedSurface::holonomy(const CurveClass& c) const {
    return holonomy_word(c.word);
}

MarkedSurface build_surface(const IdealTriangulation& tri,
                            const std::vector<double>& shears, double tol) {
    if (static_cast<int>(shears.size()) != tri.num_edges())
        throw combinatorics_error("shear vector size mismatch");
    double max_abs = 0.0;
    for (double z : shears) {
        if (!std::isfinite(z)) throw domain_error("non-finite shear");
        max_abs = std::max(max_abs, std::fabs(z));
    }
    if (max_abs > kMaxShear)
        throw domain_error("shear magnitude beyond the representable range");

    const double sum_tol = 1e-11 * std::max(1.0, max_abs);
    for (int c = 0; c < tri.num_cusps(); ++c) {
        const double s = tri.cusp_shear_sum(c, shears);
        if (std::fabs(s) > sum_tol)
            throw incomplete_structure("cusp shear sum " + std::to_string(s) +
                                       " is nonzero: structure not complete");
    }

    MarkedSurface X;
    X.tri = tri;
    X.shears = shears;

    const Developer dev{tri, shears};

    // develop a spanning tree of the dual graph
    X.base_triples.assign(tri.num_triangles(), standard_triple());
    std::vector<bool> developed(tri.num_triangles(), false);
    std::vector<bool> tree_edge(tri.num_edges(), false);
    developed[0] = true;
    std::deque<int> queue{0};
    while (!queue.empty()) {
        const int t = queue.front();
        queue.pop_front();
        for (int k = 0; k < 3; ++k) {
            const SideRef m = tri.mate(t, k);
            if (developed[m.tri]) continue;
            auto [nt, triple] = dev.cross(t, X.base_triples[t], k);
            X.base_triples[nt] = triple;
            developed[nt] = true;
            tree_edge[tri.triangle(t).edge[k]] = true;
            queue.push_back(nt);
        }
    }

    // one generator per non-tree edge: the deck transformation carrying the
    // base copy of the far triangle onto the copy developed across the edge
    for (int e = 0; e < tri.num_edges(); ++e) {
        if (tree_edge[e]) continue;
        const SideRef s = tri.side_of_edge(e, true);
        auto [nt, triple] = dev.cross(s.tri, X.base_triples[s.tri], s.side);
        X.gens.push_back(mobius_from_triples(X.base_triples[nt], triple));
    }

    // peripheral transformation for every cusp via the corner walk
    for (const auto& walk : tri.cusps()) {
        int t = walk.front().tri;
        std::array<IdealPoint, 3> triple = X.base_triples[t];
        for (const Corner& c : walk) {
            if (c.tri != t) throw combinatorics_error("corner walk out of sync");
            auto [nt, ntriple] = dev.cross(t, triple, c.vertex);
            t = nt;
            triple = ntriple;
        }
        if (t != walk.front().tri) throw combinatorics_error("cusp walk did not close");
        X.peripherals.push_back(mobius_from_triples(X.base_triples[t], triple));
    }

    // parabolicity of the peripherals, with a tolerance conditioned on the
    // dynamic range of the development (the trace 2 is swamped by rounding
    // once scales reach exp(~35))
    for (const ScaledMat& p : X.peripherals) {
        const double tr = std::exp(p.log_abs_trace());
        const double cond = std::exp(std::min(2.0 * max_abs * 3.0, 700.0)) * 1e-13;
        if (std::fabs(tr - 2.0) > tol + cond)
            throw incomplete_structure("peripheral trace " + std::to_string(tr) +
                                       " is not parabolic");
    }
    return X;
}

MarkedSurface build_once_punctured_torus(double x, double y, double z, double tol) {
    return build_surface(IdealTriangulation::once_punctured_torus(), {x, y, z}, tol);
}

MarkedSurface parse_surface_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("triangles") || !j.contains("shears"))
        throw domain_error("surface spec needs 'triangles' and 'shears'");
    std::vector<std::array<int, 3>> triples;
    for (const auto& t : j["triangles"]) {
        if (t.size() != 3) throw domain_error("triangle must have three signed edge ids");
        triples.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    std::vector<double> shears;
    for (const auto& s : j["shears"]) shears.push_back(s.get<double>());
    return build_surface(IdealTriangulation::from_signed_triples(triples), shears);
}

MarkedSurface load_surface_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open surface spec " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_surface_json(ss.str());
}

double curve_length(const MarkedSurface& X, const CurveClass& c) {
    return length_from_log_trace(X.holonomy(c).log_abs_trace());
}

double curve_length(const MarkedSurface& X, const Slope& s) {
    return curve_length(X, CurveClass::from_slope(s));
}

std::vector<SlopeLength> slope_lengths(const MarkedSurface& X, int depth) {
    if (X.gens.size() != 2)
        throw state_error("slope enumeration requires a once-punctured torus");
    std::vector<SlopeLength> out;
    const ScaledMat A = X.gens[0], B = X.gens[1];
    out.push_back({{1, 0}, length_from_log_trace(A.log_abs_trace())});
    out.push_back({{0, 1}, length_from_log_trace(B.log_abs_trace())});
    struct Node { long lp, lq, hp, hq; ScaledMat lo, hi; int d; };
    for (int sign : {+1, -1}) {
        std::deque<Node> queue;
        queue.push_back({0, 1, 1, 0, B, sign > 0 ? A : A.inv(), 0});
        while (!queue.empty()) {
            Node n = queue.front();
            queue.pop_front();
            const long mp = n.lp + n.hp, mq = n.lq + n.hq;
            const ScaledMat m = n.lo * n.hi;
            out.push_back({{sign * mp, mq}, length_from_log_trace(m.log_abs_trace())});
            if (n.d < depth) {
                queue.push_back({n.lp, n.lq, mp, mq, n.lo, m, n.d + 1});
                queue.push_back({mp, mq, n.hp, n.hq, m, n.hi, n.d + 1});
            }
        }
    }
    return out;
}

namespace {

bool slope_lex_less(const Slope& a, const Slope& b) {
    if (a.p != b.p) return a.p < b.p;
    return a.q < b.q;
}

} // namespace

Marking short_marking(const MarkedSurface& X, int depth) {
    const auto lens = slope_lengths(X, depth);
    Marking mk;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& sl : lens) {
        if (sl.length < best - 1e-12 ||
            (std::fabs(sl.length - best) <= 1e-12 && slope_lex_less(sl.slope, mk.base))) {
            best = std::min(best, sl.length);
            mk.base = sl.slope;
            mk.base_len = sl.length;
        }
    }
    double bestt = std::numeric_limits<double>::infinity();
    bool found = false;
    for (const auto& sl : lens) {
        if (intersection_number(mk.base, sl.slope) != 1) continue;
        if (sl.length < bestt - 1e-12 ||
            (std::fabs(sl.length - bestt) <= 1e-12 && slope_lex_less(sl.slope, mk.transversal))) {
            bestt = std::min(bestt, sl.length);
            mk.transversal = sl.slope;
            mk.transversal_len = sl.length;
            found = true;
        }
    }
    if (!found) throw state_error("short_marking: no transversal found at this depth");
    // frontier check: the minima should not sit at the deepest layer
    const long cutoff = 1L << std::max(depth - 1, 1);
    mk.boundary_attained = std::labs(mk.base.p) + mk.base.q > cutoff ||
                           std::labs(mk.transversal.p) + mk.transversal.q > cutoff;
    return mk;
}

MarkedSurface StretchPath::at(double t) const {
    if (t < t0 - 1e-12 || t > t1 + 1e-12)
        throw domain_error("stretch time outside the path range");
    std::vector<double> scaled = base.shears;
    const double f = std::exp(t - t0);
    for (double& z : scaled) z *= f;
    return build_surface(base.tri, scaled);
}

StretchPath make_stretch_path(const MarkedSurface& base, double t0, double t1) {
    if (!(t1 >= t0)) throw domain_error("stretch path needs t1 >= t0");
    return {base, t0, t1};
}

double thurston_distance_lower_bound(const MarkedSurface& X, const MarkedSurface& Y,
                                     int depth) {
    const auto lx = slope_lengths(X, depth);
    const auto ly = slope_lengths(Y, depth);
    if (lx.size() != ly.size()) throw state_error("enumeration mismatch");
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < lx.size(); ++i) {
        if (!(lx[i].slope == ly[i].slope)) throw state_error("enumeration order mismatch");
        best = std::max(best, std::log(ly[i].length / lx[i].length));
    }
    return best;
}

// --- lifts -------------------------------------------------------------------

namespace {

struct AxisEnds {
    double neg = 0.0; // root < 0
    double pos = 0.0; // root > 0
    bool crossing = false;
};

// Fixed points of the projective action; crossing means they straddle 0.
AxisEnds axis_ends_crossing(const ScaledMat& m) {
    AxisEnds out;
    const double A = m.c, B = m.d - m.a, C = -m.b;
    const double disc = B * B - 4.0 * A * C;
    if (!(disc > 0.0)) return out;
    const double sq = std::sqrt(disc);
    double r1, r2;
    if (std::fabs(A) < 1e-300) {
        if (std::fabs(B) < 1e-300) return out;
        r1 = C / B; // other fixed point at infinity: never a crossing pair
        (void)r1;
        return out;
    }
    const double q = -0.5 * (B + (B >= 0 ? sq : -sq));
    r1 = q / A;
    r2 = C / q;
    if (r1 > r2) std::swap(r1, r2);
    if (!(r1 < 0.0 && r2 > 0.0)) return out;
    if (-r1 < 1e-280 || -r1 > 1e280 || r2 < 1e-280 || r2 > 1e280) return out;
    out.neg = r1;
    out.pos = r2;
    out.crossing = true;
    return out;
}

CrossingArc make_arc(double neg, double pos, double core_len, int source) {
    CrossingArc arc;
    arc.log_mu = std::log(-neg);
    arc.log_mv = std::log(pos);
    arc.sin_theta = 1.0 / std::cosh((arc.log_mv - arc.log_mu) / 2.0);
    double ph = std::fmod((arc.log_mu + arc.log_mv) / 2.0, core_len);
    if (ph < 0.0) ph += core_len;
    arc.phase = ph;
    arc.source = source;
    return arc;
}

struct ArcKey {
    double tilt, phase;
};

bool same_arc_class(const CrossingArc& a, const CrossingArc& b, double core_len) {
    const double tilt_a = (a.log_mv - a.log_mu) / 2.0;
    const double tilt_b = (b.log_mv - b.log_mu) / 2.0;
    if (a.source != b.source) return false;
    if (std::fabs(tilt_a - tilt_b) > 1e-7 * (1.0 + std::fabs(tilt_a))) return false;
    double dp = std::fabs(a.phase - b.phase);
    dp = std::min(dp, core_len - dp);
    return dp <= 1e-7 * (1.0 + core_len);
}

} // namespace

LiftData develop_lift(const MarkedSurface& X, const CurveClass& c) {
    LiftData out;
    out.deck = X.holonomy(c);
    const double lt = out.deck.log_abs_trace();
    out.length = length_from_log_trace(lt);
    const double A = out.deck.c, B = out.deck.d - out.deck.a, C = -out.deck.b;
    const double disc = B * B - 4.0 * A * C;
    if (!(disc > 0.0)) throw not_hyperbolic("develop_lift: no axis");
    const double sq = std::sqrt(disc);
    IdealPoint f1, f2;
    double l1, l2; // eigenvalue magnitudes c xi + d
    if (std::fabs(A) < 1e-300) {
        f1 = IdealPoint::infinity();
        l1 = std::fabs(out.deck.a);
        f2 = IdealPoint::of(C / B);
        l2 = std::fabs(out.deck.d);
    } else {
        const double q = -0.5 * (B + (B >= 0 ? sq : -sq));
        const double r1 = q / A, r2 = C / q;
        f1 = IdealPoint::of(r1);
        f2 = IdealPoint::of(r2);
        l1 = std::fabs(out.deck.c * r1 + out.deck.d);
        l2 = std::fabs(out.deck.c * r2 + out.deck.d);
    }
    // axis runs from the repelling to the attracting fixed point
    out.axis = (l1 > l2) ? HGeodesic{f2, f1} : HGeodesic{f1, f2};
    out.to_frame = hyp2::normalize_to_imaginary_axis(out.axis);
    return out;
}

AnnularFrame annular_frame(const MarkedSurface& X, const CurveClass& gamma) {
    const LiftData lift = develop_lift(X, gamma);
    AnnularFrame fr;
    fr.core_length = lift.length;
    fr.conj = lift.to_frame;
    const ScaledMat conj = ScaledMat::from_isometry(fr.conj);
    const ScaledMat conj_inv = conj.inv();
    for (const ScaledMat& g : X.gens) {
        fr.fgens.push_back(conj * g * conj_inv);
    }
    const size_t n = fr.fgens.size();
    for (size_t i = 0; i < n; ++i) fr.fgens.push_back(fr.fgens[i].inv());
    fr.core = conj * lift.deck * conj_inv;
    return fr;
}

namespace {

// BFS over reduced words in the frame generators, collecting crossing arc
// classes of the targets. Targets are given as functions from a conjugator
// to candidate geodesic endpoints.
template <typename EmitCandidates>
std::vector<CrossingArc> bfs_crossing_arcs(const AnnularFrame& frame,
                                           const ArcSearchBudget& budget,
                                           int expected_classes,
                                           EmitCandidates&& emit,
                                           const std::vector<ScaledMat>& seeds) {
    const size_t ngen = frame.fgens.size(); // even: inverses in second half
    const size_t half = ngen / 2;
    std::vector<CrossingArc> classes;
    auto offer = [&](const CrossingArc& arc) {
        for (const CrossingArc& c : classes)
            if (same_arc_class(arc, c, frame.core_length)) return;
        classes.push_back(arc);
    };

    struct Item { ScaledMat u; int last; };
    std::deque<Item> queue;
    queue.push_back({ScaledMat::identity(), -1});
    for (const ScaledMat& s : seeds) queue.push_back({s, -1});

    int nodes = 0;
    int depth_marker = static_cast<int>(queue.size());
    int depth = 0;
    size_t last_count = 0;
    int stable = 0;
    while (!queue.empty()) {
        const Item it = queue.front();
        queue.pop_front();
        if (depth_marker-- == 0) {
            ++depth;
            depth_marker = static_cast<int>(queue.size());
            if (classes.size() == last_count) {
                if (++stable >= budget.stable_rounds && depth >= 5) break;
            } else {
                stable = 0;
                last_count = classes.size();
            }
            if (expected_classes > 0 &&
                static_cast<int>(classes.size()) >= expected_classes)
                break;
            if (depth > budget.max_depth) break;
        }
        if (++nodes > budget.max_nodes) break;
        emit(it.u, offer);
        if (std::fabs(it.u.log_scale) > 400.0) continue;
        for (size_t g = 0; g < ngen; ++g) {
            // skip the immediate inverse of the previous letter
            if (it.last >= 0 &&
                ((it.last < static_cast<int>(half) && g == it.last + half) ||
                 (it.last >= static_cast<int>(half) && g == it.last - half)))
                continue;
            queue.push_back({frame.fgens[g] * it.u, static_cast<int>(g)});
        }
    }
    std::sort(classes.begin(), classes.end(),
              [](const CrossingArc& a, const CrossingArc& b) {
                  if (a.sin_theta != b.sin_theta) return a.sin_theta > b.sin_theta;
                  return a.phase < b.phase;
              });
    return classes;
}

} // namespace

std::vector<CrossingArc> crossing_arcs_of_curve(const MarkedSurface& X,
                                                const AnnularFrame& frame,
                                                const CurveClass& curve,
                                                const ArcSearchBudget& budget) {
    const ScaledMat conj = ScaledMat::from_isometry(frame.conj);
    const ScaledMat target = conj * X.holonomy(curve) * conj.inv();
    // seed with prefix conjugates of the curve word (covers the transits
    // along the curve's own axis cheaply)
    std::vector<ScaledMat> seeds;
    ScaledMat pref = ScaledMat::identity();
    for (int g : curve.word) {
        const int idx = std::abs(g) - 1;
        pref = pref * (g > 0 ? X.gens[idx] : X.gens[idx].inv());
        seeds.push_back(conj * pref * conj.inv());
    }
    int expected = -1;
    (void)expected;
    auto emit = [&](const ScaledMat& u, auto&& offer) {
        const ScaledMat cand = u * target * u.inv();
        const AxisEnds ends = axis_ends_crossing(cand);
        if (ends.crossing)
            offer(make_arc(ends.neg, ends.pos, frame.core_length, -1));
    };
    return bfs_crossing_arcs(frame, budget, -1, emit, seeds);
}

std::vector<CrossingArc> crossing_arcs_of_leaves(const MarkedSurface& X,
                                                 const AnnularFrame& frame,
                                                 const ArcSearchBudget& budget) {
    const ScaledMat conj = ScaledMat::from_isometry(frame.conj);
    // one base lift per edge, taken from the forward side's developed copy
    struct EdgeLift { IdealPoint a, b; int edge; };
    std::vector<EdgeLift> base;
    for (int e = 0; e < X.tri.num_edges(); ++e) {
        const SideRef s = X.tri.side_of_edge(e, true);
        const auto& triple = X.base_triples[s.tri];
        base.push_back({conj.apply(triple[s.side]), conj.apply(triple[(s.side + 1) % 3]), e});
    }
    auto emit = [&](const ScaledMat& u, auto&& offer) {
        for (const EdgeLift& el : base) {
            const IdealPoint pa = u.apply(el.a);
            const IdealPoint pb = u.apply(el.b);
            if (pa.is_infinity(1e-280) || pb.is_infinity(1e-280)) continue;
            const double va = pa.value(), vb = pb.value();
            if (!(va * vb < 0.0)) continue;
            const double neg = std::min(va, vb), pos = std::max(va, vb);
            if (-neg < 1e-280 || -neg > 1e280 || pos < 1e-280 || pos > 1e280) continue;
            offer(make_arc(neg, pos, frame.core_length, el.edge));
        }
    };
    return bfs_crossing_arcs(frame, budget, -1, emit, {});
}

CollarArcs collar_trace(const MarkedSurface& X, const CurveClass& gamma,
                        const std::optional<CurveClass>& other,
                        const ArcSearchBudget& budget) {
    const AnnularFrame frame = annular_frame(X, gamma);
    CollarArcs out;
    out.core_len = frame.core_length;
    out.width = collar::collar_width(frame.core_length);
    std::vector<CrossingArc> arcs;
    if (other) {
        if (other->slope && gamma.slope &&
            intersection_number(*other->slope, *gamma.slope) == 0)
            return out; // disjoint (or equal): no collar arcs
        arcs = crossing_arcs_of_curve(X, frame, *other, budget);
    } else {
        arcs = crossing_arcs_of_leaves(X, frame, budget);
    }
    for (const CrossingArc& a : arcs) {
        const double tilt = std::fabs(a.log_mv - a.log_mu) / 2.0;
        const double chord = 2.0 * hyp2::lambert_fourth_side(out.width, tilt);
        out.lengths.push_back(chord);
        out.max_len = std::max(out.max_len, chord);
    }
    std::sort(out.lengths.begin(), out.lengths.end(), std::greater<double>());
    return out;
}

namespace {

const CrossingArc& canonical_arc(const std::vector<CrossingArc>& arcs,
                                 const char* what) {
    if (arcs.empty()) throw not_crossing(std::string("no crossing arc found for ") + what);
    return arcs.front(); // sorted by sin_theta descending
}

} // namespace

TwistValue relative_twist(const MarkedSurface& X, const CurveClass& gamma,
                          const CurveClass& a, const CurveClass& b) {
    if (gamma.slope && a.slope && intersection_number(*gamma.slope, *a.slope) == 0)
        throw not_crossing("first curve does not cross gamma");
    if (gamma.slope && b.slope && intersection_number(*gamma.slope, *b.slope) == 0)
        throw not_crossing("second curve does not cross gamma");
    const AnnularFrame frame = annular_frame(X, gamma);
    const CrossingArc arc_a = canonical_arc(crossing_arcs_of_curve(X, frame, a), "a");
    const CrossingArc arc_b = canonical_arc(crossing_arcs_of_curve(X, frame, b), "b");
    const double A1 = (arc_a.log_mu - arc_b.log_mu) / frame.core_length;
    const double A2 = (arc_a.log_mv - arc_b.log_mv) / frame.core_length;
    TwistValue tv;
    tv.value = static_cast<int>(std::lround(-(A1 + A2) / 2.0));
    tv.uncertainty = 1;
    return tv;
}

TwistValue relative_twist_vs_leaves(const MarkedSurface& X, const CurveClass& gamma,
                                    const CurveClass& a) {
    const AnnularFrame frame = annular_frame(X, gamma);
    const CrossingArc arc_a = canonical_arc(crossing_arcs_of_curve(X, frame, a), "a");
    const CrossingArc arc_l =
        canonical_arc(crossing_arcs_of_leaves(X, frame), "lamination");
    const double A1 = (arc_a.log_mu - arc_l.log_mu) / frame.core_length;
    const double A2 = (arc_a.log_mv - arc_l.log_mv) / frame.core_length;
    TwistValue tv;
    tv.value = static_cast<int>(std::lround(-(A1 + A2) / 2.0));
    tv.uncertainty = 1;
    return tv;
}

int annular_distance(const AnnularFrame& frame, const CrossingArc& a,
                     const CrossingArc& b) {
    if (same_arc_class(a, b, frame.core_length) ||
        (a.source == b.source && a.source == -1 &&
         same_arc_class(CrossingArc{a.log_mu, a.log_mv, a.sin_theta, a.phase, 0},
                        CrossingArc{b.log_mu, b.log_mv, b.sin_theta, b.phase, 0},
                        frame.core_length)))
        return 0;
    const double A1 = (a.log_mu - b.log_mu) / frame.core_length;
    const double A2 = (a.log_mv - b.log_mv) / frame.core_length;
    const double lo = std::min(A1, A2), hi = std::max(A1, A2);
    const long count = std::max(0L, static_cast<long>(std::ceil(hi) - std::ceil(lo)));
    return 1 + static_cast<int>(count);
}

bool arcs_disjoint_in_annulus(const AnnularFrame& frame, const CrossingArc& a,
                              const CrossingArc& b) {
    const double A1 = (a.log_mu - b.log_mu) / frame.core_length;
    const double A2 = (a.log_mv - b.log_mv) / frame.core_length;
    const double lo = std::min(A1, A2), hi = std::max(A1, A2);
    return std::ceil(hi) - std::ceil(lo) <= 0.0;
}

CoreLiftCrossings core_lifts_crossing_arc(const MarkedSurface& X,
                                          const AnnularFrame& frame,
                                          const CrossingArc& target,
                                          const ArcSearchBudget& budget) {
    (void)X;
    CoreLiftCrossings out;
    out.sigma = (target.log_mu + target.log_mv) / 2.0;
    const double tu = -std::exp(target.log_mu - out.sigma);
    const double tv = std::exp(target.log_mv - out.sigma);
    out.target = HGeodesic::through_reals(tu, tv);
    const HIsometry h_target = hyp2::normalize_to_imaginary_axis(out.target);

    const double ell = frame.core_length;
    // core translates that can reach across the target's span
    const double span = (target.log_mv - target.log_mu) / 2.0;
    const long k_max = static_cast<long>(std::ceil(span / ell)) + 3;

    const size_t ngen = frame.fgens.size();
    const size_t half = ngen / 2;
    struct Item { ScaledMat u; int last; int depth; };
    std::deque<Item> queue{{ScaledMat::identity(), -1, 0}};
    std::vector<std::pair<double, double>> seen; // dedup by shifted endpoints
    int nodes = 0;
    while (!queue.empty()) {
        const Item it = queue.front();
        queue.pop_front();
        if (++nodes > budget.max_nodes / 4) break;
        // geodesic u . axis has endpoints u(0), u(inf)
        const IdealPoint e0 = it.u.apply(IdealPoint::of(0.0));
        const IdealPoint e1 = it.u.apply(IdealPoint::infinity());
        if (!e0.is_infinity(1e-280) && !e1.is_infinity(1e-280)) {
            const double v0 = e0.value(), v1 = e1.value();
            const bool scale_ok = std::fabs(v0) < 1e280 && std::fabs(v1) < 1e280;
            for (long k = -k_max; scale_ok && k <= k_max; ++k) {
                const double f = std::exp(k * ell - out.sigma);
                const double a = v0 * f, b = v1 * f;
                if (!std::isfinite(a) || !std::isfinite(b) || a == b) continue;
                const double lo = std::min(a, b), hi = std::max(a, b);
                // interleave with (tu, tv)
                const bool cross = (lo > tu && lo < tv) != (hi > tu && hi < tv);
                if (!cross) continue;
                bool dup = false;
                for (const auto& s : seen) {
                    if (std::fabs(s.first - lo) <= 1e-9 * (1.0 + std::fabs(lo)) &&
                        std::fabs(s.second - hi) <= 1e-9 * (1.0 + std::fabs(hi))) {
                        dup = true;
                        break;
                    }
                }
                if (dup) continue;
                seen.push_back({lo, hi});
                CoreLiftCrossing hit;
                hit.geod = HGeodesic::through_reals(lo, hi);
                hit.point = hyp2::crossing_point(out.target, hit.geod);
                hit.param = std::log(hyp2::apply(h_target, hit.point).y);
                out.hits.push_back(hit);
            }
        }
        if (it.depth >= budget.max_depth - 3 || std::fabs(it.u.log_scale) > 400.0)
            continue;
        for (size_t g = 0; g < ngen; ++g) {
            if (it.last >= 0 &&
                ((it.last < static_cast<int>(half) && g == it.last + half) ||
                 (it.last >= static_cast<int>(half) && g == it.last - half)))
                continue;
            queue.push_back({frame.fgens[g] * it.u, static_cast<int>(g), it.depth + 1});
        }
    }
    std::sort(out.hits.begin(), out.hits.end(),
              [](const CoreLiftCrossing& a, const CoreLiftCrossing& b) {
                  return a.param < b.param;
              });
    return out;
}

bool arcs_disjoint_in_collar(const AnnularFrame& frame, const CrossingArc& a,
                             const CrossingArc& b, double width) {
    const double ell = frame.core_length;
    const double A1 = (a.log_mu - b.log_mu) / ell;
    const double A2 = (a.log_mv - b.log_mv) / ell;
    const double lo = std::min(A1, A2), hi = std::max(A1, A2);
    const long k_lo = static_cast<long>(std::ceil(lo));
    const long k_hi = static_cast<long>(std::ceil(hi)) - 1;
    const double sinh_w = std::sinh(width);
    for (long k = k_lo; k <= k_hi; ++k) {
        // translate b by phi^k and intersect the two full geodesics; scale
        // the picture down by the crossing height of a to stay in range
        const double s = (a.log_mu + a.log_mv) / 2.0;
        const double ua = -std::exp(a.log_mu - s), va = std::exp(a.log_mv - s);
        const double ub = -std::exp(b.log_mu + k * ell - s);
        const double vb = std::exp(b.log_mv + k * ell - s);
        const HGeodesic ga = HGeodesic::through_reals(ua, va);
        const HGeodesic gb = HGeodesic::through_reals(ub, vb);
        if (!hyp2::geodesics_cross(ga, gb)) continue;
        const HPoint z = hyp2::crossing_point(ga, gb);
        if (std::fabs(z.x) / z.y <= sinh_w) return false;
    }
    return true;
}

} // namespace stretchline::surface

#include "stretchline/analysis.hpp"
#include "stretchline/collar.hpp"
#include "stretchline/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace stretchline::analysis {

using hyp2::HGeodesic;
using hyp2::HPoint;
using surface::AnnularFrame;
using surface::CrossingArc;

Regime working_regime() {
    const constants::WorkingConstants w = constants::working_defaults();
    Regime r;
    r.name = "working";
    r.rho = w.rho;
    r.B = w.B;
    r.n0 = w.n0;
    r.L0 = w.L0;
    r.eps_w = w.eps_w;
    r.eps_h = w.eps_h;
    r.eps0 = w.eps0;
    r.s0 = w.s0;
    r.A = w.A;
    r.K = w.K;
    return r;
}

Regime certified_regime(const constants::ConstantsLedger& ledger) {
    if (!ledger.derived_solved) throw state_error("certified_regime: ledger not solved");
    Regime r;
    r.name = "certified";
    r.rho = ledger.rho;
    r.B = ledger.B;
    r.n0 = ledger.n0;
    r.L0 = ledger.L0;
    r.eps_w = ledger.eps_w;
    r.eps_h = ledger.eps_h;
    r.eps0 = ledger.eps0;
    r.s0 = ledger.s0;
    r.A = ledger.A;
    r.K = constants::working_defaults().K; // measured, never certified
    return r;
}

namespace {

// Short slopes of X sorted by length; the workhorse candidate list.
std::vector<surface::SlopeLength> sorted_slopes(const MarkedSurface& X, int depth) {
    auto lens = surface::slope_lengths(X, depth);
    std::sort(lens.begin(), lens.end(),
              [](const surface::SlopeLength& a, const surface::SlopeLength& b) {
                  if (a.length != b.length) return a.length < b.length;
                  if (a.slope.p != b.slope.p) return a.slope.p < b.slope.p;
                  return a.slope.q < b.slope.q;
              });
    return lens;
}

long icross(const Slope& a, const Slope& b) { return surface::intersection_number(a, b); }

// k-range of core translates of arc b crossing arc a.
struct KRange {
    long lo = 0, hi = -1; // inclusive; empty when hi < lo
    bool empty() const { return hi < lo; }
};

KRange crossing_range(const AnnularFrame& frame, const CrossingArc& a,
                      const CrossingArc& b) {
    const double A1 = (a.log_mu - b.log_mu) / frame.core_length;
    const double A2 = (a.log_mv - b.log_mv) / frame.core_length;
    KRange r;
    r.lo = static_cast<long>(std::ceil(std::min(A1, A2)));
    r.hi = static_cast<long>(std::ceil(std::max(A1, A2))) - 1;
    return r;
}

HGeodesic shifted_geodesic(const CrossingArc& arc, double k_ell, double sigma) {
    const double u = -std::exp(arc.log_mu + k_ell - sigma);
    const double v = std::exp(arc.log_mv + k_ell - sigma);
    return HGeodesic::through_reals(u, v);
}

// Witness construction in the annular frame of the anchor's carrier: p_i
// on the leaf lift, q_i on the curve lift, both on the k-th core
// translate of the transversal lift, k stepping through the meet of the
// two crossing ranges.
std::optional<std::vector<WitnessPoint>> build_strong_witness(
    const AnnularFrame& frame, const CrossingArc& tau, const CrossingArc& lam,
    const CrossingArc& alp, int n, double L, double eps_h) {
    const KRange kl = crossing_range(frame, lam, tau);
    const KRange ka = crossing_range(frame, alp, tau);
    const long lo = std::max(kl.lo, ka.lo);
    const long hi = std::min(kl.hi, ka.hi);
    if (hi < lo) return std::nullopt;
    const long m = static_cast<long>(std::ceil(L / frame.core_length)) + 1;
    if (hi - lo + 1 < (n - 1) * m + 1) return std::nullopt;
    // center the shift on the k-range actually used
    const long k_mid = lo + ((n - 1) * m) / 2;
    const double sigma =
        (tau.log_mu + tau.log_mv) / 2.0 + static_cast<double>(k_mid) * frame.core_length;
    const HGeodesic glam = shifted_geodesic(lam, 0.0, sigma);
    const HGeodesic galp = shifted_geodesic(alp, 0.0, sigma);
    std::vector<WitnessPoint> out;
    for (int i = 0; i < n; ++i) {
        const long k = lo + i * m;
        const HGeodesic gtau = shifted_geodesic(tau, k * frame.core_length, sigma);
        if (!hyp2::geodesics_cross(glam, gtau) || !hyp2::geodesics_cross(galp, gtau))
            return std::nullopt;
        WitnessPoint w;
        const HPoint p = hyp2::crossing_point(glam, gtau);
        const HPoint q = hyp2::crossing_point(galp, gtau);
        w.p_x = p.x; w.p_y = p.y;
        w.q_x = q.x; w.q_y = q.y;
        w.pq_dist = hyp2::dist(p, q);
        if (w.pq_dist > eps_h) return std::nullopt;
        out.push_back(w);
    }
    for (size_t i = 0; i + 1 < out.size(); ++i) {
        out[i].gap_to_next = hyp2::dist(HPoint{out[i].p_x, out[i].p_y},
                                        HPoint{out[i + 1].p_x, out[i + 1].p_y});
        if (out[i].gap_to_next < L) return std::nullopt;
    }
    return out;
}

std::optional<CrossingArc> first_arc(const std::vector<CrossingArc>& arcs) {
    if (arcs.empty()) return std::nullopt;
    return arcs.front();
}

} // namespace

std::optional<HorizontalCertificate> weakly_horizontal(const MarkedSurface& X,
                                                       const CurveClass& alpha,
                                                       const Regime& regime) {
    if (!alpha.slope) throw domain_error("weakly_horizontal: slope classes only");
    for (const auto& sl : sorted_slopes(X, std::min(regime.depth, 10))) {
        if (sl.length > regime.eps_w) break;
        if (icross(sl.slope, *alpha.slope) == 0) continue; // anchor must cross alpha
        const CurveClass gamma = CurveClass::from_slope(sl.slope);
        const AnnularFrame frame = surface::annular_frame(X, gamma);
        const double width = collar::collar_width(frame.core_length);
        const auto arcs_a = surface::crossing_arcs_of_curve(X, frame, alpha);
        const auto arcs_l = surface::crossing_arcs_of_leaves(X, frame);
        for (const CrossingArc& a : arcs_a) {
            for (const CrossingArc& l : arcs_l) {
                if (surface::arcs_disjoint_in_collar(frame, a, l, width)) {
                    HorizontalCertificate cert;
                    cert.kind = HorizontalCertificate::Kind::weak;
                    cert.anchor = sl.slope;
                    cert.anchor_len = sl.length;
                    return cert;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<HorizontalCertificate> strongly_horizontal(const MarkedSurface& X,
                                                         const CurveClass& alpha,
                                                         int n, double L,
                                                         const Regime& regime) {
    if (n < 1 || !(L > 0.0)) throw domain_error("strongly_horizontal: need n >= 1, L > 0");
    if (!alpha.slope) throw domain_error("strongly_horizontal: slope classes only");
    const auto slopes = sorted_slopes(X, std::min(regime.depth, 10));

    // Twisting criterion. Anchors of length >= 1 crossing alpha; the
    // shortest transversal tau must be eps_h-short and the lamination must
    // twist about the anchor beyond the threshold.
    int tried = 0;
    for (const auto& sl : slopes) {
        if (sl.length < 1.0) continue;
        if (icross(sl.slope, *alpha.slope) == 0) continue;
        if (++tried > 12 || sl.length > regime.eps_h) break;
        double tau_len = 0.0;
        Slope tau_slope{};
        bool have_tau = false;
        for (const auto& cand : slopes) {
            if (icross(cand.slope, sl.slope) >= 1) {
                tau_slope = cand.slope;
                tau_len = cand.length;
                have_tau = true;
                break;
            }
        }
        if (!have_tau || tau_len > regime.eps_h) continue;

        const CurveClass gamma = CurveClass::from_slope(sl.slope);
        const CurveClass tau = CurveClass::from_slope(tau_slope);
        const AnnularFrame frame = surface::annular_frame(X, gamma);
        const auto arc_t = first_arc(surface::crossing_arcs_of_curve(X, frame, tau));
        const auto arc_l = first_arc(surface::crossing_arcs_of_leaves(X, frame));
        const auto arc_a = first_arc(surface::crossing_arcs_of_curve(X, frame, alpha));
        if (!arc_t || !arc_l || !arc_a) continue;
        const int d_tau_lam = surface::annular_distance(frame, *arc_t, *arc_l);
        const int d_alpha_lam = surface::annular_distance(frame, *arc_a, *arc_l);
        const double threshold =
            n * std::ceil(L / frame.core_length + 1.0) + 5.0;
        if (d_tau_lam < threshold || d_alpha_lam > 3) continue;

        auto witness = build_strong_witness(frame, *arc_t, *arc_l, *arc_a, n, L,
                                            regime.eps_h);
        if (!witness) continue;
        HorizontalCertificate cert;
        cert.kind = HorizontalCertificate::Kind::strong;
        cert.anchor = tau_slope;
        cert.anchor_len = tau_len;
        cert.n = n;
        cert.L = L;
        cert.twisting_route = true;
        cert.witness = std::move(*witness);
        return cert;
    }

    // Direct route: an eps_h-short anchor whose lifts cross a leaf lift n
    // times with gaps >= L; a lift of alpha must pass within eps_h of each
    // crossing (H1/H2 verified from explicit lifts).
    int anchors_tried = 0;
    for (const auto& sl : slopes) {
        if (sl.length > regime.eps_h) break;
        if (icross(sl.slope, *alpha.slope) == 0) continue;
        if (++anchors_tried > 6) break;
        const CurveClass gamma = CurveClass::from_slope(sl.slope);
        const AnnularFrame frame = surface::annular_frame(X, gamma);
        const auto arcs_l = surface::crossing_arcs_of_leaves(X, frame);
        const auto arcs_a = surface::crossing_arcs_of_curve(X, frame, alpha);
        for (const CrossingArc& leaf : arcs_l) {
            const surface::CoreLiftCrossings hits =
                surface::core_lifts_crossing_arc(X, frame, leaf);
            if (static_cast<int>(hits.hits.size()) < n) continue;
            // greedy selection of crossings spaced at least L apart
            std::vector<const surface::CoreLiftCrossing*> sel;
            for (const auto& h : hits.hits) {
                if (sel.empty() || h.param - sel.back()->param >= L) sel.push_back(&h);
                if (static_cast<int>(sel.size()) == n) break;
            }
            if (static_cast<int>(sel.size()) < n) continue;
            // candidate alpha lifts: core translates of each crossing class
            for (const CrossingArc& aarc : arcs_a) {
                const long j_lo = static_cast<long>(
                    std::floor((hits.sigma - (aarc.log_mu + aarc.log_mv) / 2.0) /
                               frame.core_length)) - 2;
                for (long j = j_lo; j <= j_lo + 4; ++j) {
                    const double u = -std::exp(aarc.log_mu + j * frame.core_length -
                                               hits.sigma);
                    const double v = std::exp(aarc.log_mv + j * frame.core_length -
                                              hits.sigma);
                    if (!(u < 0.0) || !(v > 0.0) || !std::isfinite(u) || !std::isfinite(v))
                        continue;
                    const hyp2::HGeodesic galpha = hyp2::HGeodesic::through_reals(u, v);
                    std::vector<WitnessPoint> witness;
                    bool ok = true;
                    for (const auto* h : sel) {
                        if (!hyp2::geodesics_cross(galpha, h->geod)) { ok = false; break; }
                        const HPoint q = hyp2::crossing_point(galpha, h->geod);
                        WitnessPoint w;
                        w.p_x = h->point.x; w.p_y = h->point.y;
                        w.q_x = q.x; w.q_y = q.y;
                        w.pq_dist = hyp2::dist(h->point, q);
                        if (w.pq_dist > regime.eps_h) { ok = false; break; }
                        witness.push_back(w);
                    }
                    if (!ok) continue;
                    for (size_t i = 0; i + 1 < witness.size(); ++i) {
                        witness[i].gap_to_next =
                            hyp2::dist(HPoint{witness[i].p_x, witness[i].p_y},
                                       HPoint{witness[i + 1].p_x, witness[i + 1].p_y});
                        if (witness[i].gap_to_next < L) { ok = false; break; }
                    }
                    if (!ok) continue;
                    HorizontalCertificate cert;
                    cert.kind = HorizontalCertificate::Kind::strong;
                    cert.anchor = sl.slope;
                    cert.anchor_len = sl.length;
                    cert.n = n;
                    cert.L = L;
                    cert.twisting_route = false;
                    cert.witness = std::move(witness);
                    return cert;
                }
            }
        }
    }
    return std::nullopt;
}

bool revalidate_certificate(const HorizontalCertificate& cert, const Regime& regime,
                            double tol) {
    if (cert.kind != HorizontalCertificate::Kind::strong) return false;
    if (static_cast<int>(cert.witness.size()) != cert.n) return false;
    for (size_t i = 0; i < cert.witness.size(); ++i) {
        const WitnessPoint& w = cert.witness[i];
        const double pq = hyp2::dist(HPoint{w.p_x, w.p_y}, HPoint{w.q_x, w.q_y});
        if (std::fabs(pq - w.pq_dist) > 1e-6 * (1.0 + pq)) return false;
        if (pq > regime.eps_h + tol) return false;
        if (i + 1 < cert.witness.size()) {
            const WitnessPoint& x = cert.witness[i + 1];
            const double gap = hyp2::dist(HPoint{w.p_x, w.p_y}, HPoint{x.p_x, x.p_y});
            if (gap < cert.L - tol) return false;
        }
    }
    return true;
}

HVDecomposition hv_decomposition(const MarkedSurface& X, const CurveClass& alpha) {
    const surface::LiftData lift = surface::develop_lift(X, alpha);
    const AnnularFrame frame = surface::annular_frame(X, alpha);
    const auto arcs = surface::crossing_arcs_of_leaves(X, frame);
    if (arcs.empty())
        throw not_applicable("hv_decomposition: no lamination leaf crosses the curve");
    const CrossingArc& leaf = arcs.front();
    // leaf lift and its image under the deck transformation of alpha,
    // which acts as z -> e^{l} z in this frame
    const HGeodesic g0 = shifted_geodesic(leaf, 0.0, 0.0);
    const HGeodesic g1 = shifted_geodesic(leaf, lift.length, 0.0);
    HVDecomposition hv;
    if (hyp2::geodesics_cross(g0, g1) || hyp2::share_endpoint(g0, g1))
        throw not_applicable("hv_decomposition: leaf translates cross");
    const hyp2::PerpData perp = hyp2::common_perpendicular(g0, g1);
    hv.v = perp.length;
    // pull the second foot back to g0 by the inverse translation
    const HPoint back{perp.foot_on_second.x * std::exp(-lift.length),
                      perp.foot_on_second.y * std::exp(-lift.length)};
    hv.h = hyp2::dist(perp.foot_on_first, back);
    return hv;
}

CollarGrowthVerdict collar_growth_series(const StretchPath& path,
                                         const CurveClass& gamma, double s,
                                         const Regime& regime) {
    CollarGrowthVerdict out;
    out.s = s;
    const MarkedSurface Xs = path.at(s);
    out.base_len = surface::curve_length(Xs, gamma);
    if (out.base_len > regime.eps0)
        throw hypothesis_failed("collar_growth_series: curve not eps0-short at s");
    out.base_arc = surface::collar_trace(Xs, gamma, std::nullopt).max_len;
    out.min_margin = std::numeric_limits<double>::infinity();
    for (double t = s; t <= path.t1 + 1e-9; t += regime.step) {
        const MarkedSurface Xt = path.at(std::min(t, path.t1));
        const double len = surface::curve_length(Xt, gamma);
        if (len < 1.0) continue;
        const double arc = surface::collar_trace(Xt, gamma, std::nullopt).max_len;
        const double bound = 0.5 * std::exp(t - s) * out.base_arc;
        out.samples.push_back({t, arc, bound});
        out.min_margin = std::min(out.min_margin, arc / bound);
        if (arc < bound) out.ok = false;
    }
    return out;
}

GrowthVerdict growth_check(const StretchPath& path, const CurveClass& alpha,
                           double s, const HorizontalCertificate& cert,
                           const Regime& regime) {
    if (cert.kind != HorizontalCertificate::Kind::strong)
        throw state_error("growth_check: strong certificate required");
    if (cert.n < regime.n0 || cert.L < regime.L0)
        throw state_error("growth_check: certificate below the regime thresholds");
    GrowthVerdict out;
    const MarkedSurface Xs = path.at(s);
    const double len_s = surface::curve_length(Xs, alpha);
    const double w_h = collar::collar_width(regime.eps_h);
    out.min_margin = std::numeric_limits<double>::infinity();
    for (double t = s; t <= path.t1 + 1e-9; t += regime.step) {
        const MarkedSurface Xt = path.at(std::min(t, path.t1));
        const double len_t = surface::curve_length(Xt, alpha);
        const double b1 = std::exp(t - s) * std::min(0.5 * len_s, cert.L / 10.0);
        const double b2 = w_h * std::exp(t - s);
        out.first_bound.push_back({t, len_t, b1});
        out.second_bound.push_back({t, len_t, b2});
        out.min_margin = std::min(out.min_margin, len_t / std::max(b1, b2));
        if (len_t < b1 || len_t < b2) out.ok = false;
    }
    return out;
}

namespace {

struct AnnularSnapshot {
    AnnularFrame frame;
    double core_len = 0.0;
    Slope proj;                 // marking curve projected per the base rule
    bool marking_base_flag = false;
    std::optional<CrossingArc> proj_arc;
    std::optional<CrossingArc> leaf_arc;
};

AnnularSnapshot annular_snapshot(const MarkedSurface& X, const CurveClass& gamma,
                                 const Regime& regime) {
    if (!gamma.slope) throw domain_error("annular analysis needs a slope class");
    AnnularSnapshot snap{surface::annular_frame(X, gamma)};
    snap.core_len = snap.frame.core_length;
    const surface::Marking mk = surface::short_marking(X, regime.depth);
    if (mk.base == *gamma.slope) {
        snap.proj = mk.transversal; // the transversal projects when gamma is in the base
        snap.marking_base_flag = true;
    } else {
        snap.proj = mk.base;
    }
    snap.proj_arc = first_arc(surface::crossing_arcs_of_curve(
        X, snap.frame, CurveClass::from_slope(snap.proj)));
    snap.leaf_arc = first_arc(surface::crossing_arcs_of_leaves(X, snap.frame));
    return snap;
}

int track_metric(int a, int b) { return a == b ? 0 : std::abs(a - b) + 1; }

} // namespace

TrichotomyLabel trichotomy_classify(const MarkedSurface& X, const CurveClass& gamma,
                                    const Regime& regime) {
    TrichotomyLabel label;
    label.boundary_len = surface::curve_length(X, gamma);
    label.t1 = label.boundary_len <= regime.rho;

    const auto weak = weakly_horizontal(X, gamma, regime);
    std::optional<HorizontalCertificate> strong;
    if (!weak) strong = strongly_horizontal(X, gamma, regime.n0, regime.L0, regime);
    label.t2 = weak.has_value() || strong.has_value();
    label.certificate = weak ? weak : strong;

    const AnnularSnapshot snap = annular_snapshot(X, gamma, regime);
    label.marking_base_flag = snap.marking_base_flag;
    if (snap.proj_arc && snap.leaf_arc) {
        label.t3 = surface::arcs_disjoint_in_annulus(snap.frame, *snap.proj_arc,
                                                     *snap.leaf_arc);
    } else {
        label.t3 = true; // no essential meeting detected at all
    }
    return label;
}

ShadowTrack shadow_track(const StretchPath& path, const CurveClass& gamma,
                         const Regime& regime) {
    ShadowTrack track;
    const MarkedSurface Xa = path.at(path.t0);
    const AnnularSnapshot base = annular_snapshot(Xa, gamma, regime);
    const CurveClass ref = CurveClass::from_slope(base.proj);
    for (double t = path.t0; t <= path.t1 + 1e-9; t += regime.step) {
        const MarkedSurface Xt = path.at(std::min(t, path.t1));
        const AnnularSnapshot snap = annular_snapshot(Xt, gamma, regime);
        track.times.push_back(t);
        const surface::TwistValue tv =
            surface::relative_twist(Xt, gamma, ref, CurveClass::from_slope(snap.proj));
        track.twist.push_back(tv.value);
        int coeff = 0;
        if (snap.proj_arc && snap.leaf_arc)
            coeff = surface::annular_distance(snap.frame, *snap.proj_arc, *snap.leaf_arc);
        track.coeff_vs_leaves.push_back(coeff);
    }
    return track;
}

ActiveInterval active_interval(const StretchPath& path, const CurveClass& gamma,
                               const Regime& regime) {
    return active_interval(path, gamma, regime, shadow_track(path, gamma, regime));
}

ActiveInterval active_interval(const StretchPath& path, const CurveClass& gamma,
                               const Regime& regime, const ShadowTrack& track) {
    ActiveInterval out;
    out.a = path.t0;
    out.b = path.t1;
    out.step = regime.step;
    double d = path.t1;
    bool found_d = false;
    for (size_t i = 0; i < track.times.size(); ++i) {
        const MarkedSurface Xt = path.at(track.times[i]);
        std::optional<HorizontalCertificate> cert = weakly_horizontal(Xt, gamma, regime);
        if (!cert) cert = strongly_horizontal(Xt, gamma, regime.n0, regime.L0, regime);
        if (cert) {
            d = track.times[i];
            found_d = true;
            break;
        }
    }
    out.d = d;
    double c = d;
    for (size_t i = 0; i < track.times.size() && track.times[i] <= d + 1e-12; ++i) {
        if (track.coeff_vs_leaves[i] >= 2.0 * regime.B) {
            c = track.times[i];
            break;
        }
    }
    out.c = std::min(c, d);
    out.nondegenerate = found_d && out.c < out.d - 1e-12;

    auto diam = [&track](double lo, double hi) {
        int mn = 0, mx = 0;
        bool any = false, distinct = false;
        int first = 0;
        for (size_t i = 0; i < track.times.size(); ++i) {
            if (track.times[i] < lo - 1e-12 || track.times[i] > hi + 1e-12) continue;
            if (!any) { mn = mx = first = track.twist[i]; any = true; continue; }
            mn = std::min(mn, track.twist[i]);
            mx = std::max(mx, track.twist[i]);
            if (track.twist[i] != first) distinct = true;
        }
        if (!any || !distinct) return 0;
        return mx - mn + 1;
    };
    out.left_diam = diam(path.t0, out.c);
    out.right_diam = diam(out.d, path.t1);

    out.boundary_short_on_interval = true;
    for (double t = out.c; t <= out.d + 1e-9; t += regime.step) {
        const double len = surface::curve_length(path.at(std::min(t, out.d)), gamma);
        out.max_len_on_interval = std::max(out.max_len_on_interval, len);
        if (out.nondegenerate && len > regime.rho) out.boundary_short_on_interval = false;
    }
    return out;
}

BalancedTimes balanced_time_and_shadow(const StretchPath& path, const CurveClass& gamma,
                                       const std::vector<Slope>& probes,
                                       const Regime& regime, const ShadowTrack& track,
                                       const ActiveInterval& interval) {
    BalancedTimes out;
    out.probes = probes;

    auto twist_at = [&track](double t) {
        size_t best = 0;
        for (size_t i = 0; i < track.times.size(); ++i)
            if (std::fabs(track.times[i] - t) < std::fabs(track.times[best] - t)) best = i;
        return track.twist[best];
    };

    std::map<std::pair<long, long>, double> memo;
    auto balanced_time = [&](const Slope& s) {
        const auto key = std::make_pair(s.p, s.q);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        double tb = interval.d;
        for (double t = interval.c; t <= interval.d + 1e-9; t += regime.step) {
            const MarkedSurface Xt = path.at(std::min(t, interval.d));
            if (strongly_horizontal(Xt, CurveClass::from_slope(s), regime.n0, regime.L0,
                                    regime)) {
                tb = t;
                break;
            }
        }
        memo[key] = tb;
        return tb;
    };

    for (const Slope& s : probes) out.t_balanced.push_back(balanced_time(s));

    for (size_t i = 0; i < probes.size(); ++i) {
        for (size_t j = i + 1; j < probes.size(); ++j) {
            if (icross(probes[i], probes[j]) > 2) continue;
            const double defect = track_metric(twist_at(out.t_balanced[i]),
                                               twist_at(out.t_balanced[j]));
            out.lipschitz_defect = std::max(out.lipschitz_defect, defect);
        }
    }
    out.lipschitz_ok = out.lipschitz_defect <= regime.K;

    // retraction: probes drawn from the per-sample short marking
    for (double t = interval.c; t <= interval.d + 1e-9; t += 4.0 * regime.step) {
        const MarkedSurface Xt = path.at(std::min(t, interval.d));
        const AnnularSnapshot snap = annular_snapshot(Xt, gamma, regime);
        const double tb = balanced_time(snap.proj);
        const double defect = track_metric(twist_at(t), twist_at(tb));
        out.retraction_defect = std::max(out.retraction_defect, defect);
    }
    out.retraction_ok = out.retraction_defect <= regime.K;
    return out;
}

double quasigeodesic_constant(const std::vector<int>& track) {
    const size_t n = track.size();
    if (n < 3) return 1.0;
    double kp = 1.0;
    for (size_t r = 0; r < n; ++r) {
        for (size_t s = r; s < n; ++s) {
            const int drs = track_metric(track[r], track[s]);
            for (size_t t = s; t < n; ++t) {
                const int dst = track_metric(track[s], track[t]);
                const int drt = track_metric(track[r], track[t]);
                kp = std::max(kp, static_cast<double>(drs + dst) / (drt + 1.0));
            }
        }
    }
    return kp;
}

NearlyFillingReport nearly_filling_check(const StretchPath& path, const Regime& regime) {
    NearlyFillingReport rep;
    rep.threshold = 4.0 * regime.B;
    const MarkedSurface Xa = path.at(path.t0);
    const surface::Marking mk = surface::short_marking(Xa, regime.depth);
    const AnnularFrame frame =
        surface::annular_frame(Xa, CurveClass::from_slope(mk.base));
    const auto arcs = surface::crossing_arcs_of_leaves(Xa, frame);
    rep.proxy = 1.0 + collar::log_cutoff(1.0 + static_cast<double>(arcs.size()));
    if (rep.proxy < rep.threshold) {
        rep.status = "not-nearly-filling";
        return rep;
    }
    // the triangulation lamination fills the once-punctured torus: no
    // essential curve is disjoint from it, so the conclusion is vacuous
    rep.status = "vacuous";
    return rep;
}

} // namespace stretchline::analysis

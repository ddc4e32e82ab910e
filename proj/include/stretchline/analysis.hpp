#pragma once

// Dynamic analysis along stretch paths: horizontality detection, growth
// verdicts, the short/horizontal/vertical trichotomy, active intervals,
// balanced times, shadow tracks and the reparametrized-quasi-geodesic
// constant.

#include "stretchline/constants.hpp"
#include "stretchline/surface.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stretchline::analysis {

using surface::CurveClass;
using surface::MarkedSurface;
using surface::Slope;
using surface::StretchPath;

// The constants a run works against. Every report carries the regime
// name; the certified regime is faithful but vacuous at desk scale.
struct Regime {
    std::string name = "working";
    double rho = 10.0;
    double B = 4.0;
    int n0 = 4;
    double L0 = 5.0;
    double eps_w = 0.5;
    double eps_h = 8.0;
    double eps0 = 0.25; // collar-growth shortness threshold
    double s0 = 1.0;
    double A = 0.0;
    double K = 10.0;    // Lipschitz/retraction tolerance, reported
    double step = 0.05;
    int depth = 12;     // slope search depth
};

Regime working_regime();
Regime certified_regime(const constants::ConstantsLedger& ledger);

struct WitnessPoint {
    double p_x = 0.0, p_y = 0.0; // crossing of the leaf lift with an anchor lift
    double q_x = 0.0, q_y = 0.0; // crossing of the curve lift with the same anchor lift
    double pq_dist = 0.0;
    double gap_to_next = 0.0;    // along the leaf, to the next witness point
};

struct HorizontalCertificate {
    enum class Kind { weak, strong };
    Kind kind = Kind::weak;
    Slope anchor;            // anchor curve
    double anchor_len = 0.0;
    int n = 0;
    double L = 0.0;
    double time = 0.0;       // sample time the certificate was found at
    bool twisting_route = false;
    std::vector<WitnessPoint> witness;
};

// Weak horizontality: an eps_w-short anchor whose collar contains an arc
// of alpha and an arc of a lamination leaf that are disjoint.
std::optional<HorizontalCertificate> weakly_horizontal(const MarkedSurface& X,
                                                       const CurveClass& alpha,
                                                       const Regime& regime);

// Strong (n,L)-horizontality. Tries the twisting criterion first (an
// anchor gamma with length >= 1 whose shortest transversal tau satisfies
// d_gamma(tau, lamination) >= n ceil(L0/l(gamma)+1)+5 and
// d_gamma(alpha, lamination) <= 3), then a direct lift search.
std::optional<HorizontalCertificate> strongly_horizontal(const MarkedSurface& X,
                                                         const CurveClass& alpha,
                                                         int n, double L,
                                                         const Regime& regime);

// Re-validate a strong certificate from its recorded witness: gaps >= L
// and proximities <= eps_h, independently of the detector's search path.
bool revalidate_certificate(const HorizontalCertificate& cert, const Regime& regime,
                            double tol = 1e-9);

struct HVDecomposition {
    double h = 0.0;
    double v = 0.0;
};

// Horizontal/vertical split of alpha against a lamination leaf it
// crosses: v is the common-perpendicular length between the leaf lift and
// its image under alpha's deck transformation, h the leaf segment between
// the feet.
HVDecomposition hv_decomposition(const MarkedSurface& X, const CurveClass& alpha);

struct GrowthSample {
    double t = 0.0;
    double value = 0.0; // measured quantity
    double bound = 0.0; // required lower bound
};

struct CollarGrowthVerdict {
    double s = 0.0;
    double base_len = 0.0;     // curve length at s
    double base_arc = 0.0;     // longest collar arc at s
    std::vector<GrowthSample> samples; // at times with l_t(gamma) >= 1
    bool ok = true;
    double min_margin = 0.0;   // min of value/bound over samples
};

// Longest lamination arc in the collar of gamma grows at least like
// (1/2) e^{t-s} along the path, sampled at times with l_t(gamma) >= 1.
CollarGrowthVerdict collar_growth_series(const StretchPath& path,
                                         const CurveClass& gamma, double s,
                                         const Regime& regime);

struct GrowthVerdict {
    std::vector<GrowthSample> first_bound;  // e^{t-s} min(l_s/2, L_s/10)
    std::vector<GrowthSample> second_bound; // w_{eps_h} e^{t-s}
    bool ok = true;
    double min_margin = 0.0;
};

// Both displayed growth bounds for a strongly horizontal curve.
GrowthVerdict growth_check(const StretchPath& path, const CurveClass& alpha,
                           double s, const HorizontalCertificate& cert,
                           const Regime& regime);

struct TrichotomyLabel {
    bool t1 = false; // boundary short
    bool t2 = false; // boundary horizontal
    bool t3 = false; // projection close to the lamination
    double boundary_len = 0.0;
    std::optional<HorizontalCertificate> certificate;
    bool marking_base_flag = false; // gamma sat in the marking base (see notes)
    bool empty() const { return !(t1 || t2 || t3); }
};

TrichotomyLabel trichotomy_classify(const MarkedSurface& X, const CurveClass& gamma,
                                    const Regime& regime);

struct ActiveInterval {
    double a = 0.0, b = 0.0;
    double c = 0.0, d = 0.0;
    double step = 0.0;
    bool nondegenerate = false;
    double left_diam = 0.0;   // shadow diameter over [a, c]
    double right_diam = 0.0;  // shadow diameter over [d, b]
    bool boundary_short_on_interval = true; // l_t(gamma) <= rho on [c, d]
    double max_len_on_interval = 0.0;
};

struct ShadowTrack {
    std::vector<double> times;
    std::vector<int> twist;       // marking twist against the reference, per time
    std::vector<int> coeff_vs_leaves; // annular coefficient d_gamma(X_t, lamination)
};

ShadowTrack shadow_track(const StretchPath& path, const CurveClass& gamma,
                         const Regime& regime);

ActiveInterval active_interval(const StretchPath& path, const CurveClass& gamma,
                               const Regime& regime);
ActiveInterval active_interval(const StretchPath& path, const CurveClass& gamma,
                               const Regime& regime, const ShadowTrack& track);

struct BalancedTimes {
    std::vector<Slope> probes;
    std::vector<double> t_balanced;       // one per probe
    double lipschitz_defect = 0.0;        // max over probe pairs with i <= 2
    double retraction_defect = 0.0;       // max over marking probes
    bool lipschitz_ok = true;
    bool retraction_ok = true;
};

BalancedTimes balanced_time_and_shadow(const StretchPath& path, const CurveClass& gamma,
                                       const std::vector<Slope>& probes,
                                       const Regime& regime, const ShadowTrack& track,
                                       const ActiveInterval& interval);

// Minimal K' >= 1 with D(r,s) + D(s,t) <= K' D(r,t) + K' over all sample
// triples, where D is 0 for equal values and |difference| + 1 otherwise.
double quasigeodesic_constant(const std::vector<int>& track);

struct NearlyFillingReport {
    double proxy = 0.0;     // intersection-log lower proxy for d_S(X_a, lamination)
    double threshold = 0.0; // 4 B
    std::string status;     // "vacuous" | "not-nearly-filling"
    std::string method = "intersection-log-proxy";
};

NearlyFillingReport nearly_filling_check(const StretchPath& path, const Regime& regime);

} // namespace stretchline::analysis

#include "stretchline/collar.hpp"
#include "stretchline/error.hpp"

#include <algorithm>
#include <cmath>

namespace stretchline::collar {

double collar_width(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw domain_error("collar_width: eps must be positive");
    const double half = eps / 2.0;
    if (half > 350.0) {
        // 1/sinh(x) ~ 2 e^{-x}; asinh(t) ~ t for tiny t
        return 2.0 * std::exp(-half);
    }
    return std::asinh(1.0 / std::sinh(half));
}

double collar_boundary_length(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw domain_error("collar_boundary_length: eps must be positive");
    return eps / std::tanh(eps / 2.0);
}

double log_cutoff(double x) {
    if (!(x > 0.0)) throw domain_error("log_cutoff: x must be positive");
    return std::max(std::log(x), 1.0);
}

CollarQuantities collar_quantities(double eps) {
    return {eps, collar_width(eps), collar_boundary_length(eps)};
}

std::pair<double, double> transversal_bounds(double eps, double eps_B, double M) {
    if (!(eps > 0.0) || eps > eps_B)
        throw domain_error("transversal_bounds: need 0 < eps <= eps_B");
    if (!(M > 0.0)) throw domain_error("transversal_bounds: M must be positive");
    const double w = collar_width(eps);
    return {2.0 * w, 4.0 * w + 2.0 * M};
}

bool twist_arc_gap(double collar_arc_len, double twist, double A) {
    return std::fabs(collar_arc_len - twist) <= A;
}

std::pair<double, std::optional<double>> annulus_arc_bounds(const AnnulusArcConfig& cfg) {
    if (cfg.len_tau < 0.0 || cfg.len_eta < 0.0 || cfg.intersections < 0 || cfg.b < 0.0)
        throw domain_error("annulus_arc_bounds: negative quantity");
    const double first = cfg.len_eta + (cfg.intersections + 1) * cfg.b;
    std::optional<double> second;
    if (cfg.intersections >= 2 && cfg.D > 3.0 * cfg.b)
        second = cfg.len_eta / (1.0 - 3.0 * cfg.b / cfg.D);
    return {first, second};
}

AnnulusArcVerdict annulus_arc_verify(const AnnulusArcConfig& cfg, double tol) {
    auto [first, second] = annulus_arc_bounds(cfg);
    AnnulusArcVerdict v;
    v.first_bound = first;
    v.second_bound = second;
    v.first_ok = cfg.len_tau <= first + tol;
    if (second) v.second_ok = cfg.len_tau <= *second + tol;
    return v;
}

double pants_max_arc_estimate(double ell) {
    if (!(ell > 0.0)) throw domain_error("pants_max_arc_estimate: ell must be positive");
    // Right-angled hexagon with alternating sides (ell/2, s, ell/2, s, ell/2, s):
    // cosh s = (cosh(ell/2) + cosh^2(ell/2)) / sinh^2(ell/2).
    const double ch = std::cosh(ell / 2.0), sh = std::sinh(ell / 2.0);
    const double cs = (ch + ch * ch) / (sh * sh);
    const double seam = std::acosh(std::max(cs, 1.0));
    const double w = collar_width(ell);
    const double truncated_seam = std::max(seam - 2.0 * w, 0.0);
    const double b = collar_boundary_length(ell);
    // An arc avoiding all collars is trapped in the truncated pants, whose
    // diameter is controlled by truncated seams and collar boundaries.
    return 1.1 * 2.0 * (truncated_seam + b);
}

double pants_spacing_threshold(double ell) {
    return std::max(3.0 * pants_max_arc_estimate(ell),
                    6.0 * collar_boundary_length(ell));
}

bool pants_segment_check(const PantsSegments& p, double D0) {
    if (p.gamma_len <= 0.0 || p.omega_len[0] <= 0.0 || p.omega_len[1] <= 0.0 ||
        p.omega_len[2] <= 0.0)
        throw domain_error("pants_segment_check: lengths must be positive");
    if (p.spacing < D0)
        throw hypothesis_failed("pants_segment_check: spacing below D0");
    const double m = std::min({p.omega_len[0], p.omega_len[1], p.omega_len[2]});
    return m <= 6.0 * p.gamma_len;
}

std::pair<double, double> quad_constants(double delta, int chi) {
    if (!(delta > 0.0 && delta < 1.0))
        throw domain_error("quad_constants: delta must be in (0,1)");
    if (chi >= 0) throw domain_error("quad_constants: chi must be negative");
    const double a = std::fabs(static_cast<double>(chi));
    const double L = 2.0 * M_PI * a / delta;
    const double sh = std::sinh(delta / 2.0);
    const double K = a / (sh * sh);
    return {L, K};
}

double reltwist_bound(double len_tau, double len_boundary, double c_mult, double c_add) {
    if (!(len_tau > 0.0) || !(len_boundary > 0.0))
        throw domain_error("reltwist_bound: lengths must be positive");
    return c_mult * log_cutoff(len_tau / len_boundary) + c_add;
}

} // namespace stretchline::collar

#pragma once

// Closed-form collar quantities and the arithmetic side of the collar,
// annulus and pair-of-pants comparison lemmas.

#include <optional>
#include <utility>

namespace stretchline::collar {

// Half-width w_eps of the standard collar about a closed geodesic of
// length eps: arcsinh(1/sinh(eps/2)).
double collar_width(double eps);

// Boundary length b_eps = eps * coth(eps/2) of the standard collar;
// increasing, with infimum 2 as eps -> 0.
double collar_boundary_length(double eps);

// Cut-off logarithm: max{ln x, 1}.
double log_cutoff(double x);

struct CollarQuantities {
    double eps = 0.0;
    double width = 0.0;
    double boundary_len = 0.0;
};

CollarQuantities collar_quantities(double eps);

// Shortest-transversal window [2 w_eps, 4 w_eps + 2M] for a curve of
// length eps <= eps_B.
std::pair<double, double> transversal_bounds(double eps, double eps_B, double M);

// |collar_arc_len - twist| <= A, the unit-length-anchor comparison between
// the longest collar arc and the relative twist.
bool twist_arc_gap(double collar_arc_len, double twist, double A);

struct AnnulusArcConfig {
    double len_tau = 0.0;  // geodesic arc
    double len_eta = 0.0;  // competitor arc
    int intersections = 0; // i(tau, eta)
    double b = 0.0;        // bound on the hypercycle boundary lengths
    double D = 0.0;        // min spacing of consecutive intersections along tau
};

// First bound len_eta + (i+1) b always; second bound len_eta/(1 - 3b/D)
// when i >= 2 and D > 3b, else nullopt.
std::pair<double, std::optional<double>> annulus_arc_bounds(const AnnulusArcConfig& cfg);

struct AnnulusArcVerdict {
    double first_bound = 0.0;
    std::optional<double> second_bound;
    bool first_ok = false;
    bool second_ok = true; // vacuous when not applicable
};

AnnulusArcVerdict annulus_arc_verify(const AnnulusArcConfig& cfg, double tol = 1e-9);

struct PantsSegments {
    double gamma_len = 0.0;
    double omega_len[3] = {0.0, 0.0, 0.0};
    double spacing = 0.0;          // min gap along omega between gamma hits
    double boundary_len = 0.0;     // max boundary length of the pants
};

// Estimate of the longest simple geodesic arc in a pair of pants with
// boundary lengths <= ell that stays clear of the standard collars.
// Built from the right-angled-hexagon seam lengths of the symmetric
// (ell, ell, ell) pants, truncated at the collars, with a 1.1 safety
// factor; deterministic stand-in for an arc-sampling maximization.
double pants_max_arc_estimate(double ell);

// D0(ell) = max{3 M(ell), 6 b(ell)} gating the three-segment comparison.
double pants_spacing_threshold(double ell);

// True iff min_i omega_i <= 6 * gamma_len. Requires spacing >= D0.
bool pants_segment_check(const PantsSegments& p, double D0);

// Thin-quadrilateral constants L = 2 pi |chi| / delta and
// K = |chi| / sinh^2(delta/2).
std::pair<double, double> quad_constants(double delta, int chi);

// Coarse twisting bound c_mult * Log(len_tau / len_boundary) + c_add.
double reltwist_bound(double len_tau, double len_boundary,
                      double c_mult = 4.0, double c_add = 4.0);

} // namespace stretchline::collar

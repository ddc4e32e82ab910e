#pragma once

// The named-constants ledger: the eight-condition base system, corridor
// and trichotomy constants, and the derived thresholds. Two regimes are
// maintained: the certified ledger (faithful to the inequalities, with
// astronomically large rho, B, N0, N1) and a working ledger of desk-scale
// analogues used by the experiment suites.

#include <cstdint>
#include <string>
#include <vector>

namespace stretchline::constants {

struct ConditionSlack {
    std::string name;
    double slack = 0.0; // >= 0 means the condition holds
    bool ok = false;
};

struct ConstantsLedger {
    // inputs
    double eps_B = 0.0;
    double A = 0.0;
    double M = 0.0;
    int n0 = 0;

    // solved by the base system
    double eps_w = 0.0;
    double eps_h = 0.0;
    double L0 = 0.0;

    // collar-growth threshold (largest eps with w_eps > 2 b_1)
    double eps0 = 0.0;

    // configured, uncertified
    double L_eps_w = 0.0;  // intersection-scale constant of the long-segment lemma
    double c_mult = 4.0;   // coarse multiplicative coefficient
    double c_add = 4.0;    // coarse additive coefficient
    double B_coef = 4.0;   // multiple used in the three B bullets
    double K_prop = 4.0;   // additive error feeding N

    // derived
    double C_corridor = 0.0;
    double delta = 0.0;
    double K_quad = 0.0;
    double L_quad = 0.0;
    double rho = 0.0;
    double B = 0.0;
    double N = 0.0;
    double N0 = 0.0;       // +inf when it overflows binary64
    double N0_log10 = 0.0; // always finite companion
    double N1 = 0.0;
    double s0 = 0.0;
    double s1 = 0.0;

    bool base_solved = false;
    bool derived_solved = false;
};

// Default Bers constant for complexity xi; covers the extremal systole of
// the once-punctured torus with margin.
double default_eps_B(int xi);

// Default A = 2 w_1 + 4 (anchor length one).
double default_A();

// Largest eps such that w_eps > 2 b_1 = 2 coth(1/2).
double collar_growth_threshold();

// Solve eps_w by bisection (conditions 1, 2, 5, 6, 7 are monotone in
// eps_w), then set eps_h and L0 by the defining equalities. Throws
// infeasible_error naming the first failing condition when no eps_w down
// to machine epsilon satisfies the system.
ConstantsLedger solve_base_constants(double eps_B, double A, double M, int n0);

// C(n, L) = (6|chi|+1) n ceil(L / (2 w_{eps_h})) + 3|chi| + 1.
double corridor_threshold(int n, double L, int chi, double eps_h);

struct TrichotomyConstants {
    double L = 0.0;
    double delta = 0.0;
    double K = 0.0;
    double rho = 0.0;
};

// L = (4 n0 xi + 2) max{L_eps_w, L0}; delta = 2 pi |chi| / L;
// K = |chi| / sinh^2(delta/2); rho = 2 K L.
TrichotomyConstants trichotomy_rho(int chi, int xi, int n0, double L_eps_w, double L0);

// Fill B, N, N0, N1, s0, s1 on a base-solved ledger. chi and xi describe
// the reference surface.
void derived_thresholds(ConstantsLedger& ledger, int chi, int xi);

// Independent re-check of the eight base conditions from raw formulas.
std::vector<ConditionSlack> recheck_conditions(const ConstantsLedger& ledger);

bool all_ok(const std::vector<ConditionSlack>& slacks);

// Desk-scale working constants for the experiment suites.
struct WorkingConstants {
    double rho = 10.0;
    double B = 4.0;
    int n0 = 4;
    double L0 = 5.0;
    double eps_w = 0.5;
    double eps_h = 8.0;
    double eps0 = 0.25;
    double s0 = 1.0;
    double A = 0.0;    // filled from default_A()
    double K = 10.0;   // Lipschitz/retraction tolerance, reported not certified
    double D0 = 6.0;   // desk gate for the pants-segment sampler
};

WorkingConstants working_defaults();

// Versioned key=value serialization; doubles as hexfloats so reload is
// bit-exact.
std::string serialize(const ConstantsLedger& ledger);
ConstantsLedger parse_ledger(const std::string& text);

} // namespace stretchline::constants

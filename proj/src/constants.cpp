#include "stretchline/constants.hpp"
#include "stretchline/collar.hpp"
#include "stretchline/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace stretchline::constants {

using collar::collar_boundary_length;
using collar::collar_width;

namespace {

// The eight base conditions; equalities carry slack 0 when exact.
std::vector<ConditionSlack> base_conditions(double eps_B, double A, double M, int n0,
                                            double eps_w, double eps_h, double L0,
                                            double eps0) {
    const double w_B = collar_width(eps_B);
    const double b_B = collar_boundary_length(eps_B);
    const double w_w = collar_width(eps_w);
    std::vector<ConditionSlack> out;
    auto push = [&out](const std::string& name, double slack) {
        out.push_back({name, slack, slack >= 0.0});
    };
    push("(1) eps_w < min{1, 2 w_{eps_B}}", std::min(1.0, 2.0 * w_B) - eps_w);
    push("(2) eps_w within the collar-growth threshold", eps0 - eps_w);
    {
        const double rhs = eps_B + 4.0 * w_w + 2.0 * M;
        push("(3) eps_h = eps_B + 4 w_{eps_w} + 2M", eps_h == rhs ? 0.0 : -std::fabs(eps_h - rhs));
    }
    push("(4) L0 = 10 eps_h", L0 == 10.0 * eps_h ? 0.0 : -std::fabs(L0 - 10.0 * eps_h));
    push("(5) L0 >= w_{eps_B} + 6 b_{eps_B}", L0 - (w_B + 6.0 * b_B));
    push("(6) (1/eps_w) w_{eps_w} >= n0 ceil(L0+1) + 5 + A",
         w_w / eps_w - (n0 * std::ceil(L0 + 1.0) + 5.0 + A));
    {
        // compare in log space; exp(L0/6 - 1) can overflow
        const double lhs = std::log(std::sinh(1.0 + w_B)) + std::log(std::sinh(eps_B / 2.0));
        push("(7) sinh(1+w_{eps_B}) sinh(eps_B/2) <= exp(L0/6 - 1)", (L0 / 6.0 - 1.0) - lhs);
    }
    push("(8) n0 >= 8", static_cast<double>(n0) - 8.0);
    return out;
}

bool inequality_conditions_hold(const std::vector<ConditionSlack>& slacks) {
    // the bisection adjusts eps_w; equalities (3), (4) hold by construction
    return slacks[0].ok && slacks[1].ok && slacks[4].ok && slacks[5].ok && slacks[6].ok;
}

double log10_collar_width(double eps) {
    const double half = eps / 2.0;
    if (half > 350.0) return (std::log(2.0) - half) / std::log(10.0);
    return std::log10(collar_width(eps));
}

void append_kv(std::string& s, const char* key, double v) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s = %a\n", key, v);
    s += buf;
}

void append_kv(std::string& s, const char* key, int v) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s = %d\n", key, v);
    s += buf;
}

} // namespace

double default_eps_B(int xi) {
    if (xi < 1) throw domain_error("default_eps_B: xi must be >= 1");
    // 2 arcsinh(1) scaled with complexity; the factor keeps the extremal
    // once-punctured-torus systole 2 arccosh(3/2) strictly below eps_B.
    return 2.0 * std::asinh(1.0) * (1.0 + 0.25 * xi);
}

double default_A() {
    const double w1 = collar_width(1.0);
    return 2.0 * w1 + 4.0;
}

double collar_growth_threshold() {
    const double b1 = collar_boundary_length(1.0); // coth(1/2)
    // w_eps > 2 b1  <=>  sinh(eps/2) < 1/sinh(2 b1)
    return 2.0 * std::asinh(1.0 / std::sinh(2.0 * b1));
}

ConstantsLedger solve_base_constants(double eps_B, double A, double M, int n0) {
    if (!(eps_B >= 1.0)) throw domain_error("solve_base_constants: eps_B must be >= 1");
    if (!(A > 0.0) || !(M > 0.0)) throw domain_error("solve_base_constants: A, M must be positive");
    if (n0 < 8) throw infeasible_error("condition (8) n0 >= 8 fails");

    ConstantsLedger ledger;
    ledger.eps_B = eps_B;
    ledger.A = A;
    ledger.M = M;
    ledger.n0 = n0;
    ledger.eps0 = collar_growth_threshold();

    auto conditions_at = [&](double eps_w) {
        const double eps_h = eps_B + 4.0 * collar_width(eps_w) + 2.0 * M;
        const double L0 = 10.0 * eps_h;
        return base_conditions(eps_B, A, M, n0, eps_w, eps_h, L0, ledger.eps0);
    };

    // Feasibility is monotone: shrinking eps_w only helps. Find a feasible
    // point by repeated halving, then bisect toward the boundary and step
    // back to the midpoint of the feasible side.
    double hi = std::min({1.0, 2.0 * collar_width(eps_B), ledger.eps0}) * 0.999;
    double lo = hi;
    bool feasible = false;
    for (int i = 0; i < 80; ++i) {
        if (inequality_conditions_hold(conditions_at(lo))) { feasible = true; break; }
        lo *= 0.5;
    }
    if (!feasible) {
        auto slacks = conditions_at(lo);
        for (const auto& s : slacks)
            if (!s.ok) throw infeasible_error("no feasible eps_w: first failing " + s.name);
        throw infeasible_error("no feasible eps_w");
    }
    if (inequality_conditions_hold(conditions_at(hi))) {
        lo = hi;
    } else {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (inequality_conditions_hold(conditions_at(mid))) lo = mid; else hi = mid;
        }
    }
    // land strictly inside the feasible region
    ledger.eps_w = 0.5 * lo;
    ledger.eps_h = eps_B + 4.0 * collar_width(ledger.eps_w) + 2.0 * M;
    ledger.L0 = 10.0 * ledger.eps_h;
    ledger.base_solved = true;

    auto slacks = recheck_conditions(ledger);
    for (const auto& s : slacks)
        if (!s.ok) throw infeasible_error("solver produced infeasible ledger: " + s.name);
    return ledger;
}

double corridor_threshold(int n, double L, int chi, double eps_h) {
    if (n < 1) throw domain_error("corridor_threshold: n must be >= 1");
    if (!(L > 0.0)) throw domain_error("corridor_threshold: L must be positive");
    if (chi >= 0) throw domain_error("corridor_threshold: chi must be negative");
    const double a = std::fabs(static_cast<double>(chi));
    const double w = collar_width(eps_h);
    return (6.0 * a + 1.0) * n * std::ceil(L / (2.0 * w)) + 3.0 * a + 1.0;
}

TrichotomyConstants trichotomy_rho(int chi, int xi, int n0, double L_eps_w, double L0) {
    if (chi >= 0) throw domain_error("trichotomy_rho: chi must be negative");
    if (xi < 1) throw domain_error("trichotomy_rho: xi must be >= 1");
    TrichotomyConstants t;
    t.L = (4.0 * n0 * xi + 2.0) * std::max(L_eps_w, L0);
    const double a = std::fabs(static_cast<double>(chi));
    t.delta = 2.0 * M_PI * a / t.L;
    const double sh = std::sinh(t.delta / 2.0);
    t.K = a / (sh * sh);
    t.rho = 2.0 * t.K * t.L;
    return t;
}

void derived_thresholds(ConstantsLedger& ledger, int chi, int xi) {
    if (!ledger.base_solved) throw state_error("derived_thresholds: base system not solved");
    if (ledger.L_eps_w <= 0.0) {
        // working stand-in: 4 x a thick-part diameter estimate
        const double w_B = collar_width(ledger.eps_B);
        const double b_B = collar_boundary_length(ledger.eps_B);
        ledger.L_eps_w = 4.0 * 2.0 * (w_B + b_B);
    }
    ledger.C_corridor = corridor_threshold(ledger.n0, ledger.L0, chi, ledger.eps_h);
    const TrichotomyConstants t = trichotomy_rho(chi, xi, ledger.n0, ledger.L_eps_w, ledger.L0);
    ledger.delta = t.delta;
    ledger.K_quad = t.K;
    ledger.L_quad = t.L;
    ledger.rho = t.rho;

    const double w_h = collar_width(ledger.eps_h);
    const double b_B = collar_boundary_length(ledger.eps_B);
    const double D0_h = collar::pants_spacing_threshold(ledger.eps_h);
    ledger.s0 = std::max({std::log(ledger.eps_B / w_h), std::log(D0_h / w_h),
                          std::log(6.0 * b_B / w_h)});
    ledger.s1 = std::log(ledger.rho / (2.0 * w_h));

    const double logC = collar::log_cutoff(ledger.C_corridor);
    const double b1 = ledger.B_coef * logC;
    const double b2 = ledger.B_coef * std::max(ledger.s0, ledger.s1);
    const double b3 = ledger.B_coef *
        collar::log_cutoff(ledger.rho / (2.0 * collar_width(ledger.eps_B)));
    ledger.B = std::max({6.0 + 1e-9, b1, b2, b3});

    ledger.N = ledger.n0 * std::ceil(ledger.L0 / (2.0 * collar_width(ledger.eps_B))) +
               ledger.K_prop;
    ledger.N1 = 5.0 * ledger.N;

    // N0 = (eps_h / (2 w_rho)) * C; w_rho underflows for certified rho, so
    // keep a log10 companion alongside the (possibly infinite) linear value.
    ledger.N0_log10 = std::log10(ledger.eps_h / 2.0) - log10_collar_width(ledger.rho) +
                      std::log10(ledger.C_corridor);
    const double w_rho = collar_width(ledger.rho);
    ledger.N0 = (w_rho > 0.0) ? (ledger.eps_h / (2.0 * w_rho)) * ledger.C_corridor
                              : std::numeric_limits<double>::infinity();
    ledger.derived_solved = true;
}

std::vector<ConditionSlack> recheck_conditions(const ConstantsLedger& ledger) {
    return base_conditions(ledger.eps_B, ledger.A, ledger.M, ledger.n0,
                           ledger.eps_w, ledger.eps_h, ledger.L0, ledger.eps0);
}

bool all_ok(const std::vector<ConditionSlack>& slacks) {
    return std::all_of(slacks.begin(), slacks.end(),
                       [](const ConditionSlack& s) { return s.ok; });
}

WorkingConstants working_defaults() {
    WorkingConstants w;
    w.A = default_A();
    return w;
}

std::string serialize(const ConstantsLedger& l) {
    std::string s = "stretchline-ledger v1\n";
    append_kv(s, "eps_B", l.eps_B);
    append_kv(s, "A", l.A);
    append_kv(s, "M", l.M);
    append_kv(s, "n0", l.n0);
    append_kv(s, "eps_w", l.eps_w);
    append_kv(s, "eps_h", l.eps_h);
    append_kv(s, "L0", l.L0);
    append_kv(s, "eps0", l.eps0);
    append_kv(s, "L_eps_w", l.L_eps_w);
    append_kv(s, "c_mult", l.c_mult);
    append_kv(s, "c_add", l.c_add);
    append_kv(s, "B_coef", l.B_coef);
    append_kv(s, "K_prop", l.K_prop);
    append_kv(s, "C_corridor", l.C_corridor);
    append_kv(s, "delta", l.delta);
    append_kv(s, "K_quad", l.K_quad);
    append_kv(s, "L_quad", l.L_quad);
    append_kv(s, "rho", l.rho);
    append_kv(s, "B", l.B);
    append_kv(s, "N", l.N);
    append_kv(s, "N0", l.N0);
    append_kv(s, "N0_log10", l.N0_log10);
    append_kv(s, "N1", l.N1);
    append_kv(s, "s0", l.s0);
    append_kv(s, "s1", l.s1);
    append_kv(s, "base_solved", l.base_solved ? 1 : 0);
    append_kv(s, "derived_solved", l.derived_solved ? 1 : 0);
    return s;
}

ConstantsLedger parse_ledger(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    if (header != "stretchline-ledger v1")
        throw domain_error("parse_ledger: unknown header '" + header + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    auto d = [&kv](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw domain_error(std::string("parse_ledger: missing ") + key);
        return std::strtod(it->second.c_str(), nullptr);
    };
    ConstantsLedger l;
    l.eps_B = d("eps_B"); l.A = d("A"); l.M = d("M");
    l.n0 = static_cast<int>(std::strtol(kv.at("n0").c_str(), nullptr, 10));
    l.eps_w = d("eps_w"); l.eps_h = d("eps_h"); l.L0 = d("L0"); l.eps0 = d("eps0");
    l.L_eps_w = d("L_eps_w"); l.c_mult = d("c_mult"); l.c_add = d("c_add");
    l.B_coef = d("B_coef"); l.K_prop = d("K_prop");
    l.C_corridor = d("C_corridor"); l.delta = d("delta");
    l.K_quad = d("K_quad"); l.L_quad = d("L_quad");
    l.rho = d("rho"); l.B = d("B"); l.N = d("N");
    l.N0 = d("N0"); l.N0_log10 = d("N0_log10"); l.N1 = d("N1");
    l.s0 = d("s0"); l.s1 = d("s1");
    l.base_solved = d("base_solved") != 0.0;
    l.derived_solved = d("derived_solved") != 0.0;
    return l;
}

} // namespace stretchline::constants

#include "stretchline/report.hpp"
#include "stretchline/collar.hpp"
#include "stretchline/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace stretchline::report {

using nlohmann::ordered_json;

bool Report::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check& c) { return c.pass; }) &&
           violations.empty();
}

std::string Report::to_json() const {
    ordered_json j;
    j["schema_version"] = 1;
    j["suite"] = suite;
    j["seed"] = seed;
    j["tolerance"] = tolerance;
    j["regime"] = regime;
    j["all_pass"] = all_pass();
    j["checks"] = ordered_json::array();
    for (const Check& c : checks) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["count"] = c.count;
        cj["worst_slack"] = c.worst_slack;
        if (!c.note.empty()) cj["note"] = c.note;
        j["checks"].push_back(cj);
    }
    j["violations"] = violations;
    return j.dump(2) + "\n";
}

namespace {

std::string classify_string(const analysis::TrichotomyLabel& label) {
    std::string s;
    if (label.t1) s += "T1";
    if (label.t2) s += s.empty() ? "T2" : "+T2";
    if (label.t3) s += s.empty() ? "T3" : "+T3";
    if (s.empty()) s = "EMPTY";
    if (label.marking_base_flag) s += "*";
    return s;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.report.suite = "experiment";
    res.report.seed = cfg.seed;
    res.report.regime = cfg.regime;

    surface::MarkedSurface base =
        cfg.surface_path.empty()
            ? surface::build_surface(surface::IdealTriangulation::once_punctured_torus(),
                                     cfg.shears)
            : surface::load_surface_json(cfg.surface_path);

    analysis::Regime regime = analysis::working_regime();
    regime.step = cfg.step;
    regime.depth = cfg.depth;

    const surface::StretchPath path = surface::make_stretch_path(base, cfg.t0, cfg.t1);

    std::vector<surface::Slope> gammas = cfg.gammas;
    if (gammas.empty()) {
        const surface::Marking mk = surface::short_marking(base, cfg.depth);
        gammas.push_back(mk.base);
    }

    ordered_json jg = ordered_json::array();
    std::string csv = "# stretchline-series v1\n";
    csv += "t,curve,length,max_collar_arc,twist,classification\n";

    for (const surface::Slope& g : gammas) {
        const auto gamma = surface::CurveClass::from_slope(g);
        const analysis::ShadowTrack track = analysis::shadow_track(path, gamma, regime);
        const analysis::ActiveInterval interval =
            analysis::active_interval(path, gamma, regime, track);

        std::vector<surface::Slope> probes = cfg.probes;
        if (probes.empty()) {
            for (const surface::Slope& nb : surface::farey_neighbors(g, 2)) {
                probes.push_back(nb);
                if (probes.size() >= 4) break;
            }
        }
        const analysis::BalancedTimes bt = analysis::balanced_time_and_shadow(
            path, gamma, probes, regime, track, interval);
        const double kprime = analysis::quasigeodesic_constant(track.twist);

        long empty_labels = 0;
        for (size_t i = 0; i < track.times.size(); ++i) {
            const double t = track.times[i];
            const surface::MarkedSurface Xt = path.at(t);
            const analysis::TrichotomyLabel label =
                analysis::trichotomy_classify(Xt, gamma, regime);
            if (label.empty()) {
                ++empty_labels;
                res.report.violations.push_back("empty trichotomy label at t=" + fmt(t) +
                                                " gamma=" + surface::to_string(g));
            }
            const double len = surface::curve_length(Xt, gamma);
            const double arc = surface::collar_trace(Xt, gamma, std::nullopt).max_len;
            csv += fmt(t) + "," + surface::to_string(g) + "," + fmt(len) + "," + fmt(arc) +
                   "," + std::to_string(track.twist[i]) + "," + classify_string(label) +
                   "\n";
        }

        ordered_json jone;
        jone["gamma"] = surface::to_string(g);
        jone["interval"] = {{"c", interval.c},
                            {"d", interval.d},
                            {"step", interval.step},
                            {"nondegenerate", interval.nondegenerate},
                            {"left_diam", interval.left_diam},
                            {"right_diam", interval.right_diam},
                            {"boundary_short", interval.boundary_short_on_interval},
                            {"max_len_on_interval", interval.max_len_on_interval}};
        jone["quasigeodesic_kprime"] = kprime;
        jone["balanced"] = ordered_json::array();
        for (size_t i = 0; i < bt.probes.size(); ++i)
            jone["balanced"].push_back({{"probe", surface::to_string(bt.probes[i])},
                                        {"t", bt.t_balanced[i]}});
        jone["lipschitz_defect"] = bt.lipschitz_defect;
        jone["retraction_defect"] = bt.retraction_defect;
        jone["empty_labels"] = empty_labels;
        jg.push_back(jone);

        Check c;
        c.name = "trichotomy nonempty along gamma=" + surface::to_string(g);
        c.pass = empty_labels == 0;
        c.count = static_cast<long>(track.times.size());
        c.worst_slack = empty_labels == 0 ? 0.0 : -static_cast<double>(empty_labels);
        res.report.checks.push_back(c);

        Check cb;
        cb.name = "interval boundary length <= rho, gamma=" + surface::to_string(g);
        cb.pass = interval.boundary_short_on_interval;
        cb.count = 1;
        cb.worst_slack = regime.rho - interval.max_len_on_interval;
        res.report.checks.push_back(cb);
    }

    Check detail;
    detail.name = "gammas";
    detail.pass = true;
    detail.count = static_cast<long>(gammas.size());
    detail.note = jg.dump();
    res.report.checks.push_back(detail);

    res.csv = csv;
    return res;
}

} // namespace stretchline::report

#include "reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "gpvw/errors.hpp"

namespace gpvw::cli {

namespace {

constexpr double pi = std::numbers::pi;

json point_json(Point p) { return json::array({p.x, p.y}); }

std::vector<double> column(const std::vector<DecayRow>& rows, double DecayRow::*field) {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r.*field);
    return out;
}

/// Decay annuli start this far outside the outermost zero.
constexpr double decay_margin = 5.0;

double decay_inner_radius(const VortexSet& zeros) {
    double r = 0.0;
    for (const auto& v : zeros.entries) r = std::max(r, std::hypot(v.position.x, v.position.y));
    return zeros.entries.empty() ? 1.0 : r + decay_margin;
}

void add_decay_checks(Audit& a, const Field2D& u, const VortexSet& zeros) {
    const double inner = decay_inner_radius(zeros);
    if (inner >= 0.9 * u.grid().half_width) {
        a.checks.skip("decay_profile", "zeros too close to the boundary for decay annuli");
        return;
    }
    const auto rows = decay_profile(u, inner);
    a.measured["decay_profile"] = to_json(rows);
    a.checks.add("decay_deviation_no_growth", no_growth(column(rows, &DecayRow::deviation)),
                 column(rows, &DecayRow::deviation).back(), "last annulus <= 2 x median");
    a.checks.add("decay_gradient_no_growth", no_growth(column(rows, &DecayRow::gradient)),
                 column(rows, &DecayRow::gradient).back(), "last annulus <= 2 x median");
    a.checks.add("decay_modulus_no_growth", no_growth(column(rows, &DecayRow::modulus)),
                 column(rows, &DecayRow::modulus).back(), "last annulus <= 2 x median");
}

}  // namespace

json to_json(const VortexSet& vs) {
    json j;
    j["frame"] = vs.frame == Frame::physical ? "physical" : "rescaled";
    j["scale"] = vs.scale;
    j["zeros"] = json::array();
    for (const auto& v : vs.entries) {
        json z;
        z["position"] = point_json(v.position);
        z["degree"] = v.degree;
        z["accurate"] = v.accurate;
        j["zeros"].push_back(z);
    }
    return j;
}

json to_json(const EnergyParts& e) {
    json j;
    j["total"] = e.total;
    j["kinetic"] = e.kinetic;
    j["potential"] = e.potential;
    return j;
}

json to_json(const std::vector<DecayRow>& rows) {
    json j = json::array();
    for (const auto& r : rows) {
        json row;
        row["radius"] = r.radius;
        row["deviation"] = r.deviation;
        row["gradient"] = r.gradient;
        row["modulus"] = r.modulus;
        j.push_back(row);
    }
    return j;
}

json to_json(const std::vector<DecayNearVortexRow>& rows) {
    json j = json::array();
    for (const auto& r : rows) {
        json row;
        row["radius"] = r.radius;
        row["modulus"] = r.modulus;
        row["gradient"] = r.gradient;
        j.push_back(row);
    }
    return j;
}

json to_json(const EnergyPartition& part) {
    json j;
    j["disk_energies"] = part.disk_energies;
    j["exterior_energy"] = part.exterior_energy;
    j["exterior_potential"] = part.exterior_potential;
    j["total"] = part.total;
    return j;
}

json to_json(const SpeedBoundAudit& audit) {
    json j;
    j["speed_ok"] = audit.speed_ok;
    j["speed_slack"] = audit.speed_slack;
    j["linf_ok"] = audit.linf_ok;
    j["linf_slack"] = audit.linf_slack;
    return j;
}

json to_json(const ConcentrationReport& r) {
    json j;
    j["rescaled"] = to_json(r.rescaled);
    j["pc"] = r.pc;
    j["target_offset"] = r.target_offset;
    j["momentum_identity"] = r.momentum_identity;
    j["jacobian_defects"] = r.jacobian_defects;
    j["clearing_out_min"] = r.clearing_out_min;
    j["partition"] = to_json(r.partition);
    j["disk_lambda"] = r.disk_lambda;
    j["speed"] = to_json(r.speed);
    return j;
}

json to_json(const AlignmentResult& a) {
    json j;
    j["shift_x2"] = a.shift_x2;
    j["phase"] = a.phase;
    j["d0"] = a.d0;
    return j;
}

json to_json(const BranchTable& t) {
    json j = json::array();
    for (const auto& q : t.points) {
        json row;
        row["c"] = q.c;
        row["p"] = q.p;
        row["energy"] = q.energy;
        row["kinetic"] = q.kinetic;
        row["potential"] = q.potential;
        row["d"] = q.d;
        row["pohozaev_rel"] = q.pohozaev_rel;
        row["residual"] = q.residual;
        j.push_back(row);
    }
    return j;
}

json to_json(const SolverConfig& cfg, const GridSpec& grid) {
    json j;
    j["residual_tol"] = cfg.resolved_residual_tol(grid);
    j["max_newton_iterations"] = cfg.max_newton_iterations;
    j["krylov_tol"] = cfg.krylov_tol;
    j["krylov_restart"] = cfg.krylov_restart;
    j["krylov_max_iterations"] = cfg.krylov_max_iterations;
    j["symmetry_projection"] = cfg.symmetry_projection;
    j["far_field"] = cfg.far_field == FarFieldMode::matched ? "matched" : "unit";
    j["stagnation_window"] = cfg.stagnation_window;
    j["levenberg_shift"] = cfg.levenberg_shift;
    j["flow_tol"] = cfg.resolved_flow_tol(grid);
    j["flow_max_steps"] = cfg.flow_max_steps;
    j["flow_step"] = cfg.flow_step;
    j["momentum_correction_interval"] = cfg.momentum_correction_interval;
    j["momentum_drift_limit"] = cfg.momentum_drift_limit;
    return j;
}

json wave_scalars(const TravellingWave& tw) {
    json j;
    j["c"] = tw.c;
    j["p"] = tw.p;
    j["energy"] = to_json(tw.energy);
    j["residual"] = tw.residual;
    j["pohozaev_rel"] = tw.pohozaev;
    j["d"] = tw.d;
    j["max_modulus"] = tw.max_modulus;
    j["max_gradient"] = tw.max_gradient;
    j["newton_iterations"] = tw.newton_iterations;
    j["zeros"] = to_json(tw.zeros);
    if (tw.target_p > 0.0) {
        j["target_p"] = tw.target_p;
        j["flow_steps"] = tw.flow_steps;
        j["flow_multiplier"] = tw.flow_multiplier;
    }
    return j;
}

SolverConfig solver_from_json(const json& j) {
    SolverConfig cfg;
    if (j.is_null()) return cfg;
    if (!j.is_object()) throw UsageError("config key 'solver' must be an object");
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "residual_tol") cfg.residual_tol = v.get<double>();
            else if (key == "max_newton_iterations") cfg.max_newton_iterations = v.get<int>();
            else if (key == "krylov_tol") cfg.krylov_tol = v.get<double>();
            else if (key == "krylov_restart") cfg.krylov_restart = v.get<int>();
            else if (key == "krylov_max_iterations") cfg.krylov_max_iterations = v.get<int>();
            else if (key == "symmetry_projection") cfg.symmetry_projection = v.get<bool>();
            else if (key == "stagnation_window") cfg.stagnation_window = v.get<int>();
            else if (key == "levenberg_shift") cfg.levenberg_shift = v.get<double>();
            else if (key == "flow_tol") cfg.flow_tol = v.get<double>();
            else if (key == "flow_max_steps") cfg.flow_max_steps = v.get<int>();
            else if (key == "flow_step") cfg.flow_step = v.get<double>();
            else if (key == "momentum_correction_interval") cfg.momentum_correction_interval = v.get<int>();
            else if (key == "momentum_drift_limit") cfg.momentum_drift_limit = v.get<double>();
            else if (key == "far_field") {
                const auto mode = v.get<std::string>();
                if (mode == "matched") cfg.far_field = FarFieldMode::matched;
                else if (mode == "unit") cfg.far_field = FarFieldMode::unit;
                else throw UsageError("solver.far_field must be 'matched' or 'unit'");
            } else {
                throw UsageError("unknown config key 'solver." + key + "'");
            }
        } catch (const json::exception& e) {
            throw UsageError("config key 'solver." + key + "': " + e.what());
        }
    }
    return cfg;
}

void write_profile_csv(const std::filesystem::path& path, const VortexProfile& profile) {
    prepare_output(path);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "r,rho,drho\n";
    char buf[96];
    for (std::size_t k = 0; k < profile.r.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", profile.r[k], profile.rho[k], profile.drho[k]);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Audit verify_field(const Field2D& u, std::optional<double> c, const VerifyLimits& limits) {
    Audit a;
    const GridSpec& g = u.grid();
    const bool finite = u.all_finite();
    a.checks.add("finite", finite, finite, true);
    if (!finite) return a;

    if (c) {
        const double tol = limits.residual_tol > 0.0 ? limits.residual_tol : 1e-8 * std::sqrt(g.area());
        const double res = tw_residual(u, *c).norm;
        a.measured["residual"] = res;
        a.checks.add("residual", res <= tol, res, tol);
        const double poh = pohozaev_residual(u, *c);
        a.measured["pohozaev_rel"] = poh;
        a.checks.add("pohozaev", poh < limits.pohozaev, poh, limits.pohozaev);
    } else {
        a.checks.skip("residual", "speed unknown");
        a.checks.skip("pohozaev", "speed unknown");
    }

    const double maxmod = max_modulus(u);
    a.measured["max_modulus"] = maxmod;
    if (c) {
        const double bound = 1.0 + (*c) * (*c) / 4.0 + 1e-3;
        a.checks.add("linf_bound", maxmod <= bound, maxmod, bound);
    } else {
        a.checks.skip("linf_bound", "speed unknown");
    }
    const double maxgrad = max_gradient(u);
    a.measured["max_gradient"] = maxgrad;
    a.checks.add("gradient_bound", maxgrad <= limits.gradient_bound, maxgrad, limits.gradient_bound);

    const VortexSet zeros = find_zeros(u);
    a.measured["zeros"] = to_json(zeros);
    bool unit_degrees = zeros.total_degree() == 0;
    for (const auto& v : zeros.entries) unit_degrees = unit_degrees && std::abs(v.degree) == 1;
    a.checks.add("degrees", unit_degrees, static_cast<int>(zeros.size()), "degrees +-1 with total 0");
    if (c && *c > 0.0) {
        bool pair = true;
        try {
            require_two_vortices(zeros);
        } catch (const TopologyError&) {
            pair = false;
        }
        a.checks.add("vortex_pair", pair, static_cast<int>(zeros.size()), "+1 at x1 > 0 and -1 at x1 < 0");
    }

    const double even = even_defect_x1(u), conj = conj_symmetry_defect_x2(u);
    a.measured["even_defect_x1"] = even;
    a.measured["conj_defect_x2"] = conj;
    a.checks.add("even_x1", even < limits.symmetry, even, limits.symmetry);
    a.checks.add("conj_x2", conj < limits.symmetry, conj, limits.symmetry);

    add_decay_checks(a, u, zeros);
    return a;
}

Audit branch_checks(const BranchTable& t) {
    Audit a;
    a.measured["points"] = static_cast<int>(t.size());
    if (t.size() < 3) {
        a.checks.skip("branch", "needs at least 3 points");
        return a;
    }
    const auto ham = hamilton_residuals(t);
    a.measured["hamilton_residuals"] = ham;
    a.checks.add("hamilton", *std::max_element(ham.begin(), ham.end()) < 0.05, ham, "< 0.05 per interior point");

    const auto dp = dPdc_check(t);
    a.measured["dPdc_ratios"] = dp;
    const bool dp_ok = std::all_of(dp.begin(), dp.end(), [](double r) { return r >= 0.8 && r <= 1.25; });
    a.checks.add("dPdc", dp_ok, dp, "[0.8, 1.25]");

    const auto kin = kinetic_monotonicity(t);
    a.measured["kinetic_ratios"] = kin.ratios;
    a.checks.add("kinetic_decreasing", kin.strictly_decreasing, kin.strictly_decreasing, true);
    const bool kin_ok =
        std::all_of(kin.ratios.begin(), kin.ratios.end(), [](double r) { return r >= 0.7 && r <= 1.3; });
    a.checks.add("kinetic_ratio", kin_ok, kin.ratios, "[0.7, 1.3]");

    try {
        const SlopeFit fit = emin_slope_vs_logp(t);
        json f;
        f["slope"] = fit.slope;
        f["intercept"] = fit.intercept;
        f["rms_residual"] = fit.rms_residual;
        f["second_differences"] = fit.second_differences;
        f["concave"] = fit.concave;
        a.measured["emin_fit"] = f;
        const double rel = std::abs(fit.slope / (2.0 * pi) - 1.0);
        a.checks.add("emin_slope", rel < 0.1, fit.slope, "within 10% of 2 pi");
        a.checks.add("emin_concave", fit.concave, fit.second_differences, "all second differences < 0");
    } catch (const InputError& e) {
        a.checks.skip("emin_slope", e.what());
    }

    json action = json::array();
    bool argmax_ok = true;
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        const ActionProfile prof = action_along_branch(t, t.points[k].c);
        json row;
        row["c_star"] = t.points[k].c;
        row["values"] = prof.values;
        row["argmax"] = prof.argmax;
        row["nearest"] = prof.nearest;
        action.push_back(row);
        argmax_ok = argmax_ok && prof.argmax == prof.nearest;
    }
    a.measured["action"] = action;
    a.checks.add("mountain_pass_argmax", argmax_ok, argmax_ok, "argmax at the point nearest c_star");

    bool speed_ok = true;
    for (const auto& q : t.points) speed_ok = speed_ok && q.c <= 2.0 * q.energy / q.p;
    a.checks.add("speed_bound", speed_ok, speed_ok, "c <= 2E/p at every point");
    a.checks.add("monotone_in_c", monotone_in_c(t), monotone_in_c(t), "p and E strictly decreasing in c");
    return a;
}

Audit diagnose_checks(const TravellingWave& tw, const DiagnosticsOptions& opt) {
    Audit a;
    const ConcentrationReport r = concentration_report(tw, opt);
    a.measured["concentration"] = to_json(r);
    a.checks.add("rescaled_position", r.target_offset < 0.05, r.target_offset, 0.05);
    a.checks.add("momentum_identity", std::abs(r.momentum_identity - 1.0) < 0.1, r.momentum_identity,
                 "within 10% of 1");
    a.checks.add("clearing_out", r.clearing_out_min >= 0.9, r.clearing_out_min, 0.9);
    const double lambda = *std::max_element(r.disk_lambda.begin(), r.disk_lambda.end());
    a.checks.add("disk_energy", lambda <= 15.0, r.partition.disk_energies, "pi ln p - 15 per disk");
    const double jac = *std::max_element(r.jacobian_defects.begin(), r.jacobian_defects.end());
    a.checks.add("jacobian_concentration", jac < 0.15, r.jacobian_defects, 0.15);
    a.checks.add("speed_bound", r.speed.speed_ok, r.speed.speed_slack, "c <= 2E/p");
    a.checks.add("linf_bound", r.speed.linf_ok, r.speed.linf_slack, "max|u| <= 1 + c^2/4 + 1e-3");

    try {
        const auto near = modulus_decay_near_vortex(tw, opt.annuli);
        a.measured["decay_near_vortex"] = to_json(near);
        std::vector<double> first;
        for (const auto& row : near) first.push_back(row.modulus);
        a.checks.add("decay_near_vortex_bounded", !first.empty() && no_growth(first),
                     first.empty() ? 0.0 : first.back(), "last annulus <= 2 x median");
    } catch (const RangeError& e) {
        a.checks.skip("decay_near_vortex_bounded", e.what());
    }
    add_decay_checks(a, tw.field, tw.zeros);
    return a;
}

}  // namespace gpvw::cli

#include "ecdkit/truncate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace ecdkit {

namespace testhooks {
bool& bound30_sign_flip() {
    static bool flip = false;
    return flip;
}
}  // namespace testhooks

Dilation truncate_map(const Dilation& v, const EnergyObservable& g, double cutoff) {
    if (v.dim_in() != g.dim()) throw std::invalid_argument("truncate_map: dimension mismatch");
    return Dilation(v.v * g.spectral_projector(cutoff), v.env_dim);
}

std::pair<double, double> tail_norm_check(const Dilation& v, const EnergyObservable& g,
                                          double budget, double cutoff) {
    if (cutoff < budget)
        throw std::invalid_argument("tail_norm_check: cutoff below the energy budget");
    const CMat tail = v.v - v.v * g.spectral_projector(cutoff);
    const double lhs = e_norm(tail, g, budget).value;
    const double rhs = std::sqrt(budget / cutoff) * e_norm(v.v, g, cutoff).value;
    return {lhs, rhs};
}

StudyRow bound30_check(const Dilation& v, const EnergyObservable& g, double budget, double cutoff,
                       const AscentConfig& cfg) {
    if (cutoff < budget)
        throw std::invalid_argument("bound30_check: cutoff below the energy budget");
    StudyRow row;
    row.cutoff = cutoff;
    const Dilation vn = truncate_map(v, g, cutoff);
    const KrausMap phi = kraus_from_stinespring(v);
    const KrausMap phi_n = kraus_from_stinespring(vn);
    DistanceReport rep = ecd_distance(phi_n, phi, g, budget, cfg);
    row.lhs_estimate = rep.estimate;
    row.converged = rep.converged;
    row.enorm_v_at_cutoff = e_norm(v.v, g, cutoff).value;
    row.rhs_bound =
        2.0 * std::sqrt(budget / cutoff) * row.enorm_v_at_cutoff * e_norm(v.v, g, budget).value;
    if (testhooks::bound30_sign_flip()) row.rhs_bound = -row.rhs_bound;
    auto [tl, tr] = tail_norm_check(v, g, budget, cutoff);
    row.tail_lhs = tl;
    row.tail_rhs = tr;
    return row;
}

TruncationStudy run_truncation_study(const Dilation& v, const EnergyObservable& g, double budget,
                                     const std::vector<double>& schedule,
                                     const AscentConfig& cfg) {
    for (size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < budget)
            throw std::invalid_argument("run_truncation_study: cutoff below the energy budget");
        if (i > 0 && schedule[i] <= schedule[i - 1])
            throw std::invalid_argument("run_truncation_study: schedule not ascending");
    }
    TruncationStudy study{v, g, budget, schedule, {}};
    study.rows.resize(schedule.size());
#pragma omp parallel for schedule(dynamic) if (schedule.size() > 1)
    for (std::int64_t i = 0; i < std::int64_t(schedule.size()); ++i) {
        AscentConfig row_cfg = cfg;
        row_cfg.seed = cfg.seed + std::uint64_t(i);  // deterministic per row
        study.rows[i] = bound30_check(v, g, budget, schedule[i], row_cfg);
    }
    return study;
}

namespace {
std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}
}  // namespace

std::string study_csv(const TruncationStudy& study) {
    std::string out = "E_n,lhs_estimate,rhs_bound,tail_lhs,tail_rhs,enorm_V_at_En,converged\n";
    for (const StudyRow& r : study.rows) {
        out += fmt12(r.cutoff) + ',' + fmt12(r.lhs_estimate) + ',' + fmt12(r.rhs_bound) + ',' +
               fmt12(r.tail_lhs) + ',' + fmt12(r.tail_rhs) + ',' + fmt12(r.enorm_v_at_cutoff) +
               ',' + (r.converged ? "1" : "0") + '\n';
    }
    return out;
}

namespace {
ScalingProfile profile_from_rows(std::vector<GridPoint> rows) {
    ScalingProfile p;
    p.rows = std::move(rows);
    double peak = 0.0;
    for (const GridPoint& r : p.rows) peak = std::max(peak, r.value);
    for (const GridPoint& r : p.rows)
        if (r.value >= 0.99 * peak) p.knee = r.energy;
    return p;
}

void check_ascending(const std::vector<double>& grid) {
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= 0.0) throw std::invalid_argument("scaling_profile: grid must be positive");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::invalid_argument("scaling_profile: grid not ascending");
    }
}
}  // namespace

ScalingProfile scaling_profile(const CMat& a, const EnergyObservable& g,
                               const std::vector<double>& e_grid) {
    check_ascending(e_grid);
    return profile_from_rows(g_bound_profile(a, g, e_grid));
}

ScalingProfile scaling_profile(const KrausMap& phi, const EnergyObservable& g,
                               const std::vector<double>& e_grid) {
    check_ascending(e_grid);
    std::vector<GridPoint> rows;
    rows.reserve(e_grid.size());
    for (double e : e_grid) rows.push_back({e, ecd_norm_cp(phi, g, e).value / e});
    return profile_from_rows(std::move(rows));
}

std::string scaling_csv(const ScalingProfile& profile) {
    std::string out = "E,ratio\n";
    for (const GridPoint& r : profile.rows) out += fmt12(r.energy) + ',' + fmt12(r.value) + '\n';
    return out;
}

}  // namespace ecdkit

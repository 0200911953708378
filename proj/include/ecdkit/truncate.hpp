#pragma once

#include <string>
#include <vector>

#include "ecdkit/channel.hpp"
#include "ecdkit/distance.hpp"
#include "ecdkit/energy.hpp"
#include "ecdkit/enorm.hpp"

namespace ecdkit {

/// Dilation of the bounded approximant rho -> Tr_E V P_n rho P_n V*.
Dilation truncate_map(const Dilation& v, const EnergyObservable& g, double cutoff);

/// lhs = ||V - V P_n||_E, rhs = sqrt(E/E_n) ||V||_{E_n}; both exact.
std::pair<double, double> tail_norm_check(const Dilation& v, const EnergyObservable& g,
                                          double budget, double cutoff);

struct StudyRow {
    double cutoff = 0.0;        // E_n
    double lhs_estimate = 0.0;  // ascent lower bound on the distance Phi_n vs Phi
    double rhs_bound = 0.0;     // 2 sqrt(E/E_n) ||V||_{E_n} ||V||_E
    double tail_lhs = 0.0;
    double tail_rhs = 0.0;
    double enorm_v_at_cutoff = 0.0;
    bool converged = true;
};

/// One row of the truncation-error study; requires E_n >= E.
StudyRow bound30_check(const Dilation& v, const EnergyObservable& g, double budget, double cutoff,
                       const AscentConfig& cfg = {});

struct TruncationStudy {
    Dilation v;
    EnergyObservable g;
    double budget = 0.0;
    std::vector<double> schedule;  // ascending cutoffs, each >= budget
    std::vector<StudyRow> rows;
};

TruncationStudy run_truncation_study(const Dilation& v, const EnergyObservable& g, double budget,
                                     const std::vector<double>& schedule,
                                     const AscentConfig& cfg = {});

/// CSV with header E_n,lhs_estimate,rhs_bound,tail_lhs,tail_rhs,enorm_V_at_En,converged
/// and 12 significant digits per value.
std::string study_csv(const TruncationStudy& study);

struct ScalingProfile {
    std::vector<GridPoint> rows;  // (E, ratio)
    double knee = 0.0;            // largest E with ratio >= 0.99 * max ratio
};

/// Ratio ||A||_E / sqrt(E) over an ascending grid (sub-sqrt growth signature).
ScalingProfile scaling_profile(const CMat& a, const EnergyObservable& g,
                               const std::vector<double>& e_grid);

/// Ratio ||Phi||_{diamond,E} / E for a CP map (sub-linear growth signature).
ScalingProfile scaling_profile(const KrausMap& phi, const EnergyObservable& g,
                               const std::vector<double>& e_grid);

std::string scaling_csv(const ScalingProfile& profile);

namespace testhooks {
/// Test-only sabotage switch: flips the sign of the bound-30 right-hand side
/// so the verification suite can prove it would catch a broken bound.
bool& bound30_sign_flip();
}  // namespace testhooks

}  // namespace ecdkit

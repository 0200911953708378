#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecdkit/channel.hpp"
#include "ecdkit/energy.hpp"
#include "ecdkit/enorm.hpp"

namespace ecdkit {

/// F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1^2.
double fidelity(const CMat& rho, const CMat& sigma);

/// beta(rho, sigma) = sqrt(||rho||_1 + ||sigma||_1 - 2 sqrt(F)).
double bures(const CMat& rho, const CMat& sigma);

struct AscentConfig {
    int restarts = 32;
    int max_iter = 500;
    double tol = 1e-11;
    std::uint64_t seed = 1;
    double match_tol = 1e-3;
    int minimax_iter = 20000;
    double minimax_gap = 2.5e-5;  // certified upper-lower stopping width
};

struct DistanceReport {
    double estimate = 0.0;
    std::vector<cplx> witness;  // pure state on A (x) R, d_R = d_A
    double lower = 0.0;
    double upper = 0.0;
    std::string upper_provenance;
    int restarts = 0;
    int iterations = 0;
    bool converged = true;
};

/// Exact ECD norm of a CP map: sup Tr(W rho) with W = sum V_k* V_k over the
/// energy-constrained feasible set (value is the norm, not its square root).
ENormCertificate ecd_norm_cp(const KrausMap& phi, const EnergyObservable& g, double budget);

/// ||(Phi - Psi) (x) Id_R (psi psi*)||_1 for a unit vector psi on A (x) R,
/// evaluated through the low-rank Gram form of the output operator.
double ecd_pair_objective(const KrausMap& phi, const KrausMap& psi, const std::vector<cplx>& v,
                          int d_r);

/// Projected-ascent estimate of D_E(Phi, Psi) with certified lower bound and
/// an inequality-chain upper bound.
DistanceReport ecd_distance(const KrausMap& phi, const KrausMap& psi, const EnergyObservable& g,
                            double budget, const AscentConfig& cfg = {});

/// beta(Phi (x) Id (omega), Psi (x) Id (omega)) at a pure omega = psi psi*.
double bures_pair_objective(const Dilation& vphi, const Dilation& vpsi, const std::vector<cplx>& v,
                            int d_r);

/// Ascent estimate of the energy-constrained Bures distance over constrained
/// pure inputs, evaluated through the fidelity routine.
DistanceReport bures_e_distance(const KrausMap& phi, const KrausMap& psi,
                                const EnergyObservable& g, double budget,
                                const AscentConfig& cfg = {});

/// lhs = D_E estimate, rhs = ||V_Phi - V_Psi||_E (||V_Phi||_E + ||V_Psi||_E).
std::pair<double, double> dilation_difference_bound(const Dilation& vphi, const Dilation& vpsi,
                                                    const EnergyObservable& g, double budget,
                                                    const AscentConfig& cfg = {});

struct ContractionMinimax {
    CMat contraction;       // d_E x d_E contraction, the best C found
    double achieved = 0.0;  // ||Vtilde_Phi - Vtilde_Psi^C||_E at the best C
    double lower = 0.0;     // certified lower bound on the saddle value
    CMat rho_witness;       // constrained state attaining the sup at the best C
    CMat rho_lower;         // constrained state certifying the lower bound
    int iterations = 0;
    bool converged = true;
};

/// Saddle solver for inf_C sup_rho of the doubled-dilation difference norm:
/// an averaged best-response warmup followed by Polyak subgradient descent on
/// the convex function h(C) = sup_rho Tr(W_C rho), with the target taken from
/// the concave dual f(rho) = Tr((W_Phi+W_Psi) rho) - 2 ||Tr_B(V_Phi rho V_Psi*)||_1.
/// achieved upper-bounds beta_E, lower certifies it from below.
ContractionMinimax contraction_minimax(const Dilation& vphi, const Dilation& vpsi,
                                       const EnergyObservable& g, double budget,
                                       const AscentConfig& cfg = {});

/// Doubled-environment operators Vtilde_Phi and Vtilde_Psi^C (contraction C on
/// the environment); rows ordered b * (2 d_E) + e.
std::pair<CMat, CMat> doubled_dilation_pair(const Dilation& vphi, const Dilation& vpsi,
                                            const CMat& contraction);

struct CommonDilationResult {
    CMat contraction;
    double achieved = 0.0;
    double beta_reference = 0.0;
    bool converged = true;
    bool matched = true;  // |achieved - beta_reference| <= match_tol
};

CommonDilationResult common_dilation_optimize(const Dilation& vphi, const Dilation& vpsi,
                                              const EnergyObservable& g, double budget,
                                              const AscentConfig& cfg = {});

struct KswReport {
    double lower_ratio = 0.0;    // D / (sqrt||Phi|| + sqrt||Psi||)
    double inf_dilation = 0.0;   // min over common dilations (contraction search)
    double bures_distance = 0.0;
    double sqrt_distance = 0.0;  // sqrt(D)
    double ecd_distance_value = 0.0;
    bool ordering_ok = true;
    double worst_slack = 0.0;  // most negative margin in the chain
};

KswReport ksw_chain(const KrausMap& phi, const KrausMap& psi, const EnergyObservable& g,
                    double budget, const AscentConfig& cfg = {}, double slack = 1e-4);

struct ContinuityCheckReport {
    int trials = 0;
    int violations = 0;
    double max_ratio = 0.0;  // max lhs/rhs over trials (rhs > 0)
};

/// Samples pairs omega_1, omega_2 with ||omega_1 - omega_2||_1 <= eps and
/// checks ||Phi~(omega_1) - Phi~(omega_2)||_1 <= 2 sqrt(eps' ||Phi||_E ||Phi||_{4E/eps'}).
ContinuityCheckReport continuity_bound_check(const KrausMap& phi, const EnergyObservable& g,
                                             double budget, double eps, int trials,
                                             std::uint64_t seed);

}  // namespace ecdkit

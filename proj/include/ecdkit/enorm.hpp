#pragma once

#include <vector>

#include "ecdkit/energy.hpp"
#include "ecdkit/matcore.hpp"

namespace ecdkit {

/// Solution of sup{ Tr(W rho) : rho >= 0, Tr rho <= 1, Tr(G rho) <= E } for
/// Hermitian PSD W, obtained from the dual min_{mu>=0} [lmax(W - mu G)]_+ + mu E.
/// The primal witness has rank <= 2 (at most two constraints bind).
struct SupTraceResult {
    double value = 0.0;   // the supremum (= dual optimum)
    double mu = 0.0;      // dual multiplier
    double primal = 0.0;  // Tr(W rho) at the recovered witness
    double gap = 0.0;     // |value - primal|
    CMat rho;             // witness, rank <= 2
};

SupTraceResult sup_trace_constrained(const CMat& w, const EnergyObservable& g, double budget);

/// Operator E-norm certificate: value = ||A||_E, witness state, dual data.
struct ENormCertificate {
    double value = 0.0;
    double mu = 0.0;
    double dual_value = 0.0;  // dual bound on value^2
    double gap = 0.0;         // primal/dual gap on the squared scale
    CMat primal_state;        // rank <= 2 density operator achieving value^2
};

/// ||A||_E = sup{ sqrt(Tr A rho A*) : Tr rho <= 1, Tr G rho <= E }, exact via
/// the Lagrangian dual on W = A*A.
ENormCertificate e_norm(const CMat& a, const EnergyObservable& g, double budget);

/// Graded norm |||A|||_E: largest singular value of A (I + G/E)^{-1/2}.
double e_norm_graded(const CMat& a, const EnergyObservable& g, double budget);

struct GridPoint {
    double energy;
    double value;
};

struct TransformResult {
    double value;
    double t_opt;
};

/// |||A|||_E = sup_{t>0} ||A||_{tE} / sqrt(1+t), discretized over the grid's
/// t-range. The grid holds (E', ||A||_{E'}) rows covering [1e-3*E, 1e3*E].
TransformResult transform_graded_from_enorm(const std::vector<GridPoint>& grid, double budget);

/// ||A||_E = inf_{t>0} |||A|||_{tE} * sqrt(1+1/t), same discretization.
TransformResult transform_enorm_from_graded(const std::vector<GridPoint>& grid, double budget);

/// Rows (E, ||A||_E / sqrt(E)) over an ascending grid; the running infimum
/// estimates the sqrt(G)-bound of A.
std::vector<GridPoint> g_bound_profile(const CMat& a, const EnergyObservable& g,
                                       const std::vector<double>& e_grid);

/// Continuity modulus f_A(E, eps) = eps * ||A||_{4E/eps^2}.
double modulus_f(const CMat& a, const EnergyObservable& g, double budget, double eps);

/// lhs = ||A rho B*||_1, rhs = ||A||_{E_rho} ||B||_{E_rho} with E_rho = Tr(G rho).
std::pair<double, double> sandwich_product_bound(const CMat& a, const CMat& b,
                                                 const DensityOperator& rho,
                                                 const EnergyObservable& g);

/// Log-spaced helper grid for the Eq.-style transforms.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace ecdkit

#pragma once

#include <optional>
#include <random>
#include <vector>

#include "ecdkit/matcore.hpp"

namespace ecdkit {

using Rng = std::mt19937_64;

struct KrausMap;  // channel.hpp

/// Discrete energy observable stored in its own eigenbasis: a nondecreasing
/// list of nonnegative levels, one per basis vector of the truncated space.
struct EnergyObservable {
    std::vector<double> levels;
    bool grounded = false;

    EnergyObservable() = default;
    EnergyObservable(std::vector<double> lv, bool gr) : levels(std::move(lv)), grounded(gr) {
        validate();
    }

    /// The number operator diag(0, 1, ..., d-1).
    static EnergyObservable number_op(int d);

    int dim() const { return int(levels.size()); }
    double max_level() const { return levels.back(); }
    void validate() const;

    CMat matrix() const { return CMat::diag(levels); }

    /// Diagonal 0/1 projector selecting levels in the closed interval [0, cutoff].
    CMat spectral_projector(double cutoff) const;

    /// G tensor I_dR as an observable on the product space (factor A slow).
    EnergyObservable tensor_identity(int d_r) const;
};

/// Positive trace-class matrix; trace in (0, 1 + 1e-12].
class DensityOperator {
public:
    explicit DensityOperator(CMat m);

    const CMat& mat() const { return mat_; }
    int dim() const { return mat_.rows(); }
    double trace() const { return tr_; }
    double energy(const EnergyObservable& g) const;
    bool in_energy_set(const EnergyObservable& g, double budget) const {
        return energy(g) <= budget + 1e-9 && tr_ <= 1.0 + 1e-12;
    }

private:
    CMat mat_;
    double tr_;
};

/// <psi| diag(levels) |psi> for a (not necessarily unit) vector.
double vector_energy(const std::vector<cplx>& psi, const EnergyObservable& g);
double energy_of(const DensityOperator& rho, const EnergyObservable& g);

/// Haar-random unit vector.
std::vector<cplx> haar_vector(int d, Rng& rng);

/// Rescales |psi_k| by exp(-s*E_k) and renormalizes, with s chosen by
/// bisection so the energy hits `target` (clamped to the attainable range).
std::vector<cplx> tilt_to_energy(std::vector<cplx> psi, const EnergyObservable& g, double target);

/// Normalizes the vector and, when its energy exceeds the budget, tilts it
/// back onto the boundary of the energy set (phases preserved).
std::vector<cplx> retract_constrained(std::vector<cplx> v, const EnergyObservable& g,
                                      double budget);

enum class SampleMode { Pure, Mixed };

/// Random state with Tr(G rho) <= E, Tr rho = 1. Roughly 30% of draws
/// saturate the energy budget. Deterministic given the rng state.
DensityOperator sample_constrained(const EnergyObservable& g, double budget, SampleMode mode,
                                   Rng& rng);

/// Constrained random pure-state vector (the rank-one case of the above).
std::vector<cplx> sample_constrained_vector(const EnergyObservable& g, double budget, Rng& rng);

/// The energy-cutoff channel P rho P + Tr((I-P) rho) |tau_0><tau_0|.
KrausMap pinch_channel(const EnergyObservable& g, double cutoff);

/// lhs = ||omega - (Pi_n (x) Id_R)(omega)||_1 on A(x)R, rhs = 4 sqrt(E/E_n).
std::pair<double, double> pinch_deviation(const DensityOperator& omega, const EnergyObservable& g,
                                          double budget, double cutoff);

}  // namespace ecdkit

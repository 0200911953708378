#pragma once

#include <cstdint>
#include <vector>

#include "ecdkit/energy.hpp"

namespace ecdkit {

struct SearchResult {
    std::vector<cplx> best;
    double value = 0.0;
    std::int64_t evals = 0;
};

/// Derivative-free maximization of a function of constrained unit vectors:
/// a batch of global draws followed by rounds of shrinking-radius Gaussian
/// perturbations around the incumbent. Deterministic given the rng state.
/// Intentionally independent of the dual/ascent solvers so it can serve as
/// a cross-check oracle for them.
template <class F>
SearchResult refine_max(F&& objective, const EnergyObservable& g, double budget,
                        std::int64_t global_samples, int local_rounds,
                        std::int64_t batch_per_round, Rng& rng) {
    SearchResult out;
    std::normal_distribution<double> n(0.0, 1.0);
    auto consider = [&](std::vector<cplx> v) {
        const double val = objective(v);
        ++out.evals;
        if (val > out.value || out.best.empty()) {
            out.value = val;
            out.best = std::move(v);
        }
    };
    for (std::int64_t i = 0; i < global_samples; ++i)
        consider(sample_constrained_vector(g, budget, rng));
    double radius = 0.5;
    for (int round = 0; round < local_rounds; ++round) {
        for (std::int64_t i = 0; i < batch_per_round; ++i) {
            std::vector<cplx> v = out.best;
            for (cplx& z : v) z += radius * cplx(n(rng), n(rng));
            consider(retract_constrained(std::move(v), g, budget));
        }
        radius *= 0.5;
    }
    return out;
}

}  // namespace ecdkit

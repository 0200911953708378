#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ecdkit/channel.hpp"
#include "ecdkit/energy.hpp"
#include "test_util.hpp"

using namespace ecdkit;
using testutil::frob_dist;
using testutil::random_observable;

TEST_CASE("spectral_projector: thresholds, closed interval, commutation") {
    const EnergyObservable g({0.0, 1.0, 2.0, 3.0}, true);
    CHECK(frob_dist(g.spectral_projector(1.5), CMat::diag({1, 1, 0, 0})) == 0.0);
    CHECK(frob_dist(g.spectral_projector(3.0), CMat::identity(4)) == 0.0);
    CHECK(frob_dist(g.spectral_projector(5.0), CMat::identity(4)) == 0.0);
    // Cutoff exactly at a level includes that level: closed interval [0, E_n].
    CHECK(frob_dist(g.spectral_projector(2.0), CMat::diag({1, 1, 1, 0})) == 0.0);
    // Idempotent and commuting with G.
    const CMat p = g.spectral_projector(1.0);
    CHECK(frob_dist(p * p, p) == 0.0);
    CHECK(frob_dist(p * g.matrix(), g.matrix() * p) == 0.0);
}

TEST_CASE("energy_of: basis states and hand-summed mixtures") {
    const EnergyObservable g({0.0, 1.0, 2.0, 3.0}, true);
    for (int k = 0; k < 4; ++k) {
        CMat e(4, 4);
        e(k, k) = 1.0;
        CHECK(DensityOperator(e).energy(g) == doctest::Approx(double(k)).epsilon(1e-14));
    }
    CMat mix(4, 4);
    mix(0, 0) = mix(2, 2) = 0.5;  // equal mixture of tau_0 and tau_2
    CHECK(DensityOperator(mix).energy(g) == doctest::Approx(1.0).epsilon(1e-14));

    std::vector<cplx> psi{cplx(std::sqrt(0.5)), 0.0, 0.0, cplx(std::sqrt(0.5))};
    CHECK(vector_energy(psi, g) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("tilt_to_energy and retract_constrained enforce the budget") {
    Rng rng(31);
    const EnergyObservable g({0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, true);
    for (int t = 0; t < 50; ++t) {
        std::vector<cplx> v = haar_vector(6, rng);
        const std::vector<cplx> w = tilt_to_energy(v, g, 1.3);
        double n2 = 0.0;
        for (const cplx& z : w) n2 += std::norm(z);
        CHECK(n2 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(vector_energy(w, g) == doctest::Approx(1.3).epsilon(1e-6));

        std::vector<cplx> r = v;
        for (cplx& z : r) z *= 3.0;
        r = retract_constrained(std::move(r), g, 0.7);
        n2 = 0.0;
        for (const cplx& z : r) n2 += std::norm(z);
        CHECK(n2 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(vector_energy(r, g) <= 0.7 + 1e-9);
    }
}

TEST_CASE("sample_constrained: membership, boundary fraction, determinism") {
    const EnergyObservable g({0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, true);
    const double budget = 2.0;
    int boundary = 0;
    Rng rng(32);
    for (int t = 0; t < 1000; ++t) {
        const SampleMode mode = (t % 2 == 0) ? SampleMode::Pure : SampleMode::Mixed;
        const DensityOperator rho = sample_constrained(g, budget, mode, rng);
        CHECK(rho.in_energy_set(g, budget));
        CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-10));
        if (rho.energy(g) >= budget - 1e-6) ++boundary;
        if (mode == SampleMode::Pure) {
            // Rank one: ||rho||_F = Tr rho.
            CHECK(rho.mat().norm_fro() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    CHECK(boundary >= 250);

    // E = 0 with a grounded observable leaves only the ground state.
    Rng rng0(33);
    const DensityOperator ground = sample_constrained(g, 0.0, SampleMode::Pure, rng0);
    CMat tau0(6, 6);
    tau0(0, 0) = 1.0;
    CHECK(frob_dist(ground.mat(), tau0) < 1e-6);

    // Deterministic given the rng state.
    Rng a(99), b(99);
    const DensityOperator ra = sample_constrained(g, budget, SampleMode::Mixed, a);
    const DensityOperator rb = sample_constrained(g, budget, SampleMode::Mixed, b);
    CHECK(frob_dist(ra.mat(), rb.mat()) == 0.0);
}

TEST_CASE("pinch_channel: closed forms and the entrywise formula") {
    const EnergyObservable g({0.0, 1.0, 2.0, 3.0}, true);

    // Cutoff above the top level: identity channel.
    Rng rng(34);
    const KrausMap full = pinch_channel(g, 5.0);
    const CMat rho = testutil::random_density(4, rng);
    CHECK(frob_dist(apply(full, rho), rho) < 1e-13);

    // Basis state above the cutoff collapses to the ground state.
    const KrausMap pin = pinch_channel(g, 1.0);
    CMat tau3(4, 4);
    tau3(3, 3) = 1.0;
    CMat tau0(4, 4);
    tau0(0, 0) = 1.0;
    CHECK(frob_dist(apply(pin, tau3), tau0) < 1e-14);

    // Entrywise: P rho P + (rho_22 + rho_33) |tau_0><tau_0|.
    for (int t = 0; t < 20; ++t) {
        const CMat r = testutil::random_density(4, rng);
        const CMat p = g.spectral_projector(1.0);
        CMat expect = p * r * p;
        expect(0, 0) += r(2, 2) + r(3, 3);
        CHECK(frob_dist(apply(pin, r), expect) < 1e-13);
        // Trace preserved, output energy within the cutoff.
        CHECK(std::abs(apply(pin, r).trace() - r.trace()) < 1e-13);
        CHECK(DensityOperator(apply(pin, r)).energy(g) <= 1.0 + 1e-12);
    }

    // Kraus completeness: sum K* K = I within 1e-12.
    CHECK(frob_dist(pin.gram(), CMat::identity(4)) < 1e-12);
    CHECK(pin.is_channel());
}

TEST_CASE("pinch_channel caps output energy for random observables") {
    Rng rng(35);
    for (int t = 0; t < 20; ++t) {
        const EnergyObservable g = random_observable(6, rng);
        const double cutoff = g.levels[3];
        const KrausMap pin = pinch_channel(g, cutoff);
        CHECK(frob_dist(pin.gram(), CMat::identity(6)) < 1e-12);
        const CMat rho = testutil::random_density(6, rng);
        CHECK(DensityOperator(apply(pin, rho)).energy(g) <= cutoff + 1e-9);
    }
}

TEST_CASE("pinch_deviation: trivial zeros and the 4 sqrt(E/E_n) contract") {
    const EnergyObservable g({0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, true);

    // Support entirely below the cutoff: lhs = 0.
    Rng rng(36);
    {
        const EnergyObservable gg = g.tensor_identity(2);
        std::vector<cplx> low = sample_constrained_vector(gg, 1.0, rng);
        // Keep only amplitudes with A-level <= 2 (cutoff 2.0).
        for (size_t i = 0; i < low.size(); ++i)
            if (g.levels[i / 2] > 2.0) low[i] = 0.0;
        CMat m(12, 12);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j) m(i, j) = low[size_t(i)] * std::conj(low[size_t(j)]);
        const double tr = m.trace().real();
        REQUIRE(tr > 0.1);
        m *= cplx(1.0 / tr);
        const auto [lhs, rhs] = pinch_deviation(DensityOperator(m), g, 2.0, 2.0);
        CHECK(lhs < 1e-12);
        CHECK(rhs == doctest::Approx(4.0).epsilon(1e-12));
    }

    // Cutoff beyond the top level: lhs = 0, rhs small for large E_n.
    {
        const EnergyObservable gg = g.tensor_identity(2);
        Rng r2(37);
        const DensityOperator omega = sample_constrained(gg, 1.5, SampleMode::Mixed, r2);
        const auto [lhs, rhs] = pinch_deviation(omega, g, 1.5, 500.0);
        CHECK(lhs < 1e-10);
        CHECK(rhs == doctest::Approx(4.0 * std::sqrt(1.5 / 500.0)).epsilon(1e-12));
    }

    // 200 random constrained omega at d_A = d_R = 6: lhs <= rhs always.
    const EnergyObservable g6 = random_observable(6, rng);
    const EnergyObservable gg6 = g6.tensor_identity(6);
    const double budget = 0.6 * g6.max_level();
    for (int t = 0; t < 200; ++t) {
        const DensityOperator omega = sample_constrained(gg6, budget, SampleMode::Mixed, rng);
        const double cutoff = budget + (g6.max_level() - budget) * (t % 7 + 1) / 8.0;
        const auto [lhs, rhs] = pinch_deviation(omega, g6, budget, cutoff);
        CHECK(lhs <= rhs + 1e-9);
    }
}

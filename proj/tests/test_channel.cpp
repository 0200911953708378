#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ecdkit/channel.hpp"
#include "ecdkit/enorm.hpp"
#include "test_util.hpp"

using namespace ecdkit;
using testutil::frob_dist;
using testutil::random_cmat;
using testutil::random_channel;
using testutil::random_cp;
using testutil::random_density;
using testutil::random_observable;
using testutil::random_unitary;

namespace {

KrausMap dephasing_qubit() {
    const double r = std::sqrt(0.5);
    CMat k0 = CMat::identity(2);
    k0 *= cplx(r);
    CMat k1 = CMat::diag({1.0, -1.0});
    k1 *= cplx(r);
    return KrausMap({k0, k1}, MapKind::Channel);
}

}  // namespace

TEST_CASE("apply: identity, depolarize-to-ground, dephasing") {
    Rng rng(51);
    const CMat rho = random_density(3, rng);
    const KrausMap id({CMat::identity(3)}, MapKind::Channel);
    CHECK(frob_dist(apply(id, rho), rho) == 0.0);

    std::vector<CMat> dep_ops;
    for (int k = 0; k < 3; ++k) {
        CMat op(3, 3);
        op(0, k) = 1.0;
        dep_ops.push_back(op);
    }
    const KrausMap dep(dep_ops, MapKind::Channel);
    CMat expect(3, 3);
    expect(0, 0) = rho.trace();
    CHECK(frob_dist(apply(dep, rho), expect) < 1e-14);

    const CMat q = random_density(2, rng);
    const CMat out = apply(dephasing_qubit(), q);
    CHECK(std::abs(out(0, 1)) < 1e-15);
    CHECK(std::abs(out(1, 0)) < 1e-15);
    CHECK(std::abs(out(0, 0) - q(0, 0)) < 1e-15);
    CHECK(std::abs(out(1, 1) - q(1, 1)) < 1e-15);
}

TEST_CASE("apply_dilation: trivial environment, round trip, trace identity") {
    Rng rng(52);
    const CMat v = random_cmat(3, 3, rng);
    const Dilation triv(v, 1);
    const CMat rho = random_density(3, rng);
    CHECK(frob_dist(apply_dilation(triv, rho), v * rho * v.adjoint()) < 1e-13);

    const KrausMap phi = random_cp(3, 4, 3, rng);
    const Dilation dil = stinespring_from_kraus(phi);
    CHECK(dil.env_dim == 3);
    for (int t = 0; t < 20; ++t) {
        const CMat r = random_density(3, rng);
        CHECK(frob_dist(apply_dilation(dil, r), apply(phi, r)) < 1e-12);
    }

    // Tr Phi(rho) = ||V phi||^2 on pure rho.
    const std::vector<cplx> psi = haar_vector(3, rng);
    CMat pure(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) pure(i, j) = psi[size_t(i)] * std::conj(psi[size_t(j)]);
    const std::vector<cplx> vpsi = dil.v * psi;
    double n2 = 0.0;
    for (const cplx& z : vpsi) n2 += std::norm(z);
    CHECK(apply_dilation(dil, pure).trace().real() == doctest::Approx(n2).epsilon(1e-12));

    // Isometric V preserves trace on pure inputs.
    const KrausMap ch = random_channel(3, 3, 2, rng);
    const Dilation iso = stinespring_from_kraus(ch);
    CHECK(iso.is_isometry());
    CHECK(apply_dilation(iso, pure).trace().real() == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("stinespring_from_kraus: single op, dephasing isometry, random agreement") {
    Rng rng(53);
    const CMat v1 = random_cmat(4, 3, rng);
    const Dilation single = stinespring_from_kraus(KrausMap({v1}));
    CHECK(single.env_dim == 1);
    CHECK(frob_dist(single.v, v1) == 0.0);

    const Dilation deph = stinespring_from_kraus(dephasing_qubit());
    CHECK(frob_dist(deph.v.adjoint() * deph.v, CMat::identity(2)) < 1e-14);

    const KrausMap phi = random_cp(4, 3, 4, rng);
    const Dilation dil = stinespring_from_kraus(phi);
    for (int t = 0; t < 50; ++t) {
        const CMat rho = random_density(4, rng);
        CHECK(frob_dist(apply_dilation(dil, rho), apply(phi, rho)) < 1e-12);
    }
}

TEST_CASE("kraus_from_stinespring: exact round trip and basis recombination") {
    Rng rng(54);
    const KrausMap phi = random_cp(3, 4, 3, rng);
    const KrausMap back = kraus_from_stinespring(stinespring_from_kraus(phi));
    REQUIRE(back.ops.size() == phi.ops.size());
    for (size_t k = 0; k < phi.ops.size(); ++k) CHECK(frob_dist(back.ops[k], phi.ops[k]) == 0.0);

    // A rotated environment basis gives a different Kraus set but the same map.
    const Dilation dil = stinespring_from_kraus(phi);
    const CMat basis = random_unitary(dil.env_dim, rng);
    const KrausMap rotated = kraus_from_stinespring(dil, basis);
    bool all_same = true;
    for (size_t k = 0; k < phi.ops.size(); ++k)
        if (frob_dist(rotated.ops[k], phi.ops[k]) > 1e-9) all_same = false;
    CHECK_FALSE(all_same);
    for (int t = 0; t < 20; ++t) {
        const CMat rho = random_density(3, rng);
        CHECK(frob_dist(apply(rotated, rho), apply(phi, rho)) < 1e-12);
    }

    // Round trip on matrix units preserves the channel action to 1e-12.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CMat unit(3, 3);
            unit(i, j) = 1.0;
            CHECK(frob_dist(apply(back, unit), apply(phi, unit)) < 1e-12);
        }
}

TEST_CASE("environment slices contract the operator E-norm") {
    Rng rng(55);
    for (int t = 0; t < 20; ++t) {
        const int d_a = 3 + int(rng() % 3);
        const int d_e = 2 + int(rng() % 3);
        const CMat v = random_cmat(3 * d_e, d_a, rng);
        const Dilation dil(v, d_e);
        const EnergyObservable g = random_observable(d_a, rng);
        const double e = 0.3 + 0.5 * g.max_level();
        const double whole = e_norm(dil.v, g, e).value;
        const KrausMap slices = kraus_from_stinespring(dil);
        for (const CMat& vk : slices.ops) CHECK(e_norm(vk, g, e).value <= whole + 1e-9);
    }
}

TEST_CASE("extend: product inputs, trivial reference, entrywise oracle") {
    Rng rng(56);
    const KrausMap phi = random_cp(2, 2, 3, rng);
    const CMat rho = random_density(2, rng), sigma = random_density(3, rng);
    const KrausMap ext = extend(phi, 3);
    CHECK(frob_dist(apply(ext, tensor(rho, sigma)), tensor(apply(phi, rho), sigma)) < 1e-13);

    const KrausMap ext1 = extend(phi, 1);
    CHECK(frob_dist(apply(ext1, rho), apply(phi, rho)) < 1e-14);

    // (dephasing (x) Id) on an entangled 2-qubit state: direct Kraus-sum oracle.
    const KrausMap deph = dephasing_qubit();
    const KrausMap dext = extend(deph, 2);
    const CMat omega = random_density(4, rng);
    CMat oracle(4, 4);
    for (const CMat& k : deph.ops) {
        const CMat kk = tensor(k, CMat::identity(2));
        oracle += kk * omega * kk.adjoint();
    }
    CHECK(frob_dist(apply(dext, omega), oracle) < 1e-13);

    // Tr_R (Phi (x) Id)(omega) = Phi(Tr_R omega).
    const KrausMap psi = random_cp(3, 4, 2, rng);
    const KrausMap pext = extend(psi, 3);
    const CMat w = random_density(9, rng);
    const CMat lhs = partial_trace(apply(pext, w), DimSplit{{4, 3}}, {0});
    const CMat rhs = apply(psi, partial_trace(w, DimSplit{{3, 3}}, {0}));
    CHECK(frob_dist(lhs, rhs) < 1e-11);
}

TEST_CASE("extend of a dilation agrees with extend of its Kraus form") {
    Rng rng(57);
    const KrausMap phi = random_cp(3, 2, 2, rng);
    const Dilation dil = stinespring_from_kraus(phi);
    const KrausMap a = extend(phi, 2), b = extend(dil, 2);
    const CMat omega = random_density(6, rng);
    CHECK(frob_dist(apply(a, omega), apply(b, omega)) < 1e-12);
}

TEST_CASE("two_op_apply: degenerate cases and polarization reconstruction") {
    Rng rng(58);
    const int d = 3, d_e = 2;
    const CMat v1 = random_cmat(d * d_e, d, rng);
    const CMat v2 = random_cmat(d * d_e, d, rng);

    const TwoOperatorMap same(v1, v1, d_e);
    const CMat rho = random_density(d, rng);
    CHECK(frob_dist(two_op_apply(same, rho), apply_dilation(Dilation(v1, d_e), rho)) < 1e-12);

    const TwoOperatorMap zero(v1, CMat::zeros(d * d_e, d), d_e);
    CHECK(two_op_apply(zero, rho).norm_fro() < 1e-14);

    // Psi = (Phi1 - Phi2 + i Phi3 - i Phi4)/4 on a basis of matrix units.
    const TwoOperatorMap t(v1, v2, d_e);
    const std::array<Dilation, 4> parts = polarize(t);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            CMat unit(d, d);
            unit(i, j) = 1.0;
            const CMat recon = cplx(0.25) * (apply_dilation(parts[0], unit) -
                                             apply_dilation(parts[1], unit) +
                                             cplx(0.0, 1.0) * apply_dilation(parts[2], unit) -
                                             cplx(0.0, 1.0) * apply_dilation(parts[3], unit));
            CHECK(frob_dist(recon, two_op_apply(t, unit)) < 1e-10);
        }

    // v2 = v1 kills Phi2 = (V1 - V2)(.)(V1 - V2)*; v2 = -v1 kills Phi1.
    const std::array<Dilation, 4> same_parts = polarize(TwoOperatorMap(v1, v1, d_e));
    CHECK(same_parts[1].v.norm_fro() == 0.0);
    CMat neg = v1;
    neg *= cplx(-1.0);
    const std::array<Dilation, 4> neg_parts = polarize(TwoOperatorMap(v1, neg, d_e));
    CHECK(neg_parts[0].v.norm_fro() == 0.0);
}

TEST_CASE("channel and operation flags reflect trace behavior") {
    Rng rng(59);
    const KrausMap ch = random_channel(4, 4, 3, rng);
    CHECK(ch.is_channel());
    for (int t = 0; t < 10; ++t) {
        const CMat rho = random_density(4, rng);
        CHECK(apply(ch, rho).trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    }
    // Scaling a channel down makes it a strict operation.
    std::vector<CMat> shrunk;
    for (CMat op : ch.ops) {
        op *= cplx(0.9);
        shrunk.push_back(op);
    }
    const KrausMap opn(shrunk, MapKind::Operation);
    CHECK(opn.is_operation());
    CHECK_FALSE(opn.is_channel());
}

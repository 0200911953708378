#include "ecdkit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "ecdkit/channel.hpp"
#include "ecdkit/distance.hpp"
#include "ecdkit/energy.hpp"
#include "ecdkit/enorm.hpp"
#include "ecdkit/matcore.hpp"
#include "ecdkit/search.hpp"
#include "ecdkit/serialize.hpp"
#include "ecdkit/truncate.hpp"

namespace ecdkit {

namespace {

CMat random_mat(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cplx(n(rng), n(rng));
    return m;
}

CMat random_herm(int d, Rng& rng) {
    CMat m = random_mat(d, d, rng);
    return cplx(0.5) * (m + m.adjoint());
}

CMat random_psd(int d, Rng& rng) {
    CMat m = random_mat(d, d, rng);
    return m * m.adjoint();
}

CMat random_unitary(int d, Rng& rng) { return polar_unitary(random_mat(d, d, rng)); }

EnergyObservable random_observable(int d, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::vector<double> lv(d, 0.0);
    for (int k = 1; k < d; ++k) lv[k] = lv[k - 1] + u(rng);
    return EnergyObservable(std::move(lv), true);
}

KrausMap random_channel(int d_a, int d_b, int n_ops, Rng& rng) {
    std::vector<CMat> ops;
    for (int k = 0; k < n_ops; ++k) ops.push_back(random_mat(d_b, d_a, rng));
    CMat s(d_a, d_a);
    for (const CMat& v : ops) s += v.adjoint() * v;
    // whiten: right-multiply by s^{-1/2} so the completeness relation holds
    EigResult e = herm_eig(s);
    CMat isr(d_a, d_a);
    for (int i = 0; i < d_a; ++i)
        for (int j = 0; j < d_a; ++j) {
            cplx acc = 0.0;
            for (int q = 0; q < d_a; ++q)
                acc += e.vectors(i, q) * std::conj(e.vectors(j, q)) / std::sqrt(e.values[q]);
            isr(i, j) = acc;
        }
    for (CMat& v : ops) v = v * isr;
    return KrausMap(std::move(ops), MapKind::Channel);
}

KrausMap random_cp(int d_a, int d_b, int n_ops, Rng& rng) {
    std::vector<CMat> ops;
    std::uniform_real_distribution<double> u(0.2, 1.2);
    for (int k = 0; k < n_ops; ++k) {
        CMat v = random_mat(d_b, d_a, rng);
        v *= cplx(u(rng) / std::sqrt(double(d_a * d_b)));
        ops.push_back(std::move(v));
    }
    return KrausMap(std::move(ops), MapKind::General);
}

CMat annihilation(int d) {
    CMat a(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

struct Runner {
    std::uint64_t seed;
    int trials;
    std::ostringstream out;
    int passed = 0, failed = 0;
    std::uint64_t counter = 0;

    Rng fresh() { return Rng(seed * 1000003ull + (++counter)); }

    void check(const std::string& name, const std::function<std::string()>& body) {
        std::string detail;
        try {
            detail = body();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
            ++passed;
            out << "PASS " << name << "\n";
        } else {
            ++failed;
            out << "FAIL " << name << ": " << detail << "\n";
        }
    }
};

std::string instance_json(const CMat& m) { return to_json(m).dump(); }

// ---------------------------------------------------------------- matcore

void suite_matcore(Runner& r) {
    r.check("matcore.tensor_associative", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            CMat a = random_mat(2, 2, rng), b = random_mat(3, 3, rng), c = random_mat(2, 2, rng);
            if ((tensor(tensor(a, b), c) - tensor(a, tensor(b, c))).max_abs() > 1e-12)
                return "associativity broken: " + instance_json(a);
        }
        return {};
    });
    r.check("matcore.partial_trace_product", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            CMat a = random_mat(3, 3, rng), b = random_mat(4, 4, rng);
            CMat lhs = partial_trace(tensor(a, b), DimSplit{{3, 4}}, {0});
            CMat rhs = a;
            rhs *= b.trace();
            if ((lhs - rhs).max_abs() > 1e-11) return "product rule broken: " + instance_json(a);
        }
        return {};
    });
    r.check("matcore.trace_norm_triangle_unitary", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            CMat a = random_mat(4, 4, rng), b = random_mat(4, 4, rng);
            if (trace_norm(a + b) > trace_norm(a) + trace_norm(b) + 1e-9)
                return "triangle inequality broken: " + instance_json(a);
            CMat u = random_unitary(4, rng);
            if (std::abs(trace_norm(u * a) - trace_norm(a)) > 1e-9)
                return "unitary invariance broken: " + instance_json(a);
        }
        return {};
    });
    r.check("matcore.herm_eig_reconstruction", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            CMat m = random_herm(8, rng);
            EigResult e = herm_eig(m);
            CMat rec(8, 8);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) {
                    cplx s = 0.0;
                    for (int q = 0; q < 8; ++q)
                        s += e.values[q] * e.vectors(i, q) * std::conj(e.vectors(j, q));
                    rec(i, j) = s;
                }
            if ((rec - m).norm_fro() > 1e-10 * (1.0 + m.norm_fro()))
                return "reconstruction residual too large: " + instance_json(m);
            if ((e.vectors.adjoint() * e.vectors - CMat::identity(8)).norm_fro() > 1e-10 * 8)
                return "eigenvectors not orthonormal: " + instance_json(m);
        }
        return {};
    });
    r.check("matcore.psd_sqrt_roundtrip", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            CMat m = random_psd(6, rng);
            CMat root = psd_sqrt(m);
            if ((root * root - m).norm_fro() > 1e-9 * (1.0 + m.norm_fro()))
                return "square root round trip broken: " + instance_json(m);
        }
        return {};
    });
}

// ----------------------------------------------------------------- energy

void suite_energy(Runner& r) {
    r.check("energy.projector_commutes", [&]() -> std::string {
        Rng rng = r.fresh();
        EnergyObservable g = random_observable(8, rng);
        CMat p = g.spectral_projector(g.levels[4]);
        if ((p * g.matrix() - g.matrix() * p).max_abs() != 0.0) return "projector does not commute";
        return {};
    });
    r.check("energy.sampler_membership", [&]() -> std::string {
        Rng rng = r.fresh();
        EnergyObservable g = random_observable(8, rng);
        const double budget = 2.0;
        int boundary = 0;
        const int n = std::max(r.trials * 20, 200);
        for (int t = 0; t < n; ++t) {
            DensityOperator rho = sample_constrained(
                g, budget, t % 2 ? SampleMode::Pure : SampleMode::Mixed, rng);
            if (rho.energy(g) > budget + 1e-9) return "sampled state exceeds the budget";
            if (std::abs(rho.trace() - 1.0) > 1e-12) return "sampled state not unit trace";
            if (rho.energy(g) >= budget - 1e-6) ++boundary;
        }
        if (boundary * 4 < n) return "boundary fraction below 25%";
        return {};
    });
    r.check("energy.pinch_trace_preserving", [&]() -> std::string {
        Rng rng = r.fresh();
        EnergyObservable g = random_observable(10, rng);
        KrausMap pin = pinch_channel(g, g.levels[5]);
        if ((pin.gram() - CMat::identity(10)).max_abs() > 1e-12)
            return "pinch channel is not trace preserving";
        return {};
    });
    r.check("energy.pinch_output_energy", [&]() -> std::string {
        Rng rng = r.fresh();
        EnergyObservable g = random_observable(10, rng);
        const double cutoff = g.levels[5];
        KrausMap pin = pinch_channel(g, cutoff);
        for (int t = 0; t < r.trials; ++t) {
            CMat rho = random_psd(10, rng);
            rho *= cplx(1.0 / rho.trace().real());
            const CMat outm = apply(pin, rho);
            double e = 0.0;
            for (int k = 0; k < 10; ++k) e += g.levels[k] * outm(k, k).real();
            if (e > cutoff + 1e-9) return "pinched output exceeds the cutoff energy";
        }
        return {};
    });
    r.check("energy.pinch_deviation_bound", [&]() -> std::string {
        Rng rng = r.fresh();
        EnergyObservable g = random_observable(6, rng);
        const double budget = 0.6 * g.max_level();
        const EnergyObservable gr = g.tensor_identity(6);
        const int n = std::max(r.trials * 4, 200);
        for (int t = 0; t < n; ++t) {
            DensityOperator omega = sample_constrained(gr, budget, SampleMode::Mixed, rng);
            auto [lhs, rhs] = pinch_deviation(omega, g, budget, g.levels[3] + budget);
            if (lhs > rhs + 1e-9) return "pinch deviation bound violated";
        }
        return {};
    });
}

// ------------------------------------------------------------------ enorm

void suite_enorm(Runner& r) {
    r.check("enorm.duality_gap", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.2, 6.0);
        for (int t = 0; t < r.trials; ++t) {
            const int d = 2 + int(rng() % 7);
            CMat a = random_mat(d, d, rng);
            EnergyObservable g = random_observable(d, rng);
            ENormCertificate c = e_norm(a, g, ue(rng));
            if (c.gap > 1e-8 * (1.0 + c.value * c.value))
                return "duality gap too large: " + instance_json(a);
        }
        return {};
    });
    r.check("enorm.graded_sandwich_eq14", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.2, 6.0);
        for (int t = 0; t < r.trials; ++t) {
            const int d = 3 + int(rng() % 5);
            CMat a = random_mat(d, d, rng);
            EnergyObservable g = random_observable(d, rng);
            const double budget = ue(rng);
            const double en = e_norm(a, g, budget).value;
            const double gn = e_norm_graded(a, g, budget);
            if (gn > en + 1e-8 || gn < std::sqrt(0.5) * en - 1e-8)
                return "graded-norm sandwich violated: " + instance_json(a);
        }
        return {};
    });
    r.check("enorm.scaling_eq16", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.2, 3.0);
        for (int t = 0; t < r.trials; ++t) {
            const int d = 3 + int(rng() % 5);
            CMat a = random_mat(d, d, rng);
            EnergyObservable g = random_observable(d, rng);
            const double e1 = ue(rng), e2 = e1 * (1.0 + ue(rng));
            const double n1 = e_norm(a, g, e1).value, n2 = e_norm(a, g, e2).value;
            if (n1 > n2 + 1e-8 || n2 > std::sqrt(e2 / e1) * n1 + 1e-8)
                return "scaling bound violated: " + instance_json(a);
        }
        return {};
    });
    r.check("enorm.midpoint_concavity", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.2, 4.0);
        for (int t = 0; t < r.trials; ++t) {
            const int d = 3 + int(rng() % 5);
            CMat a = random_mat(d, d, rng);
            EnergyObservable g = random_observable(d, rng);
            const double e1 = ue(rng), e2 = ue(rng);
            auto sq = [&](double e) {
                const double v = e_norm(a, g, e).value;
                return v * v;
            };
            if (sq(0.5 * (e1 + e2)) < 0.5 * (sq(e1) + sq(e2)) - 1e-7)
                return "midpoint concavity violated: " + instance_json(a);
        }
        return {};
    });
    r.check("enorm.collection_bound_eq11", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < r.trials; ++t) {
            const int d = 4;
            CMat a = random_mat(d, d, rng);
            EnergyObservable g = random_observable(d, rng);
            const double budget = 1.5;
            const double cert = e_norm(a, g, budget).value;
            // random collection with total mass <= 1 and total energy <= E
            double mass = 0.0, sum = 0.0;
            std::vector<double> w = {u(rng), u(rng), u(rng)};
            const double tot = w[0] + w[1] + w[2];
            for (double& x : w) x /= tot;
            for (int i = 0; i < 3; ++i) {
                std::vector<cplx> phi = sample_constrained_vector(g, budget, rng);
                const double wi = w[i];
                mass += wi;
                std::vector<cplx> scaled = phi;
                for (cplx& z : scaled) z *= std::sqrt(wi);
                const std::vector<cplx> img = a * scaled;
                double img2 = 0.0;
                for (const cplx& z : img) img2 += std::norm(z);
                sum += img2;
                (void)mass;
            }
            if (std::sqrt(sum) > cert + 1e-8) return "collection bound violated";
        }
        return {};
    });
    r.check("enorm.ancilla_bound_eq12", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            const int d = 4, k = 3;
            CMat a = random_mat(d, d, rng);
            EnergyObservable g = random_observable(d, rng);
            const double budget = 1.5;
            const double cert = e_norm(a, g, budget).value;
            const EnergyObservable gk = g.tensor_identity(k);
            std::vector<cplx> phi = sample_constrained_vector(gk, budget, rng);
            const std::vector<cplx> img = apply_extended(a, phi, k);
            double img2 = 0.0;
            for (const cplx& z : img) img2 += std::norm(z);
            if (std::sqrt(img2) > cert + 1e-8) return "ancilla bound violated";
        }
        return {};
    });
    r.check("enorm.tensor_stability", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.3, 4.0);
        for (int t = 0; t < std::min(r.trials, 20); ++t) {
            const int d = 3, k = 3;
            CMat a = random_mat(d, d, rng);
            EnergyObservable g = random_observable(d, rng);
            const double budget = ue(rng);
            const double base = e_norm(a, g, budget).value;
            const double ext =
                e_norm(tensor(a, CMat::identity(k)), g.tensor_identity(k), budget).value;
            if (std::abs(base - ext) > 1e-8 * (1.0 + base))
                return "tensor stability violated: " + instance_json(a);
        }
        return {};
    });
    r.check("enorm.sample_vs_certificate", [&]() -> std::string {
        Rng rng = r.fresh();
        const int d = 5;
        CMat a = random_mat(d, d, rng);
        EnergyObservable g = random_observable(d, rng);
        const double budget = 1.2;
        ENormCertificate cert = e_norm(a, g, budget);
        auto objective = [&](const std::vector<cplx>& v) {
            const std::vector<cplx> img = a * v;
            double s = 0.0;
            for (const cplx& z : img) s += std::norm(z);
            return std::sqrt(s);
        };
        Rng srng = r.fresh();
        SearchResult sr = refine_max(objective, g, budget, 2000, 20, 400, srng);
        if (sr.value > cert.value + 1e-8) return "sampled value exceeds the certificate";
        if (sr.value < cert.value - 1e-3) return "sampling fails to approach the certificate";
        return {};
    });
    r.check("enorm.product_bound_lemma2", [&]() -> std::string {
        Rng rng = r.fresh();
        const int n = std::max(r.trials * 4, 200);
        for (int t = 0; t < n; ++t) {
            const int d = 3 + int(rng() % 4);
            CMat a = random_mat(d, d, rng), b = random_mat(d, d, rng);
            EnergyObservable g = random_observable(d, rng);
            DensityOperator rho = sample_constrained(g, 2.0, SampleMode::Mixed, rng);
            auto [lhs, rhs] = sandwich_product_bound(a, b, rho, g);
            if (lhs > rhs + 1e-9) return "product bound violated: " + instance_json(a);
        }
        return {};
    });
    r.check("enorm.modulus_lemma1", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ueps(0.05, 2.0);
        const int n = std::max(r.trials * 4, 200);
        for (int t = 0; t < n; ++t) {
            const int d = 4;
            CMat a = random_mat(d, d, rng);
            EnergyObservable g = random_observable(d, rng);
            const double budget = 1.5, eps = ueps(rng);
            // two constrained unit vectors at distance <= eps
            std::vector<cplx> eta = sample_constrained_vector(g, budget, rng);
            std::vector<cplx> theta = eta;
            std::normal_distribution<double> nn(0.0, 1.0);
            for (cplx& z : theta) z += 0.2 * eps * cplx(nn(rng), nn(rng));
            theta = retract_constrained(std::move(theta), g, budget);
            double diff2 = 0.0;
            for (size_t i = 0; i < eta.size(); ++i) diff2 += std::norm(eta[i] - theta[i]);
            const double dist = std::sqrt(diff2);
            if (dist > eps || dist <= 0.0) continue;
            std::vector<cplx> delta(eta.size());
            for (size_t i = 0; i < eta.size(); ++i) delta[i] = eta[i] - theta[i];
            const std::vector<cplx> img = a * delta;
            double img2 = 0.0;
            for (const cplx& z : img) img2 += std::norm(z);
            if (std::sqrt(img2) > modulus_f(a, g, budget, dist) + 1e-9)
                return "continuity modulus violated: " + instance_json(a);
        }
        return {};
    });
    r.check("enorm.transform_roundtrip_eq15", [&]() -> std::string {
        Rng rng = r.fresh();
        const int d = 5;
        CMat a = random_mat(d, d, rng);
        EnergyObservable g = random_observable(d, rng);
        const double budget = 1.0;
        const std::vector<double> ts = log_grid(1e-3, 1e3, 400);
        std::vector<GridPoint> en_grid;
        for (double t : ts) en_grid.push_back({t * budget, e_norm(a, g, t * budget).value});
        const double graded = transform_graded_from_enorm(en_grid, budget).value;
        const double direct = e_norm_graded(a, g, budget);
        if (std::abs(graded - direct) > 2e-3 * (1.0 + direct))
            return "graded transform disagrees with the direct value";
        std::vector<GridPoint> gr_grid;
        for (double t : ts) gr_grid.push_back({t * budget, e_norm_graded(a, g, t * budget)});
        const double back = transform_enorm_from_graded(gr_grid, budget).value;
        const double en = e_norm(a, g, budget).value;
        if (std::abs(back - en) > 2e-3 * (1.0 + en)) return "round trip drifts beyond tolerance";
        return {};
    });
}

// ---------------------------------------------------------------- channel

void suite_channel(Runner& r) {
    r.check("channel.kraus_stinespring_roundtrip", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            KrausMap phi = random_channel(3, 3, 2 + int(rng() % 2), rng);
            Dilation v = stinespring_from_kraus(phi);
            KrausMap back = kraus_from_stinespring(v);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    CMat unit(3, 3);
                    unit(i, j) = 1.0;
                    if ((apply(phi, unit) - apply(back, unit)).max_abs() > 1e-12)
                        return "round trip changes the channel action";
                }
        }
        return {};
    });
    r.check("channel.trace_preservation_flags", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            KrausMap phi = random_channel(3, 4, 2, rng);
            CMat rho = random_psd(3, rng);
            if (std::abs((apply(phi, rho).trace() - rho.trace()).real()) > 1e-9)
                return "channel flag without trace preservation";
            std::vector<CMat> shrunk = phi.ops;
            for (CMat& v : shrunk) v *= cplx(0.9);
            KrausMap op(shrunk, MapKind::Operation);
            if (apply(op, rho).trace().real() > rho.trace().real() + 1e-9)
                return "operation increases trace";
        }
        return {};
    });
    r.check("channel.extend_commutes_with_trace", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            KrausMap phi = random_channel(3, 3, 2, rng);
            CMat omega = random_psd(9, rng);
            omega *= cplx(1.0 / omega.trace().real());
            const CMat lhs = partial_trace(apply(extend(phi, 3), omega), DimSplit{{3, 3}}, {0});
            const CMat rhs = apply(phi, partial_trace(omega, DimSplit{{3, 3}}, {0}));
            if ((lhs - rhs).max_abs() > 1e-11) return "extension does not commute with Tr_R";
        }
        return {};
    });
    r.check("channel.pure_trace_identity", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            KrausMap phi = random_cp(3, 3, 2, rng);
            Dilation v = stinespring_from_kraus(phi);
            std::vector<cplx> f = haar_vector(3, rng);
            CMat rho(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) rho(i, j) = f[i] * std::conj(f[j]);
            const std::vector<cplx> img = v.v * f;
            double img2 = 0.0;
            for (const cplx& z : img) img2 += std::norm(z);
            if (std::abs(apply(phi, rho).trace().real() - img2) > 1e-10)
                return "trace identity on pure inputs violated";
        }
        return {};
    });
    r.check("channel.lemma7_slice_contract", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.3, 4.0);
        for (int t = 0; t < std::min(r.trials, 20); ++t) {
            const int d = 3, d_e = 2 + int(rng() % 2);
            Dilation v(random_mat(d * d_e, d, rng), d_e);
            EnergyObservable g = random_observable(d, rng);
            const double budget = ue(rng);
            const double whole = e_norm(v.v, g, budget).value;
            for (const CMat& k : kraus_from_stinespring(v).ops)
                if (e_norm(k, g, budget).value > whole + 1e-9)
                    return "slice norm exceeds the dilation norm";
        }
        return {};
    });
    r.check("channel.polarization_identity", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            const int d = 3, d_e = 2;
            TwoOperatorMap tm(random_mat(d * d_e, d, rng), random_mat(d * d_e, d, rng), d_e);
            std::array<Dilation, 4> parts = polarize(tm);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    CMat unit(d, d);
                    unit(i, j) = 1.0;
                    CMat rec = apply_dilation(parts[0], unit) - apply_dilation(parts[1], unit);
                    CMat part3 = apply_dilation(parts[2], unit);
                    part3 *= cplx(0.0, 1.0);
                    CMat part4 = apply_dilation(parts[3], unit);
                    part4 *= cplx(0.0, -1.0);
                    rec += part3;
                    rec += part4;
                    rec *= cplx(0.25);
                    if ((rec - two_op_apply(tm, unit)).max_abs() > 1e-10)
                        return "polarization reconstruction broken";
                }
        }
        return {};
    });
}

// --------------------------------------------------------------- distance

void suite_distance(Runner& r) {
    AscentConfig quick;
    quick.restarts = 8;
    quick.max_iter = 200;

    r.check("distance.channel_norm_is_one", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.3, 5.0);
        for (int t = 0; t < r.trials; ++t) {
            KrausMap phi = random_channel(4, 3, 2, rng);
            EnergyObservable g = random_observable(4, rng);
            if (std::abs(ecd_norm_cp(phi, g, ue(rng)).value - 1.0) > 1e-10)
                return "trace-preserving map norm differs from 1";
        }
        return {};
    });
    r.check("distance.representing_operator_identity", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.3, 4.0);
        for (int t = 0; t < r.trials; ++t) {
            KrausMap phi = random_cp(4, 3, 2, rng);
            EnergyObservable g = random_observable(4, rng);
            const double budget = ue(rng);
            const double norm_cp = ecd_norm_cp(phi, g, budget).value;
            const double vn = e_norm(stinespring_from_kraus(phi).v, g, budget).value;
            if (std::abs(norm_cp - vn * vn) > 1e-8 * (1.0 + norm_cp))
                return "representing-operator identity violated";
        }
        return {};
    });
    r.check("distance.cp_scaling_eq25", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.2, 2.0);
        for (int t = 0; t < r.trials; ++t) {
            KrausMap phi = random_cp(4, 4, 2, rng);
            EnergyObservable g = random_observable(4, rng);
            const double e1 = ue(rng), e2 = e1 * (1.0 + ue(rng));
            const double n1 = ecd_norm_cp(phi, g, e1).value, n2 = ecd_norm_cp(phi, g, e2).value;
            if (n1 > n2 + 1e-8 || n2 > (e2 / e1) * n1 + 1e-8) return "Eq.-25 scaling violated";
        }
        return {};
    });
    r.check("distance.cp_norm_concavity", [&]() -> std::string {
        Rng rng = r.fresh();
        std::uniform_real_distribution<double> ue(0.2, 3.0);
        for (int t = 0; t < r.trials; ++t) {
            KrausMap phi = random_cp(4, 4, 2, rng);
            EnergyObservable g = random_observable(4, rng);
            const double e1 = ue(rng), e2 = ue(rng);
            auto nv = [&](double e) { return ecd_norm_cp(phi, g, e).value; };
            if (nv(0.5 * (e1 + e2)) < 0.5 * (nv(e1) + nv(e2)) - 1e-8)
                return "CP norm concavity violated";
        }
        return {};
    });
    r.check("distance.ksw_ordering_eq34", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < std::min(r.trials, 10); ++t) {
            KrausMap phi = random_cp(3, 3, 2, rng);
            KrausMap psi = random_cp(3, 3, 2, rng);
            EnergyObservable g = random_observable(3, rng);
            AscentConfig cfg = quick;
            cfg.seed = rng();
            KswReport rep = ksw_chain(phi, psi, g, 1.0, cfg, 1e-4);
            if (!rep.ordering_ok) return "KSW chain ordering violated";
        }
        return {};
    });
    r.check("distance.witness_reevaluates", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < std::min(r.trials, 10); ++t) {
            KrausMap phi = random_channel(3, 3, 2, rng);
            KrausMap psi = random_channel(3, 3, 2, rng);
            EnergyObservable g = random_observable(3, rng);
            AscentConfig cfg = quick;
            cfg.seed = rng();
            DistanceReport rep = ecd_distance(phi, psi, g, 1.5, cfg);
            const EnergyObservable gr = g.tensor_identity(3);
            if (vector_energy(rep.witness, gr) > 1.5 + 1e-9) return "witness violates the budget";
            if (std::abs(ecd_pair_objective(phi, psi, rep.witness, 3) - rep.estimate) > 1e-8)
                return "witness does not reproduce the estimate";
            if (rep.lower > rep.upper + 1e-7) return "lower exceeds upper";
        }
        return {};
    });
    r.check("distance.bures_monotone_partial_trace", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < r.trials; ++t) {
            CMat rho = random_psd(6, rng), sigma = random_psd(6, rng);
            rho *= cplx(1.0 / rho.trace().real());
            sigma *= cplx(1.0 / sigma.trace().real());
            const DimSplit split{{2, 3}};
            if (bures(rho, sigma) <
                bures(partial_trace(rho, split, {0}), partial_trace(sigma, split, {0})) - 1e-9)
                return "Bures increases under partial trace";
        }
        return {};
    });
    r.check("distance.bures_trace_norm_sandwich", [&]() -> std::string {
        Rng rng = r.fresh();
        const int n = std::max(r.trials * 10, 500);
        for (int t = 0; t < n; ++t) {
            const int d = 2 + int(rng() % 4);
            CMat rho = random_psd(d, rng), sigma = random_psd(d, rng);
            std::uniform_real_distribution<double> u(0.3, 1.0);
            rho *= cplx(u(rng) / rho.trace().real());
            sigma *= cplx(u(rng) / sigma.trace().real());
            const double b = bures(rho, sigma);
            const double tn = trace_norm(rho - sigma);
            const double lo = tn / (std::sqrt(trace_norm(rho)) + std::sqrt(trace_norm(sigma)));
            if (b < lo - 1e-9 || b > std::sqrt(tn) + 1e-9)
                return "Bures/trace-norm sandwich violated";
        }
        return {};
    });
    r.check("distance.continuity_bound_prop1", [&]() -> std::string {
        Rng rng = r.fresh();
        KrausMap phi = random_cp(4, 4, 2, rng);
        EnergyObservable g = random_observable(4, rng);
        ContinuityCheckReport rep =
            continuity_bound_check(phi, g, 1.5, 0.5, std::max(r.trials, 50), rng());
        if (rep.violations > 0) return "continuity bound violated";
        return {};
    });
}

// --------------------------------------------------------------- truncate

void suite_truncate(Runner& r) {
    AscentConfig quick;
    quick.restarts = 6;
    quick.max_iter = 150;

    r.check("truncate.tail_bound", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < std::min(r.trials, 25); ++t) {
            const int d = 6, d_e = 2;
            Dilation v(random_mat(d * d_e, d, rng), d_e);
            EnergyObservable g = random_observable(d, rng);
            const double budget = 0.3 * g.max_level();
            auto [lhs, rhs] = tail_norm_check(v, g, budget, 0.7 * g.max_level());
            if (lhs > rhs + 1e-9) return "tail norm bound violated";
        }
        return {};
    });
    r.check("truncate.truncated_norm_monotone", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < std::min(r.trials, 15); ++t) {
            const int d = 6;
            Dilation v(random_mat(d * 2, d, rng), 2);
            EnergyObservable g = random_observable(d, rng);
            const double budget = 1.0;
            const double whole = e_norm(v.v, g, budget).value;
            Dilation vn = truncate_map(v, g, g.levels[3]);
            if (e_norm(vn.v, g, budget).value > whole + 1e-9)
                return "truncation increases the norm";
        }
        return {};
    });
    r.check("truncate.bound30", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < std::min(r.trials, 6); ++t) {
            const int d = 6;
            Dilation v(random_mat(d, d, rng), 1);
            EnergyObservable g = random_observable(d, rng);
            const double budget = 0.3 * g.max_level();
            AscentConfig cfg = quick;
            cfg.seed = rng();
            StudyRow row = bound30_check(v, g, budget, 0.7 * g.max_level(), cfg);
            if (row.lhs_estimate > row.rhs_bound + 1e-6) return "bound30 contract violated";
            if (row.tail_lhs > row.tail_rhs + 1e-8) return "tail contract violated in study row";
        }
        return {};
    });
    r.check("truncate.distance_triangle", [&]() -> std::string {
        Rng rng = r.fresh();
        const int d = 5;
        Dilation v(random_mat(d, d, rng), 1);
        EnergyObservable g = random_observable(d, rng);
        const double budget = 0.3 * g.max_level();
        const KrausMap phi = kraus_from_stinespring(v);
        const KrausMap phi_m = kraus_from_stinespring(truncate_map(v, g, g.levels[2]));
        const KrausMap phi_n = kraus_from_stinespring(truncate_map(v, g, g.levels[3]));
        AscentConfig cfg = quick;
        cfg.seed = rng();
        const double dmn = ecd_distance(phi_m, phi_n, g, budget, cfg).estimate;
        const double dm = ecd_distance(phi_m, phi, g, budget, cfg).estimate;
        const double dn = ecd_distance(phi_n, phi, g, budget, cfg).estimate;
        if (dmn > dm + dn + 1e-6) return "metric triangle inequality violated";
        return {};
    });
    r.check("truncate.isometry_gives_operations", [&]() -> std::string {
        Rng rng = r.fresh();
        for (int t = 0; t < std::min(r.trials, 15); ++t) {
            const int d = 5, d_e = 2;
            // random isometry: orthonormalize a tall random matrix
            SVDResult s = svd(random_mat(d * d_e, d, rng));
            Dilation v(s.u * s.v.adjoint(), d_e);
            if (!v.is_isometry()) return "isometry construction failed";
            EnergyObservable g = random_observable(d, rng);
            KrausMap phi_n = kraus_from_stinespring(truncate_map(v, g, g.levels[2]));
            if (herm_eig_max(phi_n.gram() - CMat::identity(d)) > 1e-12)
                return "truncated isometric map is not trace-nonincreasing";
        }
        return {};
    });
}

}  // namespace

VerifyResult run_verify(const VerifyOptions& opt) {
    if (opt.trials < 1) throw std::invalid_argument("run_verify: trials must be positive");
    const std::vector<std::string> known = {"matcore", "energy",   "enorm",
                                            "channel", "distance", "truncate"};
    bool matched = opt.suite == "all";
    for (const std::string& s : known) matched = matched || s == opt.suite;
    if (!matched) throw std::invalid_argument("run_verify: unknown suite '" + opt.suite + "'");

    Runner r{opt.seed, opt.trials, {}, 0, 0, 0};
    auto want = [&](const char* s) { return opt.suite == "all" || opt.suite == s; };
    if (want("matcore")) suite_matcore(r);
    if (want("energy")) suite_energy(r);
    if (want("enorm")) suite_enorm(r);
    if (want("channel")) suite_channel(r);
    if (want("distance")) suite_distance(r);
    if (want("truncate")) suite_truncate(r);

    VerifyResult res;
    res.passed = r.passed;
    res.failed = r.failed;
    r.out << (r.failed == 0 ? "OK" : "FAILED") << " " << r.passed << " passed, " << r.failed
          << " failed\n";
    res.summary = r.out.str();
    return res;
}

}  // namespace ecdkit

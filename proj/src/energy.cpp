#include "ecdkit/energy.hpp"

#include <algorithm>
#include <cmath>

#include "ecdkit/channel.hpp"

namespace ecdkit {

EnergyObservable EnergyObservable::number_op(int d) {
    std::vector<double> lv(d);
    for (int k = 0; k < d; ++k) lv[k] = k;
    return EnergyObservable(std::move(lv), true);
}

void EnergyObservable::validate() const {
    if (levels.empty()) throw std::invalid_argument("EnergyObservable: empty spectrum");
    if (levels.front() < 0.0) throw std::invalid_argument("EnergyObservable: negative level");
    for (size_t i = 1; i < levels.size(); ++i)
        if (levels[i] < levels[i - 1])
            throw std::invalid_argument("EnergyObservable: levels not nondecreasing");
    if (grounded && levels.front() != 0.0)
        throw std::invalid_argument("EnergyObservable: grounded requires E_0 = 0");
}

CMat EnergyObservable::spectral_projector(double cutoff) const {
    if (cutoff < 0.0) throw std::invalid_argument("spectral_projector: negative cutoff");
    CMat p(dim(), dim());
    for (int k = 0; k < dim(); ++k)
        if (levels[k] <= cutoff) p(k, k) = 1.0;
    return p;
}

EnergyObservable EnergyObservable::tensor_identity(int d_r) const {
    std::vector<double> lv;
    lv.reserve(size_t(dim()) * d_r);
    for (double e : levels)
        for (int r = 0; r < d_r; ++r) lv.push_back(e);
    EnergyObservable g;
    g.levels = std::move(lv);  // nondecreasing order is preserved by repetition
    g.grounded = grounded;
    g.validate();
    return g;
}

DensityOperator::DensityOperator(CMat m) : mat_(std::move(m)) {
    if (!mat_.is_hermitian()) throw std::invalid_argument("DensityOperator: not Hermitian");
    tr_ = mat_.trace().real();
    if (tr_ <= 0.0 || tr_ > 1.0 + 1e-12)
        throw std::invalid_argument("DensityOperator: trace outside (0, 1+1e-12]");
    EigResult e = herm_eig(mat_);
    const double scale = std::max(std::abs(e.values.back()), 1e-300);
    std::int64_t clamped = 0;
    for (double v : e.values) {
        if (v < -1e-10 * scale)
            throw std::invalid_argument("DensityOperator: not PSD");
        if (v < 0.0) ++clamped;
    }
    if (clamped) diagnostics::note_psd_clamp(clamped);
}

double DensityOperator::energy(const EnergyObservable& g) const {
    if (g.dim() != dim()) throw std::invalid_argument("energy: dimension mismatch");
    double e = 0.0;
    for (int k = 0; k < dim(); ++k) e += g.levels[k] * mat_(k, k).real();
    return e;
}

double energy_of(const DensityOperator& rho, const EnergyObservable& g) { return rho.energy(g); }

double vector_energy(const std::vector<cplx>& psi, const EnergyObservable& g) {
    if (psi.size() != size_t(g.dim())) throw std::invalid_argument("vector_energy: size mismatch");
    double e = 0.0;
    for (int k = 0; k < g.dim(); ++k) e += g.levels[k] * std::norm(psi[k]);
    return e;
}

std::vector<cplx> haar_vector(int d, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<cplx> v(d);
    double s = 0.0;
    for (auto& z : v) {
        z = cplx(n(rng), n(rng));
        s += std::norm(z);
    }
    s = std::sqrt(s);
    for (auto& z : v) z /= s;
    return v;
}

namespace {
// Energy of the tilted, renormalized vector; Eref keeps the exponents tame.
double tilted_energy(const std::vector<cplx>& psi, const EnergyObservable& g, double s,
                     double e_ref) {
    double num = 0.0, den = 0.0;
    for (int k = 0; k < g.dim(); ++k) {
        const double w = std::norm(psi[k]) * std::exp(-2.0 * s * (g.levels[k] - e_ref));
        num += g.levels[k] * w;
        den += w;
    }
    return den > 0.0 ? num / den : 0.0;
}
}  // namespace

std::vector<cplx> tilt_to_energy(std::vector<cplx> psi, const EnergyObservable& g, double target) {
    double lo_level = g.max_level(), hi_level = g.levels.front();
    for (int k = 0; k < g.dim(); ++k)
        if (std::norm(psi[k]) > 0.0) {
            lo_level = std::min(lo_level, g.levels[k]);
            hi_level = std::max(hi_level, g.levels[k]);
        }
    target = std::clamp(target, lo_level, hi_level);
    const double span = std::max(hi_level - lo_level, 1e-12);
    const double e_ref = 0.5 * (lo_level + hi_level);
    const double s_max = 350.0 / span;

    // tilted_energy is strictly decreasing in s
    double lo = -s_max, hi = s_max;
    if (tilted_energy(psi, g, lo, e_ref) < target) {
        hi = lo;
    } else if (tilted_energy(psi, g, hi, e_ref) > target) {
        lo = hi;
    } else {
        for (int it = 0; it < 200 && hi - lo > 1e-15 * s_max; ++it) {
            const double mid = 0.5 * (lo + hi);
            (tilted_energy(psi, g, mid, e_ref) > target ? lo : hi) = mid;
        }
    }
    const double s = 0.5 * (lo + hi);
    double nrm = 0.0;
    for (int k = 0; k < g.dim(); ++k) {
        psi[k] *= std::exp(-s * (g.levels[k] - e_ref));
        nrm += std::norm(psi[k]);
    }
    nrm = std::sqrt(nrm);
    for (auto& z : psi) z /= nrm;
    return psi;
}

std::vector<cplx> retract_constrained(std::vector<cplx> v, const EnergyObservable& g,
                                      double budget) {
    if (v.size() != size_t(g.dim()))
        throw std::invalid_argument("retract_constrained: size mismatch");
    double n2 = 0.0;
    for (const cplx& z : v) n2 += std::norm(z);
    if (n2 <= 0.0) throw std::invalid_argument("retract_constrained: zero vector");
    double n = std::sqrt(n2);
    for (cplx& z : v) z /= n;
    if (vector_energy(v, g) > budget) {
        // give the lowest level a foothold so the tilt can always reach the budget
        if (std::norm(v[0]) < 1e-30) {
            v[0] += 1e-8;
            double m = 0.0;
            for (const cplx& z : v) m += std::norm(z);
            m = std::sqrt(m);
            for (cplx& z : v) z /= m;
        }
        v = tilt_to_energy(std::move(v), g, budget);
    }
    return v;
}

std::vector<cplx> sample_constrained_vector(const EnergyObservable& g, double budget, Rng& rng) {
    if (budget < g.levels.front())
        throw std::invalid_argument("sample_constrained: infeasible budget");
    if (budget <= g.levels.front() + 1e-12) {
        std::vector<cplx> ground(g.dim());
        ground[0] = 1.0;
        return ground;
    }
    std::vector<cplx> psi = haar_vector(g.dim(), rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double cap = std::min(budget, g.max_level());
    const double target = u(rng) < 0.3 ? cap : u(rng) * cap;
    if (vector_energy(psi, g) > budget || u(rng) < 0.6) psi = tilt_to_energy(psi, g, target);
    return psi;
}

DensityOperator sample_constrained(const EnergyObservable& g, double budget, SampleMode mode,
                                   Rng& rng) {
    auto rank_one = [&](const std::vector<cplx>& psi) {
        CMat m(g.dim(), g.dim());
        for (int i = 0; i < g.dim(); ++i)
            for (int j = 0; j < g.dim(); ++j) m(i, j) = psi[i] * std::conj(psi[j]);
        return m;
    };
    if (mode == SampleMode::Pure)
        return DensityOperator(rank_one(sample_constrained_vector(g, budget, rng)));

    std::uniform_int_distribution<int> nc(2, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int parts = nc(rng);
    const bool saturate = u(rng) < 0.3;
    std::vector<double> w(parts);
    double ws = 0.0;
    for (double& x : w) ws += (x = -std::log(u(rng)));
    CMat m(g.dim(), g.dim());
    for (int p = 0; p < parts; ++p) {
        std::vector<cplx> psi = sample_constrained_vector(g, budget, rng);
        if (saturate) psi = tilt_to_energy(psi, g, std::min(budget, g.max_level()));
        CMat r = rank_one(psi);
        r *= cplx(w[p] / ws);
        m += r;
    }
    return DensityOperator(std::move(m));
}

KrausMap pinch_channel(const EnergyObservable& g, double cutoff) {
    if (!g.grounded) throw std::invalid_argument("pinch_channel: observable must be grounded");
    std::vector<CMat> ops;
    ops.push_back(g.spectral_projector(cutoff));
    for (int k = 0; k < g.dim(); ++k) {
        if (g.levels[k] <= cutoff) continue;
        CMat e(g.dim(), g.dim());
        e(0, k) = 1.0;  // |tau_0><tau_k|
        ops.push_back(std::move(e));
    }
    return KrausMap(std::move(ops), MapKind::Channel);
}

std::pair<double, double> pinch_deviation(const DensityOperator& omega, const EnergyObservable& g,
                                          double budget, double cutoff) {
    if (cutoff <= 0.0) throw std::invalid_argument("pinch_deviation: cutoff must be positive");
    const int d_a = g.dim();
    if (omega.dim() % d_a != 0) throw std::invalid_argument("pinch_deviation: dimension mismatch");
    const int d_r = omega.dim() / d_a;
    const KrausMap pin = extend(pinch_channel(g, cutoff), d_r);
    const CMat diff = omega.mat() - apply(pin, omega.mat());
    return {trace_norm(diff), 4.0 * std::sqrt(budget / cutoff)};
}

}  // namespace ecdkit

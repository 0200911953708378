#include "ecdkit/enorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ecdkit {

namespace {

double dual_objective(const CMat& w, const EnergyObservable& g, double budget, double mu) {
    CMat h = w;
    for (int k = 0; k < h.rows(); ++k) h(k, k) -= mu * g.levels[k];
    return std::max(herm_eig_max(h), 0.0) + mu * budget;
}

CMat rank_one(const CMat& u, int col) {
    CMat r(u.rows(), u.rows());
    for (int i = 0; i < u.rows(); ++i)
        for (int j = 0; j < u.rows(); ++j) r(i, j) = u(i, col) * std::conj(u(j, col));
    return r;
}

}  // namespace

SupTraceResult sup_trace_constrained(const CMat& w, const EnergyObservable& g, double budget) {
    if (budget <= 0.0) throw std::invalid_argument("sup_trace_constrained: E must be positive");
    if (!w.square() || w.rows() != g.dim())
        throw std::invalid_argument("sup_trace_constrained: dimension mismatch");

    SupTraceResult res;
    const double w_top = herm_eig_max(w);
    if (w_top <= 0.0) {  // W <= 0 (PSD input means W ~ 0): supremum 0 at the ground state
        res.rho = rank_one(CMat::identity(g.dim()), 0);
        return res;
    }

    // bracket the convex dual h(mu) = [lmax(W - mu G)]_+ + mu E
    double first_pos = g.max_level();
    for (double lv : g.levels)
        if (lv > 0.0) {
            first_pos = lv;
            break;
        }
    double mu_hi = w_top / std::max(budget, first_pos) + 1.0;
    for (int it = 0; it < 200; ++it) {
        if (dual_objective(w, g, budget, 2.0 * mu_hi) > dual_objective(w, g, budget, mu_hi)) break;
        mu_hi *= 2.0;
    }
    mu_hi *= 2.0;

    // golden-section minimization on [0, mu_hi]
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = mu_hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = dual_objective(w, g, budget, x1), f2 = dual_objective(w, g, budget, x2);
    while (b - a > 1e-12 * (1.0 + mu_hi)) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = dual_objective(w, g, budget, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = dual_objective(w, g, budget, x2);
        }
    }
    const double mu = 0.5 * (a + b);
    double dual = std::min({f1, f2, dual_objective(w, g, budget, 0.0)});
    if (dual_objective(w, g, budget, 0.0) <= std::min(f1, f2)) {
        // unconstrained optimum: the energy budget does not bind
        res.mu = 0.0;
    } else {
        res.mu = mu;
    }
    res.value = dual;

    // primal recovery from the near-top eigenspace of W - mu* G
    CMat h = w;
    for (int k = 0; k < h.rows(); ++k) h(k, k) -= res.mu * g.levels[k];
    EigResult eig = herm_eig(h);
    const double lmax = eig.values.back();
    const double window = 1e-5 * (1.0 + std::abs(lmax) + res.mu * (1.0 + budget));

    auto vec_energy = [&](int i) {
        double e = 0.0;
        for (int k = 0; k < g.dim(); ++k) e += g.levels[k] * std::norm(eig.vectors(k, i));
        return e;
    };
    auto vec_w = [&](int i) { return eig.values[i] + res.mu * vec_energy(i); };

    // near-top eigenvectors, always including the top few: near an avoided
    // crossing the optimizer lives in the span of the top two even when their
    // eigenvalues are visibly split at the numerically found mu
    std::vector<int> cand;
    for (int i = g.dim() - 1; i >= 0; --i)
        if (eig.values[i] >= lmax - window || i >= g.dim() - 4) cand.push_back(i);
    if (cand.size() > 12) {
        // keep the top four plus the energies closest to the budget
        std::sort(cand.begin() + 4, cand.end(),
                  [&](int a, int b) { return std::abs(vec_energy(a) - budget) <
                                             std::abs(vec_energy(b) - budget); });
        cand.resize(12);
    }

    double best = 0.0;
    CMat best_rho = rank_one(CMat::identity(g.dim()), 0);
    auto consider_vec = [&](const std::vector<cplx>& psi, double energy, double wval) {
        if (energy <= budget * (1.0 + 1e-12) + 1e-12) {
            if (wval > best) {
                best = wval;
                CMat m(g.dim(), g.dim());
                for (int i = 0; i < g.dim(); ++i)
                    for (int j = 0; j < g.dim(); ++j) m(i, j) = psi[i] * std::conj(psi[j]);
                best_rho = std::move(m);
            }
        } else if (wval > 0.0) {
            const double t = budget / energy;  // subnormalized, saturates the budget
            if (t * wval > best) {
                best = t * wval;
                CMat m(g.dim(), g.dim());
                for (int i = 0; i < g.dim(); ++i)
                    for (int j = 0; j < g.dim(); ++j) m(i, j) = t * psi[i] * std::conj(psi[j]);
                best_rho = std::move(m);
            }
        }
    };
    auto column = [&](int i) {
        std::vector<cplx> v(g.dim());
        for (int k = 0; k < g.dim(); ++k) v[k] = eig.vectors(k, i);
        return v;
    };

    for (int i : cand) consider_vec(column(i), vec_energy(i), vec_w(i));

    // pairwise refinement: solve the two-dimensional subproblem in the span of
    // each candidate pair exactly (diagonalize G there; on the energy boundary
    // the optimal superposition phase is closed-form)
    for (size_t ii = 0; ii < cand.size(); ++ii)
        for (size_t jj = ii + 1; jj < cand.size(); ++jj) {
            const std::vector<cplx> vi = column(cand[ii]), vj = column(cand[jj]);
            auto form = [&](const std::vector<cplx>& x, const CMat& m,
                            const std::vector<cplx>& y) {
                cplx s = 0.0;
                for (int p = 0; p < g.dim(); ++p)
                    for (int q = 0; q < g.dim(); ++q) s += std::conj(x[p]) * m(p, q) * y[q];
                return s;
            };
            CMat g2(2, 2), w2(2, 2);
            const CMat gm = g.matrix();
            g2(0, 0) = form(vi, gm, vi);
            g2(0, 1) = form(vi, gm, vj);
            g2(1, 0) = std::conj(g2(0, 1));
            g2(1, 1) = form(vj, gm, vj);
            w2(0, 0) = form(vi, w, vi);
            w2(0, 1) = form(vi, w, vj);
            w2(1, 0) = std::conj(w2(0, 1));
            w2(1, 1) = form(vj, w, vj);
            EigResult ge = herm_eig(g2);
            const double g_lo = ge.values[0], g_hi = ge.values[1];
            // rotate W into the G-eigenbasis of the span
            CMat wt(2, 2);
            for (int a2 = 0; a2 < 2; ++a2)
                for (int b2 = 0; b2 < 2; ++b2) {
                    cplx s = 0.0;
                    for (int p = 0; p < 2; ++p)
                        for (int q = 0; q < 2; ++q)
                            s += std::conj(ge.vectors(p, a2)) * w2(p, q) * ge.vectors(q, b2);
                    wt(a2, b2) = s;
                }
            auto lift = [&](cplx c0, cplx c1) {
                // coefficients in the G-eigenbasis of the span -> ambient vector
                const cplx a0 = ge.vectors(0, 0) * c0 + ge.vectors(0, 1) * c1;
                const cplx a1 = ge.vectors(1, 0) * c0 + ge.vectors(1, 1) * c1;
                std::vector<cplx> v(g.dim());
                for (int k = 0; k < g.dim(); ++k) v[k] = a0 * vi[k] + a1 * vj[k];
                return v;
            };
            if (g_lo <= budget && budget <= g_hi && g_hi - g_lo > 1e-14) {
                const double a = (g_hi - budget) / (g_hi - g_lo);
                const double cross = std::abs(wt(0, 1));
                const double val = a * wt(0, 0).real() + (1.0 - a) * wt(1, 1).real() +
                                   2.0 * std::sqrt(a * (1.0 - a)) * cross;
                const cplx phase =
                    cross > 0.0 ? std::conj(wt(0, 1)) / cross : cplx(1.0);
                if (val > best)
                    consider_vec(lift(std::sqrt(a), phase * std::sqrt(1.0 - a)), budget, val);
            }
            // interior optima of the span (energy constraint slack)
            EigResult we = herm_eig(wt);
            for (int q = 0; q < 2; ++q) {
                const cplx c0 = we.vectors(0, q), c1 = we.vectors(1, q);
                const double e =
                    g_lo * std::norm(c0) + g_hi * std::norm(c1);
                consider_vec(lift(c0, c1), e, we.values[q]);
            }
            // classical straddling mixture (covers triple degeneracies)
            const double ei = vec_energy(cand[ii]), ej = vec_energy(cand[jj]);
            const double wi = vec_w(cand[ii]), wj = vec_w(cand[jj]);
            if ((ei <= budget) != (ej <= budget)) {
                const double p = (ej - budget) / (ej - ei);
                if (p >= 0.0 && p <= 1.0) {
                    const double val = p * wi + (1.0 - p) * wj;
                    if (val > best) {
                        best = val;
                        CMat lo = rank_one(eig.vectors, cand[ii]);
                        lo *= cplx(p);
                        CMat hi = rank_one(eig.vectors, cand[jj]);
                        hi *= cplx(1.0 - p);
                        best_rho = lo + hi;
                    }
                }
            }
        }

    res.primal = best;
    res.gap = std::abs(res.value - res.primal);
    res.rho = std::move(best_rho);
    return res;
}

ENormCertificate e_norm(const CMat& a, const EnergyObservable& g, double budget) {
    if (budget <= 0.0) throw std::invalid_argument("e_norm: E must be positive");
    if (a.cols() != g.dim()) throw std::invalid_argument("e_norm: dimension mismatch");
    SupTraceResult s = sup_trace_constrained(a.adjoint() * a, g, budget);
    ENormCertificate c;
    c.value = std::sqrt(std::max(s.value, 0.0));
    c.mu = s.mu;
    c.dual_value = s.value;
    c.gap = s.gap;
    c.primal_state = std::move(s.rho);
    return c;
}

double e_norm_graded(const CMat& a, const EnergyObservable& g, double budget) {
    if (budget <= 0.0) throw std::invalid_argument("e_norm_graded: E must be positive");
    if (a.cols() != g.dim()) throw std::invalid_argument("e_norm_graded: dimension mismatch");
    CMat w = a.adjoint() * a;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j)
            w(i, j) /= std::sqrt((1.0 + g.levels[i] / budget) * (1.0 + g.levels[j] / budget));
    return std::sqrt(std::max(herm_eig_max(w), 0.0));
}

namespace {
void check_grid(const std::vector<GridPoint>& grid) {
    if (grid.size() < 50)
        throw std::invalid_argument("transform: grid too coarse (need >= 50 points)");
}
}  // namespace

TransformResult transform_graded_from_enorm(const std::vector<GridPoint>& grid, double budget) {
    check_grid(grid);
    TransformResult r{0.0, 0.0};
    for (const GridPoint& p : grid) {
        const double t = p.energy / budget;
        if (t <= 0.0) continue;
        const double v = p.value / std::sqrt(1.0 + t);
        if (v > r.value) r = {v, t};
    }
    return r;
}

TransformResult transform_enorm_from_graded(const std::vector<GridPoint>& grid, double budget) {
    check_grid(grid);
    TransformResult r{std::numeric_limits<double>::infinity(), 0.0};
    for (const GridPoint& p : grid) {
        const double t = p.energy / budget;
        if (t <= 0.0) continue;
        const double v = p.value * std::sqrt(1.0 + 1.0 / t);
        if (v < r.value) r = {v, t};
    }
    return r;
}

std::vector<GridPoint> g_bound_profile(const CMat& a, const EnergyObservable& g,
                                       const std::vector<double>& e_grid) {
    for (size_t i = 0; i < e_grid.size(); ++i) {
        if (e_grid[i] <= 0.0) throw std::invalid_argument("g_bound_profile: grid must be positive");
        if (i > 0 && e_grid[i] <= e_grid[i - 1])
            throw std::invalid_argument("g_bound_profile: grid not ascending");
    }
    std::vector<GridPoint> rows;
    rows.reserve(e_grid.size());
    for (double e : e_grid) rows.push_back({e, e_norm(a, g, e).value / std::sqrt(e)});
    return rows;
}

double modulus_f(const CMat& a, const EnergyObservable& g, double budget, double eps) {
    if (eps <= 0.0 || eps > 2.0) throw std::invalid_argument("modulus_f: eps outside (0, 2]");
    if (budget <= 0.0) throw std::invalid_argument("modulus_f: E must be positive");
    return eps * e_norm(a, g, 4.0 * budget / (eps * eps)).value;
}

std::pair<double, double> sandwich_product_bound(const CMat& a, const CMat& b,
                                                 const DensityOperator& rho,
                                                 const EnergyObservable& g) {
    const double lhs = trace_norm(a * rho.mat() * b.adjoint());
    const double e_rho = std::max(rho.energy(g), 1e-12);
    const double rhs = e_norm(a, g, e_rho).value * e_norm(b, g, e_rho).value;
    return {lhs, rhs};
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (n < 2 || lo <= 0.0 || hi <= lo) throw std::invalid_argument("log_grid: bad parameters");
    std::vector<double> g(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
    return g;
}

}  // namespace ecdkit

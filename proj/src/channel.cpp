#include "ecdkit/channel.hpp"

#include <cmath>

namespace ecdkit {

KrausMap::KrausMap(std::vector<CMat> o, MapKind k) : ops(std::move(o)), kind(k) {
    if (ops.empty()) throw std::invalid_argument("KrausMap: empty operator list");
    for (const CMat& v : ops)
        if (v.rows() != ops.front().rows() || v.cols() != ops.front().cols())
            throw std::invalid_argument("KrausMap: inconsistent operator shapes");
    if (kind == MapKind::Channel && !is_channel())
        throw std::invalid_argument("KrausMap: channel flag but sum V*V != I");
    if (kind == MapKind::Operation && !is_operation())
        throw std::invalid_argument("KrausMap: operation flag but sum V*V > I");
}

CMat KrausMap::gram() const {
    CMat w(dim_in(), dim_in());
    for (const CMat& v : ops) w += v.adjoint() * v;
    return w;
}

bool KrausMap::is_channel(double tol) const {
    return (gram() - CMat::identity(dim_in())).max_abs() <= tol;
}

bool KrausMap::is_operation(double tol) const {
    return herm_eig_max(gram() - CMat::identity(dim_in())) <= tol;
}

Dilation::Dilation(CMat m, int d_e) : v(std::move(m)), env_dim(d_e) {
    if (d_e < 1 || v.rows() % d_e != 0)
        throw std::invalid_argument("Dilation: rows not divisible by env_dim");
}

bool Dilation::is_isometry(double tol) const {
    return (v.adjoint() * v - CMat::identity(dim_in())).max_abs() <= tol;
}

TwoOperatorMap::TwoOperatorMap(CMat a, CMat b, int d_e) : v1(std::move(a)), v2(std::move(b)), env_dim(d_e) {
    if (v1.rows() != v2.rows() || v1.cols() != v2.cols())
        throw std::invalid_argument("TwoOperatorMap: shape mismatch");
    if (d_e < 1 || v1.rows() % d_e != 0)
        throw std::invalid_argument("TwoOperatorMap: rows not divisible by env_dim");
}

CMat apply(const KrausMap& phi, const CMat& rho) {
    if (rho.rows() != phi.dim_in() || rho.cols() != phi.dim_in())
        throw std::invalid_argument("apply: dimension mismatch");
    CMat out(phi.dim_out(), phi.dim_out());
    for (const CMat& v : phi.ops) out += v * rho * v.adjoint();
    return out;
}

CMat apply_dilation(const Dilation& d, const CMat& rho) {
    if (rho.rows() != d.dim_in() || rho.cols() != d.dim_in())
        throw std::invalid_argument("apply_dilation: dimension mismatch");
    const CMat big = d.v * rho * d.v.adjoint();
    return partial_trace(big, DimSplit{{d.dim_out(), d.env_dim}}, {0});
}

CMat two_op_apply(const TwoOperatorMap& t, const CMat& rho) {
    if (rho.rows() != t.dim_in() || rho.cols() != t.dim_in())
        throw std::invalid_argument("two_op_apply: dimension mismatch");
    const CMat big = t.v1 * rho * t.v2.adjoint();
    return partial_trace(big, DimSplit{{t.dim_out(), t.env_dim}}, {0});
}

Dilation stinespring_from_kraus(const KrausMap& k) {
    const int d_e = int(k.ops.size());
    const int d_b = k.dim_out(), d_a = k.dim_in();
    CMat v(d_b * d_e, d_a);
    for (int e = 0; e < d_e; ++e)
        for (int b = 0; b < d_b; ++b)
            for (int a = 0; a < d_a; ++a) v(b * d_e + e, a) = k.ops[e](b, a);
    return Dilation(std::move(v), d_e);
}

KrausMap kraus_from_stinespring(const Dilation& d, const std::optional<CMat>& env_basis) {
    const int d_e = d.env_dim, d_b = d.dim_out(), d_a = d.dim_in();
    CMat basis = env_basis.value_or(CMat::identity(d_e));
    if (basis.rows() != d_e || basis.cols() != d_e)
        throw std::invalid_argument("kraus_from_stinespring: basis shape mismatch");
    if ((basis.adjoint() * basis - CMat::identity(d_e)).max_abs() > 1e-10)
        throw std::invalid_argument("kraus_from_stinespring: basis not orthonormal");
    std::vector<CMat> ops;
    ops.reserve(d_e);
    for (int k = 0; k < d_e; ++k) {
        CMat vk(d_b, d_a);
        for (int b = 0; b < d_b; ++b)
            for (int a = 0; a < d_a; ++a) {
                cplx s = 0.0;
                for (int e = 0; e < d_e; ++e) s += std::conj(basis(e, k)) * d.v(b * d_e + e, a);
                vk(b, a) = s;
            }
        ops.push_back(std::move(vk));
    }
    return KrausMap(std::move(ops), MapKind::General);
}

KrausMap extend(const KrausMap& phi, int d_r) {
    if (d_r < 1) throw std::invalid_argument("extend: d_r < 1");
    if (d_r == 1) return phi;
    const CMat eye = CMat::identity(d_r);
    std::vector<CMat> ops;
    ops.reserve(phi.ops.size());
    for (const CMat& v : phi.ops) ops.push_back(tensor(v, eye));
    return KrausMap(std::move(ops), phi.kind);
}

KrausMap extend(const Dilation& phi, int d_r) { return extend(kraus_from_stinespring(phi), d_r); }

std::pair<Dilation, Dilation> common_dilations(const KrausMap& phi, const KrausMap& psi) {
    if (phi.dim_in() != psi.dim_in() || phi.dim_out() != psi.dim_out())
        throw std::invalid_argument("common_dilations: dimension mismatch");
    const size_t m = std::max(phi.ops.size(), psi.ops.size());
    auto padded = [&](const KrausMap& k) {
        std::vector<CMat> ops = k.ops;
        while (ops.size() < m) ops.push_back(CMat::zeros(k.dim_out(), k.dim_in()));
        return stinespring_from_kraus(KrausMap(std::move(ops), MapKind::General));
    };
    return {padded(phi), padded(psi)};
}

std::array<Dilation, 4> polarize(const TwoOperatorMap& t) {
    const cplx i(0.0, 1.0);
    CMat p1 = t.v1 + t.v2;
    CMat p2 = t.v1 - t.v2;
    CMat p3 = t.v1 + i * t.v2;
    CMat p4 = t.v1 - i * t.v2;
    return {Dilation(std::move(p1), t.env_dim), Dilation(std::move(p2), t.env_dim),
            Dilation(std::move(p3), t.env_dim), Dilation(std::move(p4), t.env_dim)};
}

std::vector<cplx> apply_extended(const CMat& v, const std::vector<cplx>& psi, int d_r) {
    const int d_a = v.cols();
    if (psi.size() != size_t(d_a) * d_r)
        throw std::invalid_argument("apply_extended: vector size mismatch");
    std::vector<cplx> out(size_t(v.rows()) * d_r);
    for (int o = 0; o < v.rows(); ++o)
        for (int a = 0; a < d_a; ++a) {
            const cplx voa = v(o, a);
            if (voa == 0.0) continue;
            for (int r = 0; r < d_r; ++r) out[size_t(o) * d_r + r] += voa * psi[size_t(a) * d_r + r];
        }
    return out;
}

}  // namespace ecdkit

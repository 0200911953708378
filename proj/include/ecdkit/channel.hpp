#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ecdkit/matcore.hpp"

namespace ecdkit {

enum class MapKind { General, Operation, Channel };

/// Kraus form: rho -> sum_k V_k rho V_k*.
struct KrausMap {
    std::vector<CMat> ops;  // each d_out x d_in
    MapKind kind = MapKind::General;

    KrausMap() = default;
    KrausMap(std::vector<CMat> o, MapKind k = MapKind::General);

    int dim_in() const { return ops.front().cols(); }
    int dim_out() const { return ops.front().rows(); }

    /// sum_k V_k* V_k.
    CMat gram() const;
    bool is_channel(double tol = 1e-10) const;
    bool is_operation(double tol = 1e-10) const;
};

/// Stinespring form: rho -> Tr_E V rho V*, with V mapping into B (x) E and
/// the environment as the fast-varying row index (row = i_B * env_dim + i_E).
struct Dilation {
    CMat v;
    int env_dim = 1;

    Dilation() = default;
    Dilation(CMat m, int d_e);

    int dim_in() const { return v.cols(); }
    int dim_out() const { return v.rows() / env_dim; }
    bool is_isometry(double tol = 1e-10) const;
};

/// rho -> Tr_E V1 rho V2* (Hermitian inputs handled by linearity).
struct TwoOperatorMap {
    CMat v1, v2;
    int env_dim = 1;

    TwoOperatorMap() = default;
    TwoOperatorMap(CMat a, CMat b, int d_e);

    int dim_in() const { return v1.cols(); }
    int dim_out() const { return v1.rows() / env_dim; }
};

CMat apply(const KrausMap& phi, const CMat& rho);
CMat apply_dilation(const Dilation& d, const CMat& rho);
CMat two_op_apply(const TwoOperatorMap& t, const CMat& rho);

/// V|phi> = sum_k V_k|phi> (x) |tau_k>; env_dim = number of Kraus operators.
Dilation stinespring_from_kraus(const KrausMap& k);

/// Slices V_k = (I_B (x) <tau_k|) V for an orthonormal environment basis
/// (columns of env_basis; standard basis when absent).
KrausMap kraus_from_stinespring(const Dilation& d,
                                const std::optional<CMat>& env_basis = std::nullopt);

/// Phi (x) Id_R as a Kraus map with operators V_k (x) I_R.
KrausMap extend(const KrausMap& phi, int d_r);
KrausMap extend(const Dilation& phi, int d_r);

/// Pads the shorter Kraus list with zero operators so both maps share an
/// environment dimension.
std::pair<Dilation, Dilation> common_dilations(const KrausMap& phi, const KrausMap& psi);

/// Four CP dilations with representing operators V1+V2, V1-V2, V1+iV2, V1-iV2;
/// the map equals (Phi1 - Phi2 + i Phi3 - i Phi4)/4.
std::array<Dilation, 4> polarize(const TwoOperatorMap& t);

/// Applies (V (x) I_R) to a vector on A (x) R viewed as a d_A x d_R matrix;
/// the result lives on (B (x) E) (x) R.
std::vector<cplx> apply_extended(const CMat& v, const std::vector<cplx>& psi, int d_r);

}  // namespace ecdkit

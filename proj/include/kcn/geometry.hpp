#pragma once

#include <utility>

#include "kcn/jet.hpp"

namespace kcn {

/// Christoffel symbols of a Levi-Civita connection at a point.
/// gamma is stored as a (1,2) table Gamma^k_{ij}, exactly symmetric in
/// (i,j).  gamma_d, when present, holds the partials d_a Gamma^k_{ij} in a
/// per-coordinate table and requires a 2-jet of the metric.
struct ConnectionData {
    TensorValue gamma;                               // (1,2): [k][i][j]
    std::optional<std::vector<TensorValue>> gamma_d;  // [a] -> (1,2)

    int dim() const { return gamma.dim(); }
    bool has_derivatives() const { return gamma_d.has_value(); }
};

/// Gamma^k_{ij} = g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}) / 2.
/// Computes gamma_d when the metric carries a 2-jet.  Throws SingularMetric.
ConnectionData christoffel(const JetTensor& g, double singular_tol = 1e-12);

/// Covariant derivative of a tensor field.  The result has one extra
/// covariant slot, placed FIRST among the covariant slots:
///   (nabla T)[upper..., a, lower...] = (nabla_{d_a} T)[upper..., lower...].
TensorValue covariant_derivative(const JetTensor& t, const ConnectionData& conn);

/// (d w)_{i0..ip} = sum_k (-1)^k d_{i_k} w_{i0..^i_k..ip}  (value only).
TensorValue exterior_derivative(const JetTensor& omega);

/// Exterior derivative carrying first derivatives; requires a 2-jet input.
JetTensor exterior_derivative_jet(const JetTensor& omega);

/// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i.
TensorValue lie_bracket(const JetTensor& x, const JetTensor& y);

/// Nijenhuis torsion of a (1,1) field on coordinate vector fields,
///   Nij_A(X,Y) = [AX,AY] - A[X,AY] - A[AX,Y] + A^2 [X,Y],
/// returned as a (1,2) table [k][i][j], antisymmetric in (i,j) by
/// construction (the (j,i) entry is written as the negated (i,j) entry).
TensorValue nijenhuis_torsion(const JetTensor& a);

/// Schouten-Nijenhuis bracket of two bivector fields:
///   [P,Q]^{ijk} = sum_{cycl(i,j,k)} (P^{li} d_l Q^{jk} + Q^{li} d_l P^{jk}).
TensorValue schouten_bivector(const JetTensor& p, const JetTensor& q);

/// Riemannian codifferential (delta w)_{i2..ip} = -g^{ab} (nabla_a w)_{b i2..ip}.
TensorValue codifferential(const JetTensor& omega, const TensorValue& g_inv,
                           const ConnectionData& conn);

/// Ricci tensor R_{jl} from the curvature of the connection:
///   R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
///             + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj},
/// contracted on (i,k).  Requires gamma_d (metric 2-jet).
TensorValue ricci(const ConnectionData& conn);

/// Ricci form rho(X,Y) = Ric(JX, Y).
TensorValue ricci_form(const TensorValue& ricci_tensor, const TensorValue& j_value);

}  // namespace kcn

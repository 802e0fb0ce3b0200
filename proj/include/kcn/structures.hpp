#pragma once

#include <string>
#include <vector>

#include "kcn/geometry.hpp"

namespace kcn {

/// A coordinate chart carrying a (pseudo-)Kahler structure defined by
/// component expressions for the metric g and the complex structure J.
/// All evaluation is per-point and pure; charts are immutable and safe to
/// share across threads.
///
/// Derived fields and the matrix identities behind them, with the index
/// conventions of tensor.hpp:
///   Omega = J^T g                (Omega(X,Y) = g(JX,Y))
///   Pi    = -Omega^{-1}          (the unique bivector with
///                                 sharp_Pi o flat_Omega = -Id)
struct KahlerChart {
    int dim = 0;
    std::vector<std::string> coords;
    ExprGrid g_exprs;  // symmetric-filled
    ExprGrid j_exprs;

    JetTensor g_jet(std::span<const double> point) const;
    JetTensor j_jet(std::span<const double> point) const;
    JetTensor g_inverse_jet(std::span<const double> point, double tol = 1e-12) const;
    JetTensor omega_jet(std::span<const double> point) const;
    JetTensor pi_jet(std::span<const double> point, double tol = 1e-12) const;
    ConnectionData connection(std::span<const double> point) const;
};

/// A candidate structure: either a 2-form Theta or a (1,1) field A, given by
/// component expressions; the other object and everything built from the
/// pair are derived per point.  When both grids are supplied, Theta is
/// authoritative and A is only used for the consistency check
/// (Theta(X,Y) = -Omega(AX,Y) = -Omega(X,AY)).
///
/// Matrix forms used throughout (derived from the conventions above):
///   A          = Pi Theta
///   Theta      = -A^T Omega
///   TildeTheta = Theta Pi Theta = -A^T Omega A
///   Psi        = Theta^{-1}        (sharp_Psi = A^{-1} o sharp_Pi)
///   Theta'     = Omega Psi Omega   (flat_Theta' = flat_Omega o sharp_Psi o flat_Omega,
///                                   A^{-1} = Pi Theta')
struct StructureCandidate {
    bool theta_given = false;
    bool a_given = false;
    ExprGrid theta_exprs;  // antisymmetric-filled
    ExprGrid a_exprs;

    static StructureCandidate from_theta(ExprGrid theta);
    static StructureCandidate from_a(ExprGrid a);
    static StructureCandidate from_both(ExprGrid theta, ExprGrid a);

    /// The 2-form with 1-jet (valence (0,2)).
    JetTensor theta_jet(const KahlerChart& chart, std::span<const double> point) const;

    /// The (1,1) field with 1-jet.  When derived from A-expressions given by
    /// the user, Omega-skew-symmetry is the caller's concern (see
    /// omega_skew_residual); when derived from Theta it holds by
    /// construction.
    JetTensor a_jet(const KahlerChart& chart, std::span<const double> point) const;

    /// max |(A^T Omega - Omega A)_{ij}|, the Omega-skew-symmetry defect.
    double omega_skew_residual(const KahlerChart& chart, std::span<const double> point) const;
};

/// TildeTheta via flat_TildeTheta = flat_Theta o sharp_Pi o flat_Theta,
/// cross-checked against -Omega(AX,AY); `route_gap` receives the
/// disagreement of the two routes.
JetTensor tilde_theta(const KahlerChart& chart, const StructureCandidate& cand,
                      std::span<const double> point, double* route_gap = nullptr);

/// The bivector sharp_Pi Theta of characterization 2 (slotwise raising:
/// (sharp_Pi Theta)(a,b) = Theta(sharp_Pi a, sharp_Pi b)).
JetTensor hierarchy_bivector(const KahlerChart& chart, const StructureCandidate& cand,
                             std::span<const double> point);

/// Poisson bivector of the symplectic form Theta, normalized so that
/// sharp_Psi = A^{-1} o sharp_Pi.  Throws SingularEndomorphism where Theta
/// (equivalently A) is degenerate.
JetTensor psi_bivector(const KahlerChart& chart, const StructureCandidate& cand,
                       std::span<const double> point, double tol = 1e-12);

/// Theta' with flat_Theta' = flat_Omega o sharp_Psi o flat_Omega (the form
/// associated with A^{-1}).
JetTensor theta_prime(const KahlerChart& chart, const StructureCandidate& cand,
                      std::span<const double> point, double tol = 1e-12);

/// Split of a 2-covariant tensor into complex types (1,1) and (2,0)+(0,2):
///   P  = (T + T(J.,J.)) / 2,   Ptilde = (T - T(J.,J.)) / 2.
std::pair<TensorValue, TensorValue> projectors(const TensorValue& two_form,
                                               const TensorValue& j_value);

/// E_A(X,Y) = (nabla_X A)(Y),  F_A(X,Y) = (nabla_{AX} A)(Y),
/// B_A = alt(E_A),  C_A = alt(F_A); all (1,2) tables [k][x][y].
struct EFBC {
    TensorValue e, f, b, c;
};
EFBC efbc(const JetTensor& a, const ConnectionData& conn);

enum class ComplexCompatibility { CC, SCC, Neither };

struct Classification {
    ComplexCompatibility kind = ComplexCompatibility::Neither;
    bool zero_endomorphism = false;  // A = 0 counts as c.c. by convention
    double cc_residual = 0.0;        // |AJ - JA| (normalized)
    double scc_residual = 0.0;       // |AJ + JA| (normalized)
};

/// Pointwise test of A J = +/- J A.
Classification classify_cc_scc(const TensorValue& a_value, const TensorValue& j_value,
                               double tol);

const char* to_string(ComplexCompatibility c);

}  // namespace kcn

#include "kcn/structures.hpp"

#include <cmath>

namespace kcn {

JetTensor KahlerChart::g_jet(std::span<const double> point) const {
    return eval_grid(g_exprs, Valence{0, 2}, point);
}

JetTensor KahlerChart::j_jet(std::span<const double> point) const {
    return eval_grid(j_exprs, Valence{1, 1}, point);
}

JetTensor KahlerChart::g_inverse_jet(std::span<const double> point, double tol) const {
    try {
        return jet_mat_inverse(g_jet(point), Valence{2, 0}, tol);
    } catch (const SingularEndomorphism& e) {
        throw SingularMetric("metric is singular at the evaluation point (|det g| = " +
                             std::to_string(e.abs_det) + ")");
    }
}

JetTensor KahlerChart::omega_jet(std::span<const double> point) const {
    JetTensor g = g_jet(point);
    JetTensor j = j_jet(point);
    return jet_mat_mul(jet_mat_transpose(j, Valence{1, 1}), g, Valence{0, 2});
}

JetTensor KahlerChart::pi_jet(std::span<const double> point, double tol) const {
    try {
        return jet_neg(jet_mat_inverse(omega_jet(point), Valence{2, 0}, tol));
    } catch (const SingularEndomorphism& e) {
        throw SingularForm("Kahler form is singular at the evaluation point (|det| = " +
                           std::to_string(e.abs_det) + ")");
    }
}

ConnectionData KahlerChart::connection(std::span<const double> point) const {
    return christoffel(g_jet(point));
}

StructureCandidate StructureCandidate::from_theta(ExprGrid theta) {
    StructureCandidate c;
    c.theta_given = true;
    c.theta_exprs = std::move(theta);
    return c;
}

StructureCandidate StructureCandidate::from_a(ExprGrid a) {
    StructureCandidate c;
    c.a_given = true;
    c.a_exprs = std::move(a);
    return c;
}

StructureCandidate StructureCandidate::from_both(ExprGrid theta, ExprGrid a) {
    StructureCandidate c;
    c.theta_given = true;
    c.a_given = true;
    c.theta_exprs = std::move(theta);
    c.a_exprs = std::move(a);
    return c;
}

JetTensor StructureCandidate::theta_jet(const KahlerChart& chart,
                                        std::span<const double> point) const {
    if (theta_given) return eval_grid(theta_exprs, Valence{0, 2}, point);
    // Theta = -A^T Omega; requires Omega-skew A for antisymmetry.
    JetTensor a = eval_grid(a_exprs, Valence{1, 1}, point);
    JetTensor omega = chart.omega_jet(point);
    JetTensor theta =
        jet_neg(jet_mat_mul(jet_mat_transpose(a, Valence{1, 1}), omega, Valence{0, 2}));
    const int n = chart.dim;
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            asym = std::max(asym, std::abs(theta.value(i, j) + theta.value(j, i)));
    const double scale = std::max(1.0, inf_norm(theta.value));
    if (asym > 1e-8 * scale) throw NotOmegaSkew(asym);
    return theta;
}

JetTensor StructureCandidate::a_jet(const KahlerChart& chart,
                                    std::span<const double> point) const {
    if (a_given && !theta_given) return eval_grid(a_exprs, Valence{1, 1}, point);
    // A = Pi Theta
    JetTensor theta = eval_grid(theta_exprs, Valence{0, 2}, point);
    return jet_mat_mul(chart.pi_jet(point), theta, Valence{1, 1});
}

double StructureCandidate::omega_skew_residual(const KahlerChart& chart,
                                               std::span<const double> point) const {
    // Omega(AX,Y) - Omega(X,AY) = (A^T Omega - Omega A)(X,Y)
    TensorValue a = a_given ? eval_grid_value(a_exprs, Valence{1, 1}, point)
                            : a_jet(chart, point).value;
    TensorValue omega = chart.omega_jet(point).value;
    TensorValue lhs = mat_mul(mat_transpose(a, Valence{1, 1}), omega, Valence{0, 2});
    TensorValue rhs = mat_mul(omega, a, Valence{0, 2});
    return max_abs_diff(lhs, rhs);
}

JetTensor tilde_theta(const KahlerChart& chart, const StructureCandidate& cand,
                      std::span<const double> point, double* route_gap) {
    JetTensor theta = cand.theta_jet(chart, point);
    JetTensor pi = chart.pi_jet(point);
    JetTensor tilde =
        jet_mat_mul(theta, jet_mat_mul(pi, theta, Valence{1, 1}), Valence{0, 2});
    if (route_gap != nullptr) {
        // Cross-check: TildeTheta(X,Y) = -Omega(AX,AY) = -(A^T Omega A)(X,Y).
        JetTensor a = cand.a_jet(chart, point);
        TensorValue omega = chart.omega_jet(point).value;
        TensorValue other = -mat_mul(mat_transpose(a.value, Valence{1, 1}),
                                     mat_mul(omega, a.value, Valence{0, 2}), Valence{0, 2});
        *route_gap = max_abs_diff(tilde.value, other) / std::max(1.0, inf_norm(tilde.value));
    }
    return tilde;
}

JetTensor hierarchy_bivector(const KahlerChart& chart, const StructureCandidate& cand,
                             std::span<const double> point) {
    // (sharp_Pi Theta)^{ij} = Theta(sharp_Pi dx^i, sharp_Pi dx^j)
    //                       = Pi^{ik} Theta_{kl} Pi^{jl}  = (Pi Theta Pi^T)^{ij}
    JetTensor theta = cand.theta_jet(chart, point);
    JetTensor pi = chart.pi_jet(point);
    return jet_mat_mul(jet_mat_mul(pi, theta, Valence{1, 1}),
                       jet_mat_transpose(pi, Valence{2, 0}), Valence{2, 0});
}

JetTensor psi_bivector(const KahlerChart& chart, const StructureCandidate& cand,
                       std::span<const double> point, double tol) {
    JetTensor theta = cand.theta_jet(chart, point);
    return jet_mat_inverse(theta, Valence{2, 0}, tol);
}

JetTensor theta_prime(const KahlerChart& chart, const StructureCandidate& cand,
                      std::span<const double> point, double tol) {
    JetTensor omega = chart.omega_jet(point);
    JetTensor psi = psi_bivector(chart, cand, point, tol);
    return jet_mat_mul(omega, jet_mat_mul(psi, omega, Valence{1, 1}), Valence{0, 2});
}

std::pair<TensorValue, TensorValue> projectors(const TensorValue& two_form,
                                               const TensorValue& j_value) {
    TensorValue twisted = c_operator(two_form, j_value);  // T(J., J.)
    TensorValue p = 0.5 * (two_form + twisted);
    TensorValue ptilde = 0.5 * (two_form - twisted);
    return {std::move(p), std::move(ptilde)};
}

EFBC efbc(const JetTensor& a, const ConnectionData& conn) {
    const int n = a.dim();
    TensorValue grad = covariant_derivative(a, conn);  // (1,2): [k][x][j]
    EFBC out;
    out.e = grad;
    out.f = TensorValue(Valence{1, 2}, n);
    for (int k = 0; k < n; ++k)
        for (int x = 0; x < n; ++x)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int u = 0; u < n; ++u) s += a.value(u, x) * grad(k, u, j);
                out.f(k, x, j) = s;
            }
    out.b = alt12(out.e);
    out.c = alt12(out.f);
    return out;
}

Classification classify_cc_scc(const TensorValue& a_value, const TensorValue& j_value,
                               double tol) {
    TensorValue aj = mat_mul(a_value, j_value, Valence{1, 1});
    TensorValue ja = mat_mul(j_value, a_value, Valence{1, 1});
    const double scale = std::max(1.0, inf_norm(a_value) * inf_norm(j_value));
    Classification c;
    c.cc_residual = max_abs_diff(aj, ja) / scale;
    c.scc_residual = inf_norm(aj + ja) / scale;
    c.zero_endomorphism = inf_norm(a_value) < tol;
    if (c.zero_endomorphism || c.cc_residual < tol)
        c.kind = ComplexCompatibility::CC;
    else if (c.scc_residual < tol)
        c.kind = ComplexCompatibility::SCC;
    else
        c.kind = ComplexCompatibility::Neither;
    return c;
}

const char* to_string(ComplexCompatibility c) {
    switch (c) {
        case ComplexCompatibility::CC:
            return "cc";
        case ComplexCompatibility::SCC:
            return "scc";
        case ComplexCompatibility::Neither:
            return "neither";
    }
    return "neither";
}

}  // namespace kcn

#include "kcn/verdicts.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

namespace kcn {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass:
            return "PASS";
        case Verdict::Fail:
            return "FAIL";
        case Verdict::Mixed:
            return "MIXED";
        case Verdict::NotApplicable:
            return "NOT_APPLICABLE";
        case Verdict::Degenerate:
            return "DEGENERATE";
    }
    return "NOT_APPLICABLE";
}

const std::vector<std::string>& informational_checks() {
    static const std::vector<std::string> names = {"parallel_theta", "parallel_a", "delta_c"};
    return names;
}

namespace {

double normalized(double raw, double scale) { return raw / std::max(1.0, scale); }

double jet_scale(const JetTensor& t) {
    double s = inf_norm(t.value);
    for (const auto& d : t.d) s = std::max(s, inf_norm(d));
    return s;
}

struct Tracker {
    double max_res = 0.0;
    std::vector<double> worst;

    void add(std::span<const double> x, double r) {
        if (worst.empty() || r > max_res) {
            max_res = r;
            worst.assign(x.begin(), x.end());
        }
    }
};

std::string point_str(std::span<const double> x) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out << ", ";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", x[i]);
        out << buf;
    }
    out << ")";
    return out.str();
}

void record_sub(CheckReport& rep, const std::string& name, double r) {
    auto it = rep.sub_residuals.find(name);
    if (it == rep.sub_residuals.end() || r > it->second) rep.sub_residuals[name] = r;
}

// Runs `body` per point, turning evaluation errors into a DEGENERATE
// verdict.  Returns false when the check ended degenerate.
template <typename Body>
bool for_each_point(CheckReport& rep, const SamplePoints& pts, Body&& body) {
    for (const auto& x : pts) {
        try {
            body(x);
        } catch (const SingularEndomorphism&) {
            rep.verdict = Verdict::Degenerate;
            rep.notes.push_back("not in the non-degenerate regime at " + point_str(x));
            return false;
        } catch (const Error& e) {
            rep.verdict = Verdict::Degenerate;
            rep.notes.push_back(std::string("evaluation failed at ") + point_str(x) + ": " +
                                e.what());
            return false;
        }
    }
    return true;
}

void finalize(CheckReport& rep, const Tracker& tr, const SamplePlan& plan) {
    rep.max_residual = tr.max_res;
    rep.worst_point = tr.worst;
    rep.tolerance = plan.tolerance;
    if (rep.verdict == Verdict::Degenerate) return;
    rep.verdict = tr.max_res < plan.tolerance ? Verdict::Pass : Verdict::Fail;
}

// Cyclic sum over the three covariant argument slots of a (0,3) table.
TensorValue cyclic_sum3(const TensorValue& t) {
    const int n = t.dim();
    TensorValue out(Valence{0, 3}, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                out(i, j, k) = t(i, j, k) + t(j, k, i) + t(k, i, j);
    return out;
}

// d Theta residual, normalized.
double closedness_residual(const JetTensor& theta) {
    TensorValue d = exterior_derivative(theta);
    return normalized(inf_norm(d), jet_scale(theta));
}

// Lower the value slot of a (1,2) table with Omega: L_{x y l} = Omega_{k l} T^k_{x y}.
TensorValue lower_value_slot(const TensorValue& t, const TensorValue& omega) {
    const int n = t.dim();
    TensorValue out(Valence{0, 3}, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int l = 0; l < n; ++l) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += omega(k, l) * t(k, x, y);
                out(x, y, l) = s;
            }
    return out;
}

// Apply the type projector to the first two slots of a (0,3) table:
// sign +1 projects onto the J-invariant part, -1 onto the anti-invariant.
TensorValue project_args(const TensorValue& t, const TensorValue& j, int sign) {
    const int n = t.dim();
    TensorValue out(Valence{0, 3}, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int l = 0; l < n; ++l) {
                double twisted = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) twisted += j(a, x) * j(b, y) * t(a, b, l);
                out(x, y, l) = 0.5 * (t(x, y, l) + sign * twisted);
            }
    return out;
}

}  // namespace

SamplePoints draw_samples(const ChartDefinition& def, const SamplePlan& plan) {
    std::mt19937_64 rng(plan.seed);
    auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    SamplePoints pts;
    pts.reserve(plan.count);
    int rejections = 0;
    std::vector<double> x(def.dim);
    while (static_cast<int>(pts.size()) < plan.count) {
        for (int i = 0; i < def.dim; ++i) {
            const auto& [lo, hi] = def.domain[i];
            x[i] = lo + (hi - lo) * unit();
        }
        if (!def.exclusion.empty() &&
            std::abs(def.exclusion.eval(x)) < plan.exclusion_guard) {
            if (++rejections > plan.max_rejections)
                throw Error("sampling exceeded max_rejections; exclusion guard too broad");
            continue;
        }
        pts.push_back(x);
    }
    return pts;
}

CheckReport check_kahler(const KahlerChart& chart, const SamplePoints& pts,
                         const SamplePlan& plan, bool* indefinite) {
    CheckReport rep;
    rep.check = "kahler";
    Tracker tr;
    bool any_indefinite = false;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor g = chart.g_jet(x);
        JetTensor j = chart.j_jet(x);
        const int n = chart.dim;
        const double gs = inf_norm(g.value);
        const double js = inf_norm(j.value);

        TensorValue j2 = mat_mul(j.value, j.value, Valence{1, 1});
        double r_j2 = normalized(inf_norm(j2 + identity_endomorphism(n)), js * js);
        record_sub(rep, "complex_structure", r_j2);

        double asym = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                asym = std::max(asym, std::abs(g.value(a, b) - g.value(b, a)));
        double r_sym = normalized(asym, gs);
        record_sub(rep, "metric_symmetry", r_sym);

        const double abs_det = std::abs(determinant(g.value));
        if (abs_det <= plan.singular_det_tol)
            throw SingularMetric("metric is singular (|det g| = " + std::to_string(abs_det) +
                                 ")");
        auto [emin, emax] = symmetric_eigen_range(g.value);
        if (emin < 0.0) any_indefinite = true;

        // Hermitian invariance g(JX, JY) = g(X, Y): J^T g J = g.
        TensorValue herm =
            mat_mul(mat_transpose(j.value, Valence{1, 1}),
                    mat_mul(g.value, j.value, Valence{0, 2}), Valence{0, 2});
        double r_herm = normalized(max_abs_diff(herm, g.value), gs * std::max(1.0, js * js));
        record_sub(rep, "hermitian", r_herm);

        JetTensor omega = jet_mat_mul(jet_mat_transpose(j, Valence{1, 1}), g, Valence{0, 2});
        double r_domega = normalized(inf_norm(exterior_derivative(omega)), jet_scale(omega));
        record_sub(rep, "omega_closed", r_domega);

        ConnectionData conn = christoffel(g);
        double r_nabla_j = normalized(inf_norm(covariant_derivative(j, conn)), jet_scale(j));
        record_sub(rep, "j_parallel", r_nabla_j);

        tr.add(x, std::max({r_j2, r_sym, r_herm, r_domega, r_nabla_j}));
    });
    if (any_indefinite)
        rep.notes.push_back("metric is indefinite (pseudo-Kahler); accepted");
    if (indefinite != nullptr) *indefinite = any_indefinite;
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_omega_skew(const KahlerChart& chart, const StructureCandidate& cand,
                             const SamplePoints& pts, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "omega_skew";
    Tracker tr;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        TensorValue a = cand.a_given
                            ? eval_grid_value(cand.a_exprs, Valence{1, 1}, x)
                            : cand.a_jet(chart, x).value;
        TensorValue omega = chart.omega_jet(x).value;
        TensorValue lhs = mat_mul(mat_transpose(a, Valence{1, 1}), omega, Valence{0, 2});
        TensorValue rhs = mat_mul(omega, a, Valence{0, 2});
        double r = normalized(max_abs_diff(lhs, rhs),
                              inf_norm(a) * std::max(1.0, inf_norm(omega)));
        tr.add(x, r);
    });
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_property1(const KahlerChart& chart, const StructureCandidate& cand,
                            const SamplePoints& pts, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "property1_nijenhuis";
    Tracker tr;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor theta = cand.theta_jet(chart, x);
        JetTensor a = cand.a_jet(chart, x);
        double r_closed = closedness_residual(theta);
        record_sub(rep, "closedness", r_closed);
        double s = jet_scale(a);
        double r_nij = normalized(inf_norm(nijenhuis_torsion(a)), s * s);
        record_sub(rep, "nijenhuis", r_nij);
        tr.add(x, std::max(r_closed, r_nij));
    });
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_property2(const KahlerChart& chart, const StructureCandidate& cand,
                            const SamplePoints& pts, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "property2_schouten";
    Tracker tr;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor theta = cand.theta_jet(chart, x);
        double r_closed = closedness_residual(theta);
        record_sub(rep, "closedness", r_closed);
        JetTensor psi = hierarchy_bivector(chart, cand, x);
        double s = jet_scale(psi);
        double r_sch = normalized(inf_norm(schouten_bivector(psi, psi)), s * s);
        record_sub(rep, "schouten", r_sch);
        tr.add(x, std::max(r_closed, r_sch));
    });
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_property3(const KahlerChart& chart, const StructureCandidate& cand,
                            const SamplePoints& pts, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "property3_compatibility";
    Tracker tr;
    bool route_verdicts_agree = true;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor theta = cand.theta_jet(chart, x);
        JetTensor a = cand.a_jet(chart, x);
        ConnectionData conn = chart.connection(x);
        TensorValue omega = chart.omega_jet(x).value;
        const int n = chart.dim;

        TensorValue grad_theta = covariant_derivative(theta, conn);  // [a][j][k]
        TensorValue cyc1 = cyclic_sum3(grad_theta);
        double r_closed = normalized(inf_norm(cyc1), jet_scale(theta));
        record_sub(rep, "closedness", r_closed);

        // sum_cycl (nabla_{A d_i} Theta)(d_j, d_k)
        TensorValue twisted(Valence{0, 3}, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s = 0.0;
                    for (int u = 0; u < n; ++u) s += a.value(u, i) * grad_theta(u, j, k);
                    twisted(i, j, k) = s;
                }
        double scale2 = std::max(1.0, jet_scale(a)) * std::max(1.0, jet_scale(theta));
        double r_compat = inf_norm(cyclic_sum3(twisted)) / scale2;
        record_sub(rep, "compatibility", r_compat);

        // Equivalent route through the endomorphism:
        //   sum_cycl Omega[(nabla_X A)(Y), Z]  and  sum_cycl Omega[(nabla_{AX} A)(Y), Z]
        TensorValue grad_a = covariant_derivative(a, conn);  // [k][a][j]
        TensorValue route1(Valence{0, 3}, n), route2(Valence{0, 3}, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double s1 = 0.0, s2 = 0.0;
                    for (int l = 0; l < n; ++l) {
                        s1 += omega(l, k) * grad_a(l, i, j);
                        double inner = 0.0;
                        for (int u = 0; u < n; ++u) inner += a.value(u, i) * grad_a(l, u, j);
                        s2 += omega(l, k) * inner;
                    }
                    route1(i, j, k) = s1;
                    route2(i, j, k) = s2;
                }
        double r_route1 = normalized(inf_norm(cyclic_sum3(route1)),
                                     jet_scale(a) * std::max(1.0, inf_norm(omega)));
        double r_route2 = inf_norm(cyclic_sum3(route2)) /
                          (scale2 * std::max(1.0, inf_norm(omega)));
        record_sub(rep, "closedness_endo_route", r_route1);
        record_sub(rep, "compatibility_endo_route", r_route2);
        if ((r_closed < plan.tolerance) != (r_route1 < plan.tolerance) ||
            (r_compat < plan.tolerance) != (r_route2 < plan.tolerance))
            route_verdicts_agree = false;

        tr.add(x, std::max(r_closed, r_compat));
    });
    if (!route_verdicts_agree)
        rep.defects.push_back(
            "the two equivalent compatibility formulations disagree in verdict");
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_property4(const KahlerChart& chart, const StructureCandidate& cand,
                            const SamplePoints& pts, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "property4_tilde_closed";
    Tracker tr;
    double worst_gap = 0.0;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor theta = cand.theta_jet(chart, x);
        double r_closed = closedness_residual(theta);
        record_sub(rep, "closedness", r_closed);
        double gap = 0.0;
        JetTensor tilde = tilde_theta(chart, cand, x, &gap);
        worst_gap = std::max(worst_gap, gap);
        double r_tilde = normalized(inf_norm(exterior_derivative(tilde)), jet_scale(tilde));
        record_sub(rep, "tilde_closed", r_tilde);
        tr.add(x, std::max(r_closed, r_tilde));
    });
    record_sub(rep, "tilde_route_gap", worst_gap);
    if (worst_gap > 1e-10)
        rep.defects.push_back("the two defining routes for the squared form disagree");
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_delta_c(const KahlerChart& chart, const StructureCandidate& cand,
                          const SamplePoints& pts, const SamplePlan& plan,
                          const std::string& kind) {
    CheckReport rep;
    rep.check = "delta_c";
    rep.tolerance = plan.tolerance;
    if (chart.dim < 4) {
        rep.verdict = Verdict::NotApplicable;
        rep.notes.push_back("requires dim >= 4");
        return rep;
    }
    const bool pure_type = (kind == "cc" || kind == "scc");
    rep.notes.push_back(pure_type ? "plain codifferential form of the criterion"
                                  : "twisted codifferential with the C operator");
    Tracker tr;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor theta = cand.theta_jet(chart, x);
        JetTensor g = chart.g_jet(x);
        TensorValue g_inv = mat_inverse(g.value, Valence{2, 0}, plan.singular_det_tol);
        ConnectionData conn = christoffel(g);
        JetTensor sq = jet_wedge(theta, theta);

        TensorValue lhs, rhs;
        if (pure_type) {
            lhs = codifferential(sq, g_inv, conn);
            TensorValue dtheta = codifferential(theta, g_inv, conn);
            rhs = 2.0 * wedge(dtheta, theta.value);
        } else {
            JetTensor j = chart.j_jet(x);
            JetTensor csq = jet_c_operator(sq, j);
            lhs = c_operator(codifferential(csq, g_inv, conn), j.value);
            JetTensor ctheta = jet_c_operator(theta, j);
            TensorValue delta_c_theta =
                c_operator(codifferential(ctheta, g_inv, conn), j.value);
            rhs = 2.0 * wedge(delta_c_theta, theta.value);
        }
        double r = normalized(max_abs_diff(lhs, rhs),
                              std::max(inf_norm(lhs), inf_norm(rhs)));
        tr.add(x, r);
    });
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_prop11(const KahlerChart& chart, const StructureCandidate& cand,
                         const SamplePoints& pts, const SamplePlan& plan,
                         const std::string& kind) {
    CheckReport rep;
    rep.check = "prop11_projectors";
    rep.tolerance = plan.tolerance;
    if (kind != "cc" && kind != "scc") {
        rep.verdict = Verdict::NotApplicable;
        rep.notes.push_back("candidate is neither c.c. nor s.c.c.");
        return rep;
    }
    const bool cc = kind == "cc";
    Tracker tr;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor a = cand.a_jet(chart, x);
        ConnectionData conn = chart.connection(x);
        TensorValue omega = chart.omega_jet(x).value;
        TensorValue j = chart.j_jet(x).value;
        EFBC t = efbc(a, conn);
        const double scale = std::max(1.0, jet_scale(a)) * std::max(1.0, jet_scale(a));

        double r_point = 0.0;
        if (cc) {
            // Vanishing of the anti-invariant part of B_A and C_A.
            double rb = inf_norm(project_args(lower_value_slot(t.b, omega), j, -1)) / scale;
            double rc = inf_norm(project_args(lower_value_slot(t.c, omega), j, -1)) / scale;
            record_sub(rep, "anti_invariant_b", rb);
            record_sub(rep, "anti_invariant_c", rc);
            r_point = std::max(rb, rc);
        } else {
            double re = inf_norm(project_args(lower_value_slot(t.e, omega), j, +1)) / scale;
            double rf = inf_norm(project_args(lower_value_slot(t.f, omega), j, +1)) / scale;
            record_sub(rep, "invariant_e", re);
            record_sub(rep, "invariant_f", rf);

            // Compatibility conditions on complexified (1,0) coordinate
            // triples Z_a = d_a - i J d_a, split into real and imaginary
            // residuals.
            const int n = chart.dim;
            TensorValue grad_a = covariant_derivative(a, conn);
            TensorValue s1(Valence{0, 3}, n), s2(Valence{0, 3}, n);
            for (int i = 0; i < n; ++i)
                for (int jj = 0; jj < n; ++jj)
                    for (int k = 0; k < n; ++k) {
                        double v1 = 0.0, v2 = 0.0;
                        for (int l = 0; l < n; ++l) {
                            v1 += omega(l, k) * grad_a(l, i, jj);
                            double inner = 0.0;
                            for (int u = 0; u < n; ++u)
                                inner += a.value(u, i) * grad_a(l, u, jj);
                            v2 += omega(l, k) * inner;
                        }
                        s1(i, jj, k) = v1;
                        s2(i, jj, k) = v2;
                    }
            TensorValue c1 = cyclic_sum3(s1), c2 = cyclic_sum3(s2);
            using C = std::complex<double>;
            double r_complex = 0.0;
            for (int aa = 0; aa < n; ++aa)
                for (int bb = 0; bb < n; ++bb)
                    for (int cci = 0; cci < n; ++cci) {
                        C v1(0, 0), v2(0, 0);
                        for (int p = 0; p < n; ++p) {
                            C zp(double(p == aa), -j(p, aa));
                            if (zp == C(0, 0)) continue;
                            for (int q = 0; q < n; ++q) {
                                C zq(double(q == bb), -j(q, bb));
                                if (zq == C(0, 0)) continue;
                                for (int r = 0; r < n; ++r) {
                                    C zr(double(r == cci), -j(r, cci));
                                    if (zr == C(0, 0)) continue;
                                    C w = zp * zq * zr;
                                    v1 += c1(p, q, r) * w;
                                    v2 += c2(p, q, r) * w;
                                }
                            }
                        }
                        r_complex = std::max(
                            r_complex, std::max(std::abs(v1), std::abs(v2)) / scale);
                    }
            record_sub(rep, "complex_triples", r_complex);
            r_point = std::max({re, rf, r_complex});
        }
        tr.add(x, r_point);
    });
    finalize(rep, tr, plan);
    return rep;
}

namespace {

CheckReport parallel_check(const char* name, const KahlerChart& chart,
                           const StructureCandidate& cand, const SamplePoints& pts,
                           const SamplePlan& plan, bool use_theta) {
    CheckReport rep;
    rep.check = name;
    Tracker tr;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor t = use_theta ? cand.theta_jet(chart, x) : cand.a_jet(chart, x);
        ConnectionData conn = chart.connection(x);
        double r = normalized(inf_norm(covariant_derivative(t, conn)), inf_norm(t.value));
        tr.add(x, r);
    });
    finalize(rep, tr, plan);
    return rep;
}

}  // namespace

CheckReport check_parallel_theta(const KahlerChart& chart, const StructureCandidate& cand,
                                 const SamplePoints& pts, const SamplePlan& plan) {
    return parallel_check("parallel_theta", chart, cand, pts, plan, true);
}

CheckReport check_parallel_a(const KahlerChart& chart, const StructureCandidate& cand,
                             const SamplePoints& pts, const SamplePlan& plan) {
    return parallel_check("parallel_a", chart, cand, pts, plan, false);
}

CheckReport check_poisson_compatibility(const KahlerChart& chart,
                                        const StructureCandidate& cand,
                                        const SamplePoints& pts, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "poisson_compatibility";
    rep.tolerance = plan.tolerance;
    Tracker tr;
    bool not_closed = false;
    double self_check = 0.0;
    bool completed = for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor theta = cand.theta_jet(chart, x);
        JetTensor a = cand.a_jet(chart, x);
        const double abs_det = std::abs(determinant(a.value));
        if (abs_det <= plan.singular_det_tol) throw SingularEndomorphism(abs_det);
        if (closedness_residual(theta) >= plan.tolerance) {
            not_closed = true;
            return;
        }

        JetTensor pi = chart.pi_jet(x);
        JetTensor psi = jet_mat_inverse(theta, Valence{2, 0}, plan.singular_det_tol);
        double s = std::max(1.0, jet_scale(pi)) * std::max(1.0, jet_scale(psi));
        double r = inf_norm(schouten_bivector(pi, psi)) / s;
        record_sub(rep, "schouten_pi_psi", r);

        // sharp_Psi = A^{-1} o sharp_Pi: as covector-to-vector matrices
        // Psi^T = A^{-1} Pi^T.
        TensorValue lhs = mat_transpose(psi.value, Valence{2, 0});
        TensorValue a_inv = invert_endomorphism(a.value, plan.singular_det_tol);
        TensorValue rhs =
            mat_mul(a_inv, mat_transpose(pi.value, Valence{2, 0}), Valence{2, 0});
        self_check = std::max(
            self_check, normalized(max_abs_diff(lhs, rhs), inf_norm(psi.value)));
        tr.add(x, r);
    });
    record_sub(rep, "musical_factorization", self_check);
    if (self_check > 1e-9)
        rep.defects.push_back("Poisson bivector of theta does not factor through A^{-1}");
    if (completed && not_closed) {
        rep.verdict = Verdict::NotApplicable;
        rep.notes.push_back("requires a closed theta");
        rep.max_residual = tr.max_res;
        rep.worst_point = tr.worst;
        return rep;
    }
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_inverse_closed(const KahlerChart& chart, const StructureCandidate& cand,
                                 const SamplePoints& pts, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "inverse_closed";
    rep.tolerance = plan.tolerance;
    Tracker tr;
    double self_check = 0.0;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor theta = cand.theta_jet(chart, x);
        JetTensor a = cand.a_jet(chart, x);
        const double abs_det = std::abs(determinant(a.value));
        if (abs_det <= plan.singular_det_tol) throw SingularEndomorphism(abs_det);

        double r_closed = closedness_residual(theta);
        record_sub(rep, "theta_closed", r_closed);
        JetTensor tp = theta_prime(chart, cand, x, plan.singular_det_tol);
        double r_prime = normalized(inf_norm(exterior_derivative(tp)), jet_scale(tp));
        record_sub(rep, "theta_prime_closed", r_prime);

        // A^{-1} = sharp_Pi o flat_Theta' = Pi Theta'.
        TensorValue a_inv = invert_endomorphism(a.value, plan.singular_det_tol);
        TensorValue via_prime =
            mat_mul(chart.pi_jet(x).value, tp.value, Valence{1, 1});
        self_check = std::max(
            self_check, normalized(max_abs_diff(a_inv, via_prime), inf_norm(a_inv)));
        tr.add(x, std::max(r_closed, r_prime));
    });
    record_sub(rep, "inverse_factorization", self_check);
    if (self_check > 1e-9)
        rep.defects.push_back("theta' does not reproduce A^{-1} through the musical maps");
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_orthogonal_product(const KahlerChart& chart, const StructureCandidate& cand,
                                     const SamplePoints& pts, const SamplePlan& plan,
                                     const std::string& kind) {
    CheckReport rep;
    rep.check = "orthogonal_product";
    rep.tolerance = plan.tolerance;
    if (kind != "cc") {
        rep.verdict = Verdict::NotApplicable;
        rep.notes.push_back("requires a c.c. candidate");
        return rep;
    }
    // Applicability: A^2 = Id and g(AX, AY) = g(X, Y) at every sample.
    double r_invol = 0.0, r_orth = 0.0;
    CheckReport probe;
    bool ok = for_each_point(probe, pts, [&](const std::vector<double>& x) {
        TensorValue a = cand.a_jet(chart, x).value;
        TensorValue g = chart.g_jet(x).value;
        const int n = chart.dim;
        r_invol = std::max(r_invol,
                           normalized(inf_norm(mat_mul(a, a, Valence{1, 1}) -
                                               identity_endomorphism(n)),
                                      inf_norm(a) * inf_norm(a)));
        TensorValue pulled = mat_mul(mat_transpose(a, Valence{1, 1}),
                                     mat_mul(g, a, Valence{0, 2}), Valence{0, 2});
        r_orth = std::max(r_orth, normalized(max_abs_diff(pulled, g), inf_norm(g)));
    });
    if (!ok || r_invol >= plan.tolerance || r_orth >= plan.tolerance) {
        rep.verdict = Verdict::NotApplicable;
        rep.notes.push_back("not an orthogonal almost product structure");
        record_sub(rep, "involution", r_invol);
        record_sub(rep, "orthogonality", r_orth);
        return rep;
    }
    record_sub(rep, "involution", r_invol);
    record_sub(rep, "orthogonality", r_orth);

    Tracker tr;
    bool closed_everywhere = true;
    double r_nij_max = 0.0;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor theta = cand.theta_jet(chart, x);
        double r_closed = closedness_residual(theta);
        record_sub(rep, "closedness", r_closed);
        if (r_closed >= plan.tolerance) closed_everywhere = false;
        JetTensor a = cand.a_jet(chart, x);
        double s = jet_scale(a);
        r_nij_max = std::max(r_nij_max,
                             normalized(inf_norm(nijenhuis_torsion(a)), s * s));
        tr.add(x, r_closed);
    });
    record_sub(rep, "nijenhuis", r_nij_max);
    if (closed_everywhere && r_nij_max >= plan.tolerance)
        rep.defects.push_back(
            "closed theta with a non-integrable orthogonal product structure");
    finalize(rep, tr, plan);
    return rep;
}

CheckReport check_rank_analysis(const KahlerChart& chart, const StructureCandidate& cand,
                                const SamplePoints& pts, const SamplePlan& plan,
                                const std::string& kind) {
    CheckReport rep;
    rep.check = "rank_analysis";
    rep.tolerance = plan.tolerance;
    Tracker tr;
    int rank_min = -1, rank_max = -1;
    const bool pure_type = (kind == "cc" || kind == "scc");
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        TensorValue a = cand.a_jet(chart, x).value;
        TensorValue theta = cand.theta_jet(chart, x).value;
        TensorValue g = chart.g_jet(x).value;
        TensorValue j = chart.j_jet(x).value;
        const int n = chart.dim;
        RankDecomposition da = rank_with_kernel(a, plan.tolerance);
        RankDecomposition dt = rank_with_kernel(theta, plan.tolerance);
        if (rank_min < 0) rank_min = rank_max = da.rank;
        rank_min = std::min(rank_min, da.rank);
        rank_max = std::max(rank_max, da.rank);

        // ker A = ker Theta by mutual containment.
        double r_ker = 0.0;
        for (const auto& v : da.kernel) {
            double norm = 0.0;
            for (int jj = 0; jj < n; ++jj) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += theta(i, jj) * v[i];
                norm = std::max(norm, std::abs(s));
            }
            r_ker = std::max(r_ker, normalized(norm, inf_norm(theta)));
        }
        for (const auto& v : dt.kernel) {
            double norm = 0.0;
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int jj = 0; jj < n; ++jj) s += a(i, jj) * v[jj];
                norm = std::max(norm, std::abs(s));
            }
            r_ker = std::max(r_ker, normalized(norm, inf_norm(a)));
        }
        record_sub(rep, "kernel_match", r_ker);
        double r_point = r_ker;

        if (pure_type) {
            // J-invariance of im A.
            double r_jinv = 0.0;
            for (const auto& u : da.image) {
                std::vector<double> ju(n, 0.0);
                for (int i = 0; i < n; ++i)
                    for (int jj = 0; jj < n; ++jj) ju[i] += j(i, jj) * u[jj];
                for (const auto& b : da.image) {
                    double dot = 0.0;
                    for (int i = 0; i < n; ++i) dot += ju[i] * b[i];
                    for (int i = 0; i < n; ++i) ju[i] -= dot * b[i];
                }
                double rem = 0.0;
                for (double v : ju) rem = std::max(rem, std::abs(v));
                r_jinv = std::max(r_jinv, rem);
            }
            record_sub(rep, "image_j_invariant", r_jinv);

            // ker A is g-orthogonal to im A.
            double r_perp = 0.0;
            for (const auto& v : da.kernel)
                for (const auto& u : da.image) {
                    double s = 0.0;
                    for (int i = 0; i < n; ++i)
                        for (int jj = 0; jj < n; ++jj) s += g(i, jj) * v[i] * u[jj];
                    r_perp = std::max(r_perp, normalized(std::abs(s), inf_norm(g)));
                }
            record_sub(rep, "kernel_orthogonal_image", r_perp);
            r_point = std::max({r_point, r_jinv, r_perp});
        }
        tr.add(x, r_point);
    });
    const bool regular = rank_min == rank_max;
    rep.notes.push_back(regular
                            ? "rank " + std::to_string(rank_max) + " at all samples (REGULAR)"
                            : "rank varies between " + std::to_string(rank_min) + " and " +
                                  std::to_string(rank_max) + " (not regular)");
    rep.sub_residuals["rank"] = rank_max;
    finalize(rep, tr, plan);
    if (!regular && rep.verdict == Verdict::Pass) rep.verdict = Verdict::Mixed;
    return rep;
}

CheckReport check_remark21(const KahlerChart& chart, const StructureCandidate& cand,
                           const SamplePoints& pts, const SamplePlan& plan,
                           const std::string& kind) {
    CheckReport rep;
    rep.check = "remark21";
    rep.tolerance = plan.tolerance;
    if (kind != "cc") {
        rep.verdict = Verdict::NotApplicable;
        rep.notes.push_back("requires a c.c. candidate");
        return rep;
    }
    Tracker tr;
    for_each_point(rep, pts, [&](const std::vector<double>& x) {
        JetTensor a = cand.a_jet(chart, x);
        const double abs_det = std::abs(determinant(a.value));
        if (abs_det <= plan.singular_det_tol) throw SingularEndomorphism(abs_det);
        ConnectionData conn = chart.connection(x);
        JetTensor a_inv = jet_mat_inverse(a, Valence{1, 1}, plan.singular_det_tol);
        EFBC ta = efbc(a, conn);
        EFBC tinv = efbc(a_inv, conn);
        TensorValue nij = nijenhuis_torsion(a);
        const int n = chart.dim;

        // B_{A^{-1}}(AX, AY) as a (1,2) table.
        TensorValue binv_aa(Valence{1, 2}, n);
        for (int k = 0; k < n; ++k)
            for (int xx = 0; xx < n; ++xx)
                for (int yy = 0; yy < n; ++yy) {
                    double s = 0.0;
                    for (int u = 0; u < n; ++u)
                        for (int v = 0; v < n; ++v)
                            s += tinv.b(k, u, v) * a.value(u, xx) * a.value(v, yy);
                    binv_aa(k, xx, yy) = s;
                }

        // Identity (i): C_A(X,Y) + A(B_{A^{-1}}(AX, AY)) = 0.
        TensorValue id1(Valence{1, 2}, n);
        for (int k = 0; k < n; ++k)
            for (int xx = 0; xx < n; ++xx)
                for (int yy = 0; yy < n; ++yy) {
                    double s = ta.c(k, xx, yy);
                    for (int m = 0; m < n; ++m) s += a.value(k, m) * binv_aa(m, xx, yy);
                    id1(k, xx, yy) = s;
                }
        double scale1 = std::max(1.0, inf_norm(ta.c)) + std::max(1.0, inf_norm(binv_aa));
        double r1 = inf_norm(id1) / scale1;
        record_sub(rep, "inverse_alternation", r1);

        // Identity (ii): A^{-1} Nij_A(X,Y) + 2 [B_{A^{-1}}(AX,AY) + B_A(X,Y)] = 0.
        TensorValue id2(Valence{1, 2}, n);
        for (int k = 0; k < n; ++k)
            for (int xx = 0; xx < n; ++xx)
                for (int yy = 0; yy < n; ++yy) {
                    double s = 2.0 * (binv_aa(k, xx, yy) + ta.b(k, xx, yy));
                    for (int m = 0; m < n; ++m) s += a_inv.value(k, m) * nij(m, xx, yy);
                    id2(k, xx, yy) = s;
                }
        double scale2 = std::max(1.0, inf_norm(nij) * inf_norm(a_inv.value)) +
                        std::max(1.0, inf_norm(binv_aa) + inf_norm(ta.b));
        double r2 = inf_norm(id2) / scale2;
        record_sub(rep, "torsion_decomposition", r2);

        tr.add(x, std::max(r1, r2));
    });
    finalize(rep, tr, plan);
    return rep;
}

std::string classify_candidate(const KahlerChart& chart, const StructureCandidate& cand,
                               const SamplePoints& pts, const SamplePlan& plan,
                               bool* zero_endomorphism) {
    bool first = true;
    bool all_zero = true;
    ComplexCompatibility kind = ComplexCompatibility::Neither;
    for (const auto& x : pts) {
        Classification c;
        try {
            c = classify_cc_scc(cand.a_jet(chart, x).value, chart.j_jet(x).value,
                                plan.tolerance);
        } catch (const Error&) {
            return "mixed";
        }
        all_zero = all_zero && c.zero_endomorphism;
        if (first) {
            kind = c.kind;
            first = false;
        } else if (c.kind != kind) {
            if (zero_endomorphism != nullptr) *zero_endomorphism = false;
            return "mixed";
        }
    }
    if (zero_endomorphism != nullptr) *zero_endomorphism = all_zero;
    return to_string(kind);
}

namespace {

bool suite_wants(const std::string& suite, const std::string& check) {
    if (suite == "kahler") return check == "kahler";
    if (suite == "rank")
        return check == "kahler" || check == "omega_skew" || check == "rank_analysis";
    if (suite == "remark21")
        return check == "kahler" || check == "omega_skew" || check == "remark21";
    if (suite == "kcn") {
        static const std::vector<std::string> kcn_checks = {
            "kahler",          "omega_skew",       "property1_nijenhuis",
            "property2_schouten", "property3_compatibility", "property4_tilde_closed",
            "delta_c",         "prop11_projectors", "parallel_theta",
            "parallel_a"};
        return std::find(kcn_checks.begin(), kcn_checks.end(), check) != kcn_checks.end();
    }
    return true;  // all
}

Verdict sub_verdict(const CheckReport& rep, const std::string& sub, double tol) {
    if (rep.verdict == Verdict::Degenerate || rep.verdict == Verdict::NotApplicable)
        return rep.verdict;
    auto it = rep.sub_residuals.find(sub);
    if (it == rep.sub_residuals.end()) return Verdict::NotApplicable;
    return it->second < tol ? Verdict::Pass : Verdict::Fail;
}

}  // namespace

const CheckReport* SuiteReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.check == name) return &c;
    return nullptr;
}

SuiteReport run_suite(const ChartDefinition& def, const SamplePlan& plan,
                      const std::string& suite) {
    if (suite != "all" && suite != "kcn" && suite != "kahler" && suite != "rank" &&
        suite != "remark21")
        throw DefinitionError("unknown suite `" + suite + "`");

    SuiteReport report;
    report.manifold = def.name;
    report.dim = def.dim;
    report.suite = suite;
    report.samples = plan.count;
    report.seed = plan.seed;
    report.tolerance = plan.tolerance;

    KahlerChart chart = def.to_chart();
    SamplePoints pts = draw_samples(def, plan);

    bool indefinite = false;
    report.checks.push_back(check_kahler(chart, pts, plan, &indefinite));
    report.metric_indefinite = indefinite;

    const bool needs_candidate = suite != "kahler";
    if (!needs_candidate) return report;
    if (!def.has_candidate())
        throw DefinitionError("suite `" + suite + "` requires a candidate (theta or A)");
    StructureCandidate cand = def.to_candidate();

    // When both theta and A were supplied, theta stays authoritative; the
    // two must agree through Theta(X,Y) = -Omega(AX,Y) at every sample.
    if (cand.theta_given && cand.a_given) {
        for (const auto& x : pts) {
            TensorValue theta = eval_grid_value(cand.theta_exprs, Valence{0, 2}, x);
            TensorValue a = eval_grid_value(cand.a_exprs, Valence{1, 1}, x);
            TensorValue omega = chart.omega_jet(x).value;
            TensorValue derived =
                -mat_mul(mat_transpose(a, Valence{1, 1}), omega, Valence{0, 2});
            if (normalized(max_abs_diff(theta, derived), inf_norm(theta)) > 1e-9)
                throw DefinitionError(
                    "theta and A components are inconsistent at " + point_str(x) +
                    "; they must satisfy Theta(X,Y) = -Omega(AX,Y)");
        }
    }

    bool zero_a = false;
    report.classification = classify_candidate(chart, cand, pts, plan, &zero_a);
    report.classification_zero_a = zero_a;
    const std::string& kind = report.classification;

    report.checks.push_back(check_omega_skew(chart, cand, pts, plan));
    if (suite_wants(suite, "property1_nijenhuis")) {
        report.checks.push_back(check_property1(chart, cand, pts, plan));
        report.checks.push_back(check_property2(chart, cand, pts, plan));
        report.checks.push_back(check_property3(chart, cand, pts, plan));
        report.checks.push_back(check_property4(chart, cand, pts, plan));
        report.checks.push_back(check_delta_c(chart, cand, pts, plan, kind));
        report.checks.push_back(check_prop11(chart, cand, pts, plan, kind));
        report.checks.push_back(check_parallel_theta(chart, cand, pts, plan));
        report.checks.push_back(check_parallel_a(chart, cand, pts, plan));
    }
    if (suite_wants(suite, "poisson_compatibility")) {
        report.checks.push_back(check_poisson_compatibility(chart, cand, pts, plan));
        report.checks.push_back(check_inverse_closed(chart, cand, pts, plan));
        report.checks.push_back(check_orthogonal_product(chart, cand, pts, plan, kind));
    }
    if (suite_wants(suite, "rank_analysis"))
        report.checks.push_back(check_rank_analysis(chart, cand, pts, plan, kind));
    if (suite_wants(suite, "remark21"))
        report.checks.push_back(check_remark21(chart, cand, pts, plan, kind));

    // Aggregate K.c.N. verdict: closedness plus the four characterizations.
    const CheckReport* p3 = report.find("property3_compatibility");
    if (p3 != nullptr) {
        Verdict closed = sub_verdict(*p3, "closedness", plan.tolerance);
        report.closedness = to_string(closed);
        const CheckReport* chars[] = {report.find("property1_nijenhuis"),
                                      report.find("property2_schouten"), p3,
                                      report.find("property4_tilde_closed")};
        Verdict agg = Verdict::Pass;
        for (const auto* c : chars) {
            if (c == nullptr) continue;
            if (c->verdict == Verdict::Degenerate) {
                agg = Verdict::Degenerate;
                break;
            }
            if (c->verdict != Verdict::Pass) agg = Verdict::Fail;
        }
        if (closed != Verdict::Pass && agg == Verdict::Pass) agg = Verdict::Fail;
        report.kcn = to_string(agg);

        // AGREEMENT: for a closed candidate the four characterizations are
        // equivalent; numerical disagreement is an engine defect.
        if (closed == Verdict::Pass && agg != Verdict::Degenerate) {
            Verdict v1 = sub_verdict(*report.find("property1_nijenhuis"), "nijenhuis",
                                     plan.tolerance);
            Verdict v2 = sub_verdict(*report.find("property2_schouten"), "schouten",
                                     plan.tolerance);
            Verdict v3 = sub_verdict(*p3, "compatibility", plan.tolerance);
            Verdict v4 = sub_verdict(*report.find("property4_tilde_closed"), "tilde_closed",
                                     plan.tolerance);
            if (!(v1 == v2 && v2 == v3 && v3 == v4)) {
                report.agreement.consistent = false;
                report.agreement.violations.push_back(
                    std::string("characterizations disagree on a closed candidate: ") +
                    "nijenhuis=" + to_string(v1) + " schouten=" + to_string(v2) +
                    " compatibility=" + to_string(v3) + " tilde=" + to_string(v4));
            }
        }

        // The projector criterion must match the compatibility conditions.
        const CheckReport* p11 = report.find("prop11_projectors");
        if (p11 != nullptr && p11->verdict != Verdict::NotApplicable &&
            p11->verdict != Verdict::Degenerate && p3->verdict != Verdict::Degenerate &&
            p11->verdict != p3->verdict) {
            report.agreement.consistent = false;
            report.agreement.violations.push_back(
                std::string("projector criterion disagrees with the compatibility "
                            "conditions: ") +
                to_string(p11->verdict) + " vs " + to_string(p3->verdict));
        }

        // Non-degenerate candidates: the two symplectic-inverse criteria
        // must match the aggregate verdict.
        for (const char* name : {"poisson_compatibility", "inverse_closed"}) {
            const CheckReport* c = report.find(name);
            if (c == nullptr || c->verdict == Verdict::NotApplicable ||
                c->verdict == Verdict::Degenerate)
                continue;
            if (agg == Verdict::Degenerate) continue;
            if (to_string(c->verdict) != report.kcn) {
                report.agreement.consistent = false;
                report.agreement.violations.push_back(
                    std::string(name) + " disagrees with the aggregate verdict: " +
                    to_string(c->verdict) + " vs " + report.kcn);
            }
        }
    }

    // Internal defects recorded by individual checks are engine errors.
    for (const auto& c : report.checks)
        for (const auto& d : c.defects) {
            report.agreement.consistent = false;
            report.agreement.violations.push_back(c.check + ": " + d);
        }
    return report;
}

int exit_code(const SuiteReport& report) {
    if (!report.agreement.consistent) return 3;
    const auto& info = informational_checks();
    for (const auto& c : report.checks) {
        if (std::find(info.begin(), info.end(), c.check) != info.end()) continue;
        if (c.verdict == Verdict::Fail || c.verdict == Verdict::Mixed) return 1;
    }
    if (report.kcn == "FAIL") return 1;
    return 0;
}

int exit_code_regression(const SuiteReport& report, const BuiltinEntry& entry,
                         std::vector<std::string>* mismatches) {
    if (!report.agreement.consistent) return 3;
    std::vector<std::string> local;
    auto note = [&](const std::string& m) {
        local.push_back(m);
        if (mismatches != nullptr) mismatches->push_back(m);
    };
    if (report.classification != entry.expected_classification)
        note("classification: expected " + entry.expected_classification + ", got " +
             report.classification);
    if (!entry.expected_kcn.empty() && report.kcn != entry.expected_kcn &&
        report.kcn != "NOT_APPLICABLE")
        note("kcn: expected " + entry.expected_kcn + ", got " + report.kcn);
    for (const auto& [check, expected] : entry.expectations) {
        const CheckReport* c = report.find(check);
        if (c == nullptr) continue;  // not part of this suite
        if (to_string(c->verdict) != expected)
            note(check + ": expected " + expected + ", got " + to_string(c->verdict));
    }
    return local.empty() ? 0 : 1;
}

}  // namespace kcn

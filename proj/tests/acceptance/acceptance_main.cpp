// Acceptance suite: every release criterion is pinned here at its stated
// tolerance; the binary prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kcn/report.hpp"
#include "kcn/verdicts.hpp"
#include "../support/oracles.hpp"
#include "../support/random_candidates.hpp"

using namespace kcn;

namespace {

int g_failures = 0;
std::vector<std::string> g_messages;

void expect(bool ok, const std::string& what) {
    if (!ok) g_messages.push_back(what);
}

void criterion(const char* name, const std::function<void()>& body) {
    g_messages.clear();
    try {
        body();
    } catch (const std::exception& e) {
        g_messages.push_back(std::string("exception: ") + e.what());
    }
    if (g_messages.empty()) {
        std::printf("PASS  %s\n", name);
    } else {
        ++g_failures;
        std::printf("FAIL  %s\n", name);
        for (const auto& m : g_messages) std::printf("      - %s\n", m.c_str());
    }
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict verdict_of(const SuiteReport& r, const std::string& check) {
    const CheckReport* c = r.find(check);
    return c == nullptr ? Verdict::NotApplicable : c->verdict;
}

double sub_of(const SuiteReport& r, const std::string& check, const std::string& sub) {
    const CheckReport* c = r.find(check);
    if (c == nullptr) return -1.0;
    auto it = c->sub_residuals.find(sub);
    return it == c->sub_residuals.end() ? -1.0 : it->second;
}

}  // namespace

// --- criterion bodies -------------------------------------------------------

static void criterion1_example15() {
    auto t0 = std::chrono::steady_clock::now();
    SamplePlan plan;  // 128 samples, seed 42, tolerance 1e-8
    SuiteReport r = run_suite(get_builtin("flat-c2-example15").definition, plan, "all");
    expect(verdict_of(r, "kahler") == Verdict::Pass, "kahler chart validation");
    expect(r.classification == "cc", "classification cc, got " + r.classification);
    expect(sub_of(r, "property3_compatibility", "closedness") < 1e-9,
           "d theta residual < 1e-9");
    for (const char* check : {"property1_nijenhuis", "property2_schouten",
                              "property3_compatibility", "property4_tilde_closed"})
        expect(verdict_of(r, check) == Verdict::Pass, std::string(check) + " PASS");
    expect(verdict_of(r, "delta_c") == Verdict::Pass, "delta criterion PASS");
    const CheckReport* par = r.find("parallel_theta");
    expect(par != nullptr && par->verdict == Verdict::Fail, "parallel check FAIL");
    expect(par != nullptr && par->max_residual >= 0.5,
           "parallel residual >= 0.5, got " +
               std::to_string(par == nullptr ? -1.0 : par->max_residual));
    double dt = seconds_since(t0);
    expect(dt < 5.0, "runtime < 5 s, got " + std::to_string(dt));
}

static void criterion2_hyperkahler() {
    SamplePlan plan;
    // Candidate A = J2 with associated form -Omega_3.
    SuiteReport r2 = run_suite(get_builtin("hyperkahler-r4").definition, plan, "all");
    expect(r2.classification == "scc", "J2 classification scc");
    expect(r2.kcn == "PASS", "J2 aggregate PASS");
    const CheckReport* pa = r2.find("parallel_a");
    expect(pa != nullptr && pa->max_residual < 1e-10, "nabla A residual < 1e-10 for J2");

    KahlerChart chart = get_builtin("hyperkahler-r4").definition.to_chart();
    StructureCandidate cj2 = get_builtin("hyperkahler-r4").definition.to_candidate();
    std::vector<double> origin = {0.0, 0.0, 0.0, 0.0};
    TensorValue theta2 = cj2.theta_jet(chart, origin).value;
    TensorValue omega3(Valence{0, 2}, 4);  // Omega_3 = J3^T
    omega3(3, 0) = -1.0;
    omega3(0, 3) = 1.0;
    omega3(2, 1) = -1.0;
    omega3(1, 2) = 1.0;
    expect(max_abs_diff(theta2, -omega3) < 1e-12, "theta(J2) = -Omega_3 entrywise");

    // Candidate A = J3 with associated form +Omega_2.
    ChartDefinition j3 = hyperkahler_j3_definition();
    SuiteReport r3 = run_suite(j3, plan, "all");
    expect(r3.classification == "scc", "J3 classification scc");
    expect(r3.kcn == "PASS", "J3 aggregate PASS");
    const CheckReport* pa3 = r3.find("parallel_a");
    expect(pa3 != nullptr && pa3->max_residual < 1e-10, "nabla A residual < 1e-10 for J3");
    TensorValue theta3 = j3.to_candidate().theta_jet(chart, origin).value;
    TensorValue omega2(Valence{0, 2}, 4);  // Omega_2 = J2^T
    omega2(2, 0) = -1.0;
    omega2(0, 2) = 1.0;
    omega2(3, 1) = 1.0;
    omega2(1, 3) = -1.0;
    expect(max_abs_diff(theta3, omega2) < 1e-12, "theta(J3) = Omega_2 entrywise");
}

static void criterion3_equivalence() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<ChartDefinition> defs;
    for (const auto& name : list_builtins()) defs.push_back(get_builtin(name).definition);
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        defs.push_back(testing::random_closed_candidate(20250800 + seed));

    for (const auto& def : defs) {
        for (double tol : {1e-6, 1e-8}) {
            SamplePlan plan;
            plan.tolerance = tol;
            SuiteReport r = run_suite(def, plan, "kcn");
            // Pairwise agreement of the characterization verdicts is
            // enforced by the AGREEMENT section for closed candidates; a
            // violation is an engine defect and maps to exit status 3.
            expect(r.agreement.consistent,
                   def.name + " tol " + std::to_string(tol) + ": " +
                       (r.agreement.violations.empty() ? "inconsistent"
                                                       : r.agreement.violations.front()));
            if (!r.agreement.consistent)
                expect(exit_code(r) == 3, "disagreement maps to exit status 3");
        }
    }
    double dt = seconds_since(t0);
    expect(dt < 60.0, "runtime < 60 s, got " + std::to_string(dt));
}

static void criterion4_inverse_pair() {
    SamplePlan plan;
    for (const char* name :
         {"hyperkahler-r4", "product-structure-c2", "parallel-form-c2"}) {
        SuiteReport r = run_suite(get_builtin(name).definition, plan, "all");
        const CheckReport* pc = r.find("poisson_compatibility");
        expect(pc != nullptr && pc->verdict == Verdict::Pass &&
                   pc->max_residual < 1e-8,
               std::string(name) + ": [Pi, Psi] residual < 1e-8");
        const CheckReport* ic = r.find("inverse_closed");
        expect(ic != nullptr && ic->verdict == Verdict::Pass &&
                   sub_of(r, "inverse_closed", "theta_prime_closed") < 1e-8,
               std::string(name) + ": d theta' residual < 1e-8");
    }
    SuiteReport neg = run_suite(get_builtin("scc-nonparallel-negative").definition, plan,
                                "all");
    expect(neg.kcn == "FAIL", "negative candidate aggregate FAIL");
    expect(verdict_of(neg, "poisson_compatibility") == Verdict::Fail,
           "negative candidate: [Pi, Psi] FAIL");
    expect(verdict_of(neg, "inverse_closed") == Verdict::Fail,
           "negative candidate: d theta' FAIL");
}

static void criterion5_scc_falsification() {
    SamplePlan plan;
    const auto& def = get_builtin("scc-nonparallel-negative").definition;
    SuiteReport r = run_suite(def, plan, "all");
    expect(r.classification == "scc", "classification scc");
    expect(sub_of(r, "property3_compatibility", "closedness") < 1e-9, "d theta < 1e-9");
    expect(r.kcn == "FAIL", "aggregate FAIL");
    const CheckReport* par = r.find("parallel_theta");
    expect(par != nullptr && par->max_residual >= 0.5, "non-parallel, residual >= 0.5");

    // Non-degenerate on the sampled (guarded) domain.
    KahlerChart chart = def.to_chart();
    StructureCandidate cand = def.to_candidate();
    double min_det = 1e300;
    for (const auto& x : draw_samples(def, plan))
        min_det = std::min(min_det, std::abs(determinant(cand.a_jet(chart, x).value)));
    expect(min_det > 1e-4, "candidate non-degenerate on the sampled domain");
}

static void criterion6_remark21() {
    // Ten seeded random c.c. non-degenerate polynomial candidates; the two
    // identities must hold within 1e-8 through the jet pipeline AND through
    // an independent finite-difference oracle.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ChartDefinition def = testing::random_cc_candidate(777000 + seed);
        SamplePlan plan;
        plan.count = 24;
        SuiteReport r = run_suite(def, plan, "remark21");
        expect(r.classification == "cc", def.name + " classified cc");
        const CheckReport* rem = r.find("remark21");
        expect(rem != nullptr && rem->verdict == Verdict::Pass &&
                   rem->max_residual < 1e-8,
               def.name + ": identities within 1e-8");

        // Brute-force oracle at a few sample points: all derivative tensors
        // from central finite differences of the pointwise endomorphism.
        KahlerChart chart = def.to_chart();
        StructureCandidate cand = def.to_candidate();
        auto a_of = [&](const std::vector<double>& p) {
            // Direct route: A = Pi Theta with plain matrix algebra.
            TensorValue theta = eval_grid_value(cand.theta_exprs, Valence{0, 2}, p);
            TensorValue omega = mat_mul(mat_transpose(chart.j_jet(p).value, Valence{1, 1}),
                                        chart.g_jet(p).value, Valence{0, 2});
            TensorValue pi = -mat_inverse(omega, Valence{2, 0}, 1e-12);
            return mat_mul(pi, theta, Valence{1, 1});
        };
        SamplePoints pts = draw_samples(def, plan);
        for (int s = 0; s < 3; ++s) {
            const auto& x = pts[s];
            const int n = 4;
            TensorValue a = a_of(x);
            TensorValue a_inv = invert_endomorphism(a, 1e-12);
            auto ainv_of = [&](const std::vector<double>& p) {
                return invert_endomorphism(a_of(p), 1e-12);
            };
            // FD first derivatives of A and A^{-1} (flat chart: nabla = d).
            const double h = 1e-5;
            std::vector<TensorValue> da, dainv;
            for (int c = 0; c < n; ++c) {
                std::vector<double> xp = x, xm = x;
                xp[c] += h;
                xm[c] -= h;
                da.push_back((1.0 / (2 * h)) * (a_of(xp) - a_of(xm)));
                dainv.push_back((1.0 / (2 * h)) * (ainv_of(xp) - ainv_of(xm)));
            }
            auto alt_of = [&](const std::vector<TensorValue>& d) {
                TensorValue b(Valence{1, 2}, n);
                for (int k = 0; k < n; ++k)
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            b(k, i, j) = 0.5 * (d[i](k, j) - d[j](k, i));
                return b;
            };
            TensorValue b_a = alt_of(da);
            TensorValue b_inv = alt_of(dainv);
            // C_A = alt of F_A with F_A(X,Y) = (nabla_{AX} A)(Y).
            TensorValue c_a(Valence{1, 2}, n);
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double fij = 0.0, fji = 0.0;
                        for (int u = 0; u < n; ++u) {
                            fij += a(u, i) * da[u](k, j);
                            fji += a(u, j) * da[u](k, i);
                        }
                        c_a(k, i, j) = 0.5 * (fij - fji);
                    }
            // Nij from the derivative expansion.
            TensorValue nij(Valence{1, 2}, n);
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double s1 = 0.0;
                        for (int m = 0; m < n; ++m) {
                            s1 += a(m, i) * da[m](k, j) - a(m, j) * da[m](k, i);
                            s1 -= a(k, m) * (da[i](m, j) - da[j](m, i));
                        }
                        nij(k, i, j) = s1;
                    }
            double worst1 = 0.0, worst2 = 0.0;
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double baa = 0.0;
                        for (int u = 0; u < n; ++u)
                            for (int v = 0; v < n; ++v)
                                baa += b_inv(k, u, v) * a(u, i) * a(v, j);
                        // (i) C_A + A B_{A^{-1}}(A., A.) = 0
                        double lhs1 = c_a(k, i, j);
                        for (int m = 0; m < n; ++m) {
                            double inner = 0.0;
                            for (int u = 0; u < n; ++u)
                                for (int v = 0; v < n; ++v)
                                    inner += b_inv(m, u, v) * a(u, i) * a(v, j);
                            lhs1 += a(k, m) * inner;
                        }
                        worst1 = std::max(worst1, std::abs(lhs1));
                        // (ii) A^{-1} Nij + 2 [B_{A^{-1}}(A., A.) + B_A] = 0
                        double lhs2 = 2.0 * (baa + b_a(k, i, j));
                        for (int m = 0; m < n; ++m) lhs2 += a_inv(k, m) * nij(m, i, j);
                        worst2 = std::max(worst2, std::abs(lhs2));
                    }
            expect(worst1 < 1e-6, def.name + ": FD oracle identity (i), got " +
                                      std::to_string(worst1));
            expect(worst2 < 1e-6, def.name + ": FD oracle identity (ii), got " +
                                      std::to_string(worst2));
        }
    }
}

static void criterion7_rank() {
    SamplePlan plan;
    SuiteReport r = run_suite(get_builtin("rank2-degenerate").definition, plan, "all");
    const CheckReport* rank = r.find("rank_analysis");
    expect(rank != nullptr, "rank analysis present");
    if (rank == nullptr) return;
    expect(rank->sub_residuals.at("rank") == 2.0, "rank 2");
    bool regular = false;
    for (const auto& n : rank->notes)
        if (n.find("REGULAR") != std::string::npos) regular = true;
    expect(regular, "REGULAR flag");
    expect(rank->verdict == Verdict::Pass, "subspace relations PASS");
    expect(rank->sub_residuals.at("kernel_match") < 1e-8, "ker A = ker Theta within 1e-8");
    expect(rank->sub_residuals.at("kernel_orthogonal_image") < 1e-8,
           "ker A is g-orthogonal to im A within 1e-8");
    expect(rank->sub_residuals.at("image_j_invariant") < 1e-8,
           "J(im A) = im A within 1e-8");
}

static void criterion8_ad_integrity() {
    // Every expression of every builtin: 2-jets against central finite
    // differences (h = 1e-4), 1e-5 relative, 100 seeded points each.
    std::mt19937_64 rng(98765);
    auto unit = [&]() { return 1.8 * double(rng() >> 11) * 0x1.0p-53 - 0.9; };
    int checked = 0;
    for (const auto& name : list_builtins()) {
        const auto& def = get_builtin(name).definition;
        std::vector<std::string> sources;
        for (const auto& [ij, src] : def.g_sources) sources.push_back(src);
        for (const auto& [ij, src] : def.j_sources) sources.push_back(src);
        for (const auto& [ij, src] : def.theta_sources) sources.push_back(src);
        for (const auto& [ij, src] : def.a_sources) sources.push_back(src);
        if (def.exclusion_source) sources.push_back(*def.exclusion_source);
        for (const auto& src : sources) {
            Expression e = Expression::parse(src, def.coords);
            auto f = [&](const std::vector<double>& p) { return e.eval(p); };
            for (int trial = 0; trial < 100; ++trial) {
                std::vector<double> x(def.dim);
                for (auto& v : x) v = unit();
                Jet2 jet = e.eval_jet2(x);
                const double scale = std::max(1.0, std::abs(jet.value));
                for (int i = 0; i < def.dim; ++i) {
                    double fd = testing::fd_partial(f, x, i, 1e-4);
                    if (std::abs(jet.gradient[i] - fd) / scale >= 1e-5)
                        expect(false, name + " `" + src + "`: gradient mismatch");
                    for (int j = i; j < def.dim; ++j) {
                        double fdh = testing::fd_hessian_entry(f, x, i, j, 1e-4);
                        if (std::abs(jet.hess(i, j) - fdh) / scale >= 1e-5)
                            expect(false, name + " `" + src + "`: hessian mismatch");
                    }
                }
                ++checked;
            }
        }
    }
    expect(checked > 0, "corpus nonempty");

    // d theta equals the cyclic covariant sum on every builtin (validates
    // the Christoffel pipeline against the plain partial route).
    SamplePlan plan;
    for (const auto& name : list_builtins()) {
        const auto& def = get_builtin(name).definition;
        if (!def.has_candidate()) continue;
        KahlerChart chart = def.to_chart();
        StructureCandidate cand = def.to_candidate();
        for (const auto& x : draw_samples(def, plan)) {
            JetTensor theta = cand.theta_jet(chart, x);
            TensorValue d = exterior_derivative(theta);
            TensorValue grad = covariant_derivative(theta, chart.connection(x));
            double worst = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    for (int k = 0; k < 4; ++k)
                        worst = std::max(worst,
                                         std::abs(d(i, j, k) - (grad(i, j, k) +
                                                                grad(j, k, i) +
                                                                grad(k, i, j))));
            if (worst >= 1e-9)
                expect(false, name + ": d theta vs cyclic nabla theta, got " +
                                  std::to_string(worst));
        }
    }
}

static void criterion9_determinism() {
    SamplePlan plan;
    for (const auto& name : list_builtins()) {
        const auto& def = get_builtin(name).definition;
        std::string a = report_to_json(run_suite(def, plan, "all"));
        std::string b = report_to_json(run_suite(def, plan, "all"));
        expect(a == b, name + ": byte-identical reports");

        ChartDefinition back = load_definition_text(serialize_definition(def));
        expect(back.structurally_equal(def), name + ": export round-trip");
    }
}

int run_all() {
    criterion("criterion-1 example-1.5 chart regression", criterion1_example15);
    criterion("criterion-2 hyperkahler chart regression", criterion2_hyperkahler);
    criterion("criterion-3 characterization equivalence suite", criterion3_equivalence);
    criterion("criterion-4 symplectic-inverse pair criteria", criterion4_inverse_pair);
    criterion("criterion-5 scc non-parallel falsification", criterion5_scc_falsification);
    criterion("criterion-6 inverse-alternation identities vs FD oracle",
              criterion6_remark21);
    criterion("criterion-7 rank and subspace relations", criterion7_rank);
    criterion("criterion-8 AD integrity against finite differences",
              criterion8_ad_integrity);
    criterion("criterion-9 determinism and round-trips", criterion9_determinism);
    if (g_failures == 0)
        std::printf("acceptance: all 9 criteria PASS\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}

int main() { return run_all(); }

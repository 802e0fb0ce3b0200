#include "kcn/jet.hpp"

#include <cmath>

namespace kcn {

JetTensor eval_grid(const ExprGrid& grid, Valence v, std::span<const double> point) {
    const int n = grid.dim;
    JetTensor out;
    out.value = TensorValue(v, n);
    out.d.assign(n, TensorValue(v, n));
    out.d2.emplace(std::size_t(n) * n, TensorValue(v, n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Expression& e = grid.at(i, j);
            if (e.empty()) continue;
            Jet2 jet = e.eval_jet2(point);
            out.value(i, j) = jet.value;
            for (int a = 0; a < n; ++a) {
                out.d[a](i, j) = jet.gradient[a];
                for (int b = 0; b < n; ++b)
                    (*out.d2)[std::size_t(a) * n + b](i, j) = jet.hess(a, b);
            }
        }
    }
    return out;
}

TensorValue eval_grid_value(const ExprGrid& grid, Valence v, std::span<const double> point) {
    const int n = grid.dim;
    TensorValue out(v, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!grid.at(i, j).empty()) out(i, j) = grid.at(i, j).eval(point);
    return out;
}

namespace {

void require_first(const JetTensor& t, const char* who) {
    if (!t.has_first()) throw MissingJet(std::string(who) + ": first derivatives required");
}

}  // namespace

JetTensor jet_add(const JetTensor& a, const JetTensor& b) {
    require_first(a, "jet_add");
    require_first(b, "jet_add");
    JetTensor r;
    r.value = a.value + b.value;
    r.d.reserve(a.d.size());
    for (std::size_t i = 0; i < a.d.size(); ++i) r.d.push_back(a.d[i] + b.d[i]);
    return r;
}

JetTensor jet_sub(const JetTensor& a, const JetTensor& b) {
    require_first(a, "jet_sub");
    require_first(b, "jet_sub");
    JetTensor r;
    r.value = a.value - b.value;
    r.d.reserve(a.d.size());
    for (std::size_t i = 0; i < a.d.size(); ++i) r.d.push_back(a.d[i] - b.d[i]);
    return r;
}

JetTensor jet_neg(const JetTensor& a) { return jet_scale(-1.0, a); }

JetTensor jet_scale(double s, const JetTensor& a) {
    require_first(a, "jet_scale");
    JetTensor r;
    r.value = s * a.value;
    r.d.reserve(a.d.size());
    for (const auto& da : a.d) r.d.push_back(s * da);
    return r;
}

JetTensor jet_mat_mul(const JetTensor& a, const JetTensor& b, Valence result) {
    require_first(a, "jet_mat_mul");
    require_first(b, "jet_mat_mul");
    JetTensor r;
    r.value = mat_mul(a.value, b.value, result);
    r.d.reserve(a.d.size());
    for (std::size_t k = 0; k < a.d.size(); ++k)
        r.d.push_back(mat_mul(a.d[k], b.value, result) + mat_mul(a.value, b.d[k], result));
    return r;
}

JetTensor jet_mat_transpose(const JetTensor& a, Valence result) {
    require_first(a, "jet_mat_transpose");
    JetTensor r;
    r.value = mat_transpose(a.value, result);
    r.d.reserve(a.d.size());
    for (const auto& da : a.d) r.d.push_back(mat_transpose(da, result));
    return r;
}

JetTensor jet_mat_inverse(const JetTensor& a, Valence result, double tol) {
    require_first(a, "jet_mat_inverse");
    JetTensor r;
    r.value = mat_inverse(a.value, result, tol);
    r.d.reserve(a.d.size());
    for (const auto& da : a.d) {
        // d(M^-1) = -M^-1 (dM) M^-1
        TensorValue t = mat_mul(r.value, mat_mul(da, r.value, result), result);
        r.d.push_back(-t);
    }
    return r;
}

JetTensor jet_wedge(const JetTensor& a, const JetTensor& b) {
    require_first(a, "jet_wedge");
    require_first(b, "jet_wedge");
    JetTensor r;
    r.value = wedge(a.value, b.value);
    r.d.reserve(a.d.size());
    for (std::size_t k = 0; k < a.d.size(); ++k)
        r.d.push_back(wedge(a.d[k], b.value) + wedge(a.value, b.d[k]));
    return r;
}

TensorValue c_operator(const TensorValue& omega, const TensorValue& j_value) {
    const int n = omega.dim();
    const int p = omega.valence().q;
    if (omega.valence().p != 0)
        throw DimensionMismatch("c_operator expects a covariant tensor");
    TensorValue out(omega.valence(), n);
    std::vector<int> idx(p, 0), src(p, 0);
    if (p == 0) return omega;
    for (;;) {
        // (C w)_{i_1..i_p} = w_{j_1..j_p} J^{j_1}_{i_1} ... J^{j_p}_{i_p}
        double s = 0.0;
        for (;;) {
            double term = omega.at(src);
            if (term != 0.0) {
                for (int slot = 0; slot < p; ++slot) term *= j_value(src[slot], idx[slot]);
                s += term;
            }
            int k = p - 1;
            while (k >= 0 && ++src[k] == n) src[k--] = 0;
            if (k < 0) break;
        }
        out.at(idx) = s;
        int k = p - 1;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

namespace {

// Contract omega with p copies of J, substituting `replacement` for the J
// factor at slot `which` (-1 for none); used for the Leibniz rule in
// jet_c_operator.
TensorValue c_contract(const TensorValue& omega, const TensorValue& j_value,
                       const TensorValue& replacement, int which) {
    const int n = omega.dim();
    const int p = omega.valence().q;
    TensorValue out(omega.valence(), n);
    std::vector<int> idx(p, 0), src(p, 0);
    for (;;) {
        double s = 0.0;
        for (;;) {
            double term = omega.at(src);
            if (term != 0.0) {
                for (int slot = 0; slot < p; ++slot) {
                    const TensorValue& f = (slot == which) ? replacement : j_value;
                    term *= f(src[slot], idx[slot]);
                }
                s += term;
            }
            int k = p - 1;
            while (k >= 0 && ++src[k] == n) src[k--] = 0;
            if (k < 0) break;
        }
        out.at(idx) = s;
        int k = p - 1;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

}  // namespace

JetTensor jet_c_operator(const JetTensor& omega, const JetTensor& j_field) {
    require_first(omega, "jet_c_operator");
    require_first(j_field, "jet_c_operator");
    const int n = omega.dim();
    const int p = omega.value.valence().q;
    JetTensor r;
    r.value = c_operator(omega.value, j_field.value);
    r.d.reserve(n);
    for (int a = 0; a < n; ++a) {
        TensorValue da = c_operator(omega.d[a], j_field.value);
        if (inf_norm(j_field.d[a]) != 0.0)
            for (int slot = 0; slot < p; ++slot)
                da = da + c_contract(omega.value, j_field.value, j_field.d[a], slot);
        r.d.push_back(std::move(da));
    }
    return r;
}

}  // namespace kcn

#include "kcn/geometry.hpp"

#include <cmath>

namespace kcn {

namespace {

void require_first(const JetTensor& t, const char* who) {
    if (!t.has_first()) throw MissingJet(std::string(who) + ": first derivatives required");
}

void require_second(const JetTensor& t, const char* who) {
    if (!t.has_second()) throw MissingJet(std::string(who) + ": second derivatives required");
}

}  // namespace

ConnectionData christoffel(const JetTensor& g, double singular_tol) {
    require_first(g, "christoffel");
    const int n = g.dim();
    TensorValue g_inv;
    try {
        g_inv = mat_inverse(g.value, Valence{2, 0}, singular_tol);
    } catch (const SingularEndomorphism& e) {
        throw SingularMetric("metric is singular at the evaluation point (|det g| = " +
                             std::to_string(e.abs_det) + ")");
    }

    ConnectionData conn;
    conn.gamma = TensorValue(Valence{1, 2}, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += g_inv(k, l) * (g.d[i](j, l) + g.d[j](i, l) - g.d[l](i, j));
                s *= 0.5;
                conn.gamma(k, i, j) = s;
                conn.gamma(k, j, i) = s;  // symmetric in (i,j) exactly
            }

    if (g.has_second()) {
        std::vector<TensorValue> dg_inv;  // d_a g^{kl} = -g^{km} (d_a g_{mr}) g^{rl}
        dg_inv.reserve(n);
        for (int a = 0; a < n; ++a)
            dg_inv.push_back(
                -mat_mul(g_inv, mat_mul(g.d[a], g_inv, Valence{2, 0}), Valence{2, 0}));
        conn.gamma_d.emplace();
        conn.gamma_d->reserve(n);
        for (int a = 0; a < n; ++a) {
            TensorValue dg(Valence{1, 2}, n);
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = i; j < n; ++j) {
                        double s = 0.0;
                        for (int l = 0; l < n; ++l) {
                            s += dg_inv[a](k, l) *
                                 (g.d[i](j, l) + g.d[j](i, l) - g.d[l](i, j));
                            s += g_inv(k, l) * (g.d2_at(a, i)(j, l) + g.d2_at(a, j)(i, l) -
                                                g.d2_at(a, l)(i, j));
                        }
                        s *= 0.5;
                        dg(k, i, j) = s;
                        dg(k, j, i) = s;
                    }
            conn.gamma_d->push_back(std::move(dg));
        }
    }
    return conn;
}

TensorValue covariant_derivative(const JetTensor& t, const ConnectionData& conn) {
    require_first(t, "covariant_derivative");
    const int n = t.dim();
    const Valence v = t.value.valence();
    const int rank = v.rank();
    TensorValue out(Valence{v.p, v.q + 1}, n);

    // Result index order: [upper..., a, lower...] with a the derivative slot.
    std::vector<int> out_idx(rank + 1, 0);
    std::vector<int> src_idx(rank, 0);
    for (;;) {
        const int a = out_idx[v.p];
        for (int s = 0; s < v.p; ++s) src_idx[s] = out_idx[s];
        for (int s = 0; s < v.q; ++s) src_idx[v.p + s] = out_idx[v.p + 1 + s];

        double val = t.d[a].at(src_idx);
        // +Gamma^{i_s}_{a m} T[..m..] per contravariant slot
        for (int s = 0; s < v.p; ++s) {
            const int is = src_idx[s];
            for (int m = 0; m < n; ++m) {
                src_idx[s] = m;
                val += conn.gamma(is, a, m) * t.value.at(src_idx);
            }
            src_idx[s] = is;
        }
        // -Gamma^{m}_{a j_s} T[..m..] per covariant slot
        for (int s = v.p; s < rank; ++s) {
            const int js = src_idx[s];
            for (int m = 0; m < n; ++m) {
                src_idx[s] = m;
                val -= conn.gamma(m, a, js) * t.value.at(src_idx);
            }
            src_idx[s] = js;
        }
        out.at(out_idx) = val;

        int k = rank;
        while (k >= 0 && ++out_idx[k] == n) out_idx[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

namespace {

TensorValue exterior_derivative_from(const TensorValue& value,
                                     const std::vector<TensorValue>& partials) {
    const int n = value.dim();
    const int p = value.valence().q;
    if (value.valence().p != 0)
        throw DimensionMismatch("exterior derivative expects a covariant form");
    TensorValue out(Valence{0, p + 1}, n);
    std::vector<int> idx(p + 1, 0), rest(p, 0);
    for (;;) {
        double s = 0.0;
        for (int k = 0; k <= p; ++k) {
            int r = 0;
            for (int i = 0; i <= p; ++i)
                if (i != k) rest[r++] = idx[i];
            const double term = partials[idx[k]].at(rest);
            s += (k % 2 == 0) ? term : -term;
        }
        out.at(idx) = s;
        int k = p;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

}  // namespace

TensorValue exterior_derivative(const JetTensor& omega) {
    require_first(omega, "exterior_derivative");
    return exterior_derivative_from(omega.value, omega.d);
}

JetTensor exterior_derivative_jet(const JetTensor& omega) {
    require_first(omega, "exterior_derivative_jet");
    require_second(omega, "exterior_derivative_jet");
    const int n = omega.dim();
    JetTensor out;
    out.value = exterior_derivative_from(omega.value, omega.d);
    out.d.reserve(n);
    for (int a = 0; a < n; ++a) {
        std::vector<TensorValue> partials;
        partials.reserve(n);
        for (int b = 0; b < n; ++b) partials.push_back(omega.d2_at(a, b));
        out.d.push_back(exterior_derivative_from(omega.d[a], partials));
    }
    return out;
}

TensorValue lie_bracket(const JetTensor& x, const JetTensor& y) {
    require_first(x, "lie_bracket");
    require_first(y, "lie_bracket");
    const int n = x.dim();
    TensorValue out(Valence{1, 0}, n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += x.value(j) * y.d[j](i) - y.value(j) * x.d[j](i);
        out(i) = s;
    }
    return out;
}

TensorValue nijenhuis_torsion(const JetTensor& a) {
    require_first(a, "nijenhuis_torsion");
    const int n = a.dim();
    const TensorValue& A = a.value;
    TensorValue out(Valence{1, 2}, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                double s = 0.0;
                for (int m = 0; m < n; ++m) {
                    s += A(m, i) * a.d[m](k, j) - A(m, j) * a.d[m](k, i);
                    s -= A(k, m) * (a.d[i](m, j) - a.d[j](m, i));
                }
                out(k, i, j) = s;
                out(k, j, i) = -s;
            }
    return out;
}

TensorValue schouten_bivector(const JetTensor& p, const JetTensor& q) {
    require_first(p, "schouten_bivector");
    require_first(q, "schouten_bivector");
    const int n = p.dim();
    TensorValue out(Valence{3, 0}, n);
    const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int base[3] = {i, j, k};
                double s = 0.0;
                for (const auto& c : cyc) {
                    const int ci = base[c[0]], cj = base[c[1]], ck = base[c[2]];
                    for (int l = 0; l < n; ++l) {
                        s += p.value(l, ci) * q.d[l](cj, ck);
                        s += q.value(l, ci) * p.d[l](cj, ck);
                    }
                }
                out(i, j, k) = s;
            }
    return out;
}

TensorValue codifferential(const JetTensor& omega, const TensorValue& g_inv,
                           const ConnectionData& conn) {
    require_first(omega, "codifferential");
    const int n = omega.dim();
    const int p = omega.value.valence().q;
    if (p < 1) throw DimensionMismatch("codifferential expects a form of degree >= 1");
    TensorValue grad = covariant_derivative(omega, conn);  // (0,p+1): [a][b][i2..ip]
    TensorValue out(Valence{0, p - 1}, n);
    std::vector<int> idx(p - 1, 0);
    std::vector<int> full(p + 1, 0);
    for (;;) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                full[0] = a;
                full[1] = b;
                for (int r = 0; r < p - 1; ++r) full[2 + r] = idx[r];
                s -= g_inv(a, b) * grad.at(full);
            }
        out.at(idx) = s;
        if (p == 1) break;
        int k = p - 2;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

TensorValue ricci(const ConnectionData& conn) {
    if (!conn.has_derivatives())
        throw MissingJet("ricci: connection derivatives (metric 2-jet) required");
    const int n = conn.dim();
    const TensorValue& G = conn.gamma;
    const auto& dG = *conn.gamma_d;
    TensorValue out(Valence{0, 2}, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                s += dG[k](k, l, j) - dG[l](k, k, j);
                for (int m = 0; m < n; ++m)
                    s += G(k, k, m) * G(m, l, j) - G(k, l, m) * G(m, k, j);
            }
            out(j, l) = s;
        }
    return out;
}

TensorValue ricci_form(const TensorValue& ricci_tensor, const TensorValue& j_value) {
    const int n = ricci_tensor.dim();
    TensorValue out(Valence{0, 2}, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += j_value(k, i) * ricci_tensor(k, j);
            out(i, j) = s;
        }
    return out;
}

}  // namespace kcn

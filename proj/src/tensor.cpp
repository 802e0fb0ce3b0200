#include "kcn/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace kcn {

namespace {

using EMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EMatrix to_eigen(const TensorValue& t) {
    if (t.rank() != 2) throw DimensionMismatch("matrix view requires a rank-2 tensor");
    return Eigen::Map<const EMatrix>(t.data().data(), t.dim(), t.dim());
}

TensorValue from_eigen(const EMatrix& m, Valence v) {
    TensorValue t(v, static_cast<int>(m.rows()));
    Eigen::Map<EMatrix>(t.data().data(), m.rows(), m.cols()) = m;
    return t;
}

void require_same_shape(const TensorValue& a, const TensorValue& b) {
    if (a.dim() != b.dim() || !(a.valence() == b.valence()))
        throw DimensionMismatch("tensor shapes do not match");
}

}  // namespace

TensorValue operator+(const TensorValue& a, const TensorValue& b) {
    require_same_shape(a, b);
    TensorValue r = a;
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] += b.data()[i];
    return r;
}

TensorValue operator-(const TensorValue& a, const TensorValue& b) {
    require_same_shape(a, b);
    TensorValue r = a;
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] -= b.data()[i];
    return r;
}

TensorValue operator-(const TensorValue& a) {
    TensorValue r = a;
    for (double& v : r.data()) v = -v;
    return r;
}

TensorValue operator*(double s, const TensorValue& a) {
    TensorValue r = a;
    for (double& v : r.data()) v *= s;
    return r;
}

double inf_norm(const TensorValue& t) {
    double m = 0.0;
    for (double v : t.data()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const TensorValue& a, const TensorValue& b) {
    require_same_shape(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

bool is_antisymmetric(const TensorValue& t, double tol) {
    const int n = t.dim();
    const int r = t.rank();
    if (r < 2) return true;
    const double scale = std::max(1.0, inf_norm(t));
    // Adjacent-slot transpositions generate all of S_r.
    std::vector<int> idx(r, 0);
    std::vector<int> swapped(r);
    for (;;) {
        for (int s = 0; s + 1 < r; ++s) {
            swapped.assign(idx.begin(), idx.end());
            std::swap(swapped[s], swapped[s + 1]);
            if (std::abs(t.at(idx) + t.at(swapped)) > tol * scale) return false;
        }
        int k = r - 1;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) break;
    }
    return true;
}

TensorValue mat_mul(const TensorValue& a, const TensorValue& b, Valence result) {
    if (a.dim() != b.dim()) throw DimensionMismatch("matrix product dimension mismatch");
    return from_eigen(to_eigen(a) * to_eigen(b), result);
}

TensorValue mat_transpose(const TensorValue& a, Valence result) {
    return from_eigen(to_eigen(a).transpose(), result);
}

TensorValue mat_inverse(const TensorValue& a, Valence result, double tol) {
    EMatrix m = to_eigen(a);
    Eigen::FullPivLU<EMatrix> lu(m);
    const double abs_det = std::abs(lu.determinant());
    if (abs_det <= tol) throw SingularEndomorphism(abs_det);
    return from_eigen(lu.inverse(), result);
}

double determinant(const TensorValue& a) { return to_eigen(a).determinant(); }

TensorValue identity_endomorphism(int dim) {
    TensorValue t(Valence{1, 1}, dim);
    for (int i = 0; i < dim; ++i) t(i, i) = 1.0;
    return t;
}

TensorValue sharp_bivector(const TensorValue& p, const TensorValue& alpha) {
    if (p.dim() != alpha.dim()) throw DimensionMismatch("sharp: dimension mismatch");
    const int n = p.dim();
    TensorValue r(Valence{1, 0}, n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += p(j, i) * alpha(j);
        r(i) = s;
    }
    return r;
}

TensorValue flat_form(const TensorValue& t, const TensorValue& x) {
    if (t.dim() != x.dim()) throw DimensionMismatch("flat: dimension mismatch");
    const int n = t.dim();
    TensorValue r(Valence{0, 1}, n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += t(i, j) * x(i);
        r(j) = s;
    }
    return r;
}

TensorValue sharp_metric(const TensorValue& g_inv, const TensorValue& alpha) {
    return sharp_bivector(g_inv, alpha);
}

TensorValue invert_endomorphism(const TensorValue& a, double tol) {
    return mat_inverse(a, Valence{1, 1}, tol);
}

namespace {

// Enumerate (p,q)-shuffles of {0..p+q-1} with their signs.
void shuffles(int p, int q, std::vector<std::pair<std::vector<int>, int>>& out) {
    const int n = p + q;
    std::vector<int> comb(p);
    for (int i = 0; i < p; ++i) comb[i] = i;
    for (;;) {
        std::vector<int> perm;
        perm.reserve(n);
        std::vector<bool> used(n, false);
        int sign_inversions = 0;
        for (int i = 0; i < p; ++i) {
            perm.push_back(comb[i]);
            used[comb[i]] = true;
        }
        for (int i = 0; i < n; ++i)
            if (!used[i]) perm.push_back(i);
        // Count inversions to get the permutation sign.
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++sign_inversions;
        out.emplace_back(perm, sign_inversions % 2 == 0 ? 1 : -1);
        // next combination
        int k = p - 1;
        while (k >= 0 && comb[k] == n - p + k) --k;
        if (k < 0) break;
        ++comb[k];
        for (int i = k + 1; i < p; ++i) comb[i] = comb[i - 1] + 1;
    }
}

}  // namespace

TensorValue wedge(const TensorValue& a, const TensorValue& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("wedge: dimension mismatch");
    if (a.valence().p != 0 || b.valence().p != 0)
        throw DimensionMismatch("wedge expects covariant antisymmetric tensors");
    const int p = a.valence().q;
    const int q = b.valence().q;
    const int n = a.dim();
    const int r = p + q;
    TensorValue out(Valence{0, r}, n);
    std::vector<std::pair<std::vector<int>, int>> sh;
    shuffles(p, q, sh);

    std::vector<int> idx(r, 0);
    std::vector<int> ia(p), ib(q);
    for (;;) {
        double s = 0.0;
        for (const auto& [perm, sign] : sh) {
            for (int i = 0; i < p; ++i) ia[i] = idx[perm[i]];
            for (int i = 0; i < q; ++i) ib[i] = idx[perm[p + i]];
            s += sign * a.at(ia) * b.at(ib);
        }
        out.at(idx) = s;
        int k = r - 1;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

TensorValue alt12(const TensorValue& t) {
    if (!(t.valence() == Valence{1, 2}))
        throw DimensionMismatch("alt12 expects a (1,2) tensor");
    const int n = t.dim();
    TensorValue r(Valence{1, 2}, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r(k, i, j) = 0.5 * (t(k, i, j) - t(k, j, i));
    return r;
}

RankDecomposition rank_with_kernel(const TensorValue& a, double tol) {
    const int n = a.dim();
    EMatrix m = to_eigen(a);
    Eigen::JacobiSVD<EMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = tol * std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0);
    RankDecomposition out;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++out.rank;
    for (int i = out.rank; i < n; ++i) {
        std::vector<double> v(n);
        for (int r = 0; r < n; ++r) v[r] = svd.matrixV()(r, i);
        out.kernel.push_back(std::move(v));
    }
    for (int i = 0; i < out.rank; ++i) {
        std::vector<double> v(n);
        for (int r = 0; r < n; ++r) v[r] = svd.matrixU()(r, i);
        out.image.push_back(std::move(v));
    }
    return out;
}

std::pair<double, double> symmetric_eigen_range(const TensorValue& g) {
    EMatrix m = to_eigen(g);
    Eigen::SelfAdjointEigenSolver<EMatrix> es(m);
    const auto& ev = es.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace kcn

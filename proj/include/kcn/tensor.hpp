#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "kcn/errors.hpp"

namespace kcn {

/// Slot counts of a tensor: p contravariant (upper) slots followed by
/// q covariant (lower) slots.  The dense component table is row-major over
/// the slots in that order.
///
/// Index conventions, fixed once for the whole engine:
///   (J X)^i   = J^i_j X^j                 J, A, ... stored [upper][lower]
///   Omega_ij  = Omega(d_i, d_j)
///   Pi^ij     = Pi(dx^i, dx^j)
///   (flat_T X)_j   = T_ij X^i
///   (sharp_P a)^i  = P^ji a_j             so that b(sharp_P a) = P(a, b)
struct Valence {
    int p = 0;
    int q = 0;
    int rank() const { return p + q; }
    bool operator==(const Valence&) const = default;
};

/// Dense pointwise tensor: component table of size dim^(p+q).
class TensorValue {
  public:
    TensorValue() = default;
    TensorValue(Valence v, int dim)
        : valence_(v), dim_(dim), data_(size_for(v, dim), 0.0) {}

    static std::size_t size_for(Valence v, int dim) {
        std::size_t s = 1;
        for (int i = 0; i < v.rank(); ++i) s *= static_cast<std::size_t>(dim);
        return s;
    }

    Valence valence() const { return valence_; }
    int dim() const { return dim_; }
    int rank() const { return valence_.rank(); }
    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    double& operator()(int i) { return data_[idx({&i, 1})]; }
    double operator()(int i) const { return data_[idx({&i, 1})]; }
    double& operator()(int i, int j) { return data_[std::size_t(i) * dim_ + j]; }
    double operator()(int i, int j) const { return data_[std::size_t(i) * dim_ + j]; }
    double& operator()(int i, int j, int k) {
        return data_[(std::size_t(i) * dim_ + j) * dim_ + k];
    }
    double operator()(int i, int j, int k) const {
        return data_[(std::size_t(i) * dim_ + j) * dim_ + k];
    }
    double& operator()(int i, int j, int k, int l) {
        return data_[((std::size_t(i) * dim_ + j) * dim_ + k) * dim_ + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return data_[((std::size_t(i) * dim_ + j) * dim_ + k) * dim_ + l];
    }

    double& at(std::span<const int> idx_list) { return data_[idx(idx_list)]; }
    double at(std::span<const int> idx_list) const { return data_[idx(idx_list)]; }

  private:
    std::size_t idx(std::span<const int> idx_list) const {
        std::size_t s = 0;
        for (int i : idx_list) s = s * dim_ + static_cast<std::size_t>(i);
        return s;
    }

    Valence valence_{};
    int dim_ = 0;
    std::vector<double> data_;
};

// --- elementwise -----------------------------------------------------------

TensorValue operator+(const TensorValue& a, const TensorValue& b);
TensorValue operator-(const TensorValue& a, const TensorValue& b);
TensorValue operator-(const TensorValue& a);
TensorValue operator*(double s, const TensorValue& a);

double inf_norm(const TensorValue& t);
double max_abs_diff(const TensorValue& a, const TensorValue& b);
bool is_antisymmetric(const TensorValue& t, double tol);

// --- dim x dim matrix views ------------------------------------------------
// Rank-2 tensors of any variance share the same dense layout; these helpers
// treat them as matrices with the stated index contraction and the caller
// names the variance of the result.

TensorValue mat_mul(const TensorValue& a, const TensorValue& b, Valence result);
TensorValue mat_transpose(const TensorValue& a, Valence result);
TensorValue mat_inverse(const TensorValue& a, Valence result, double tol);
double determinant(const TensorValue& a);
TensorValue identity_endomorphism(int dim);

/// (sharp_P alpha)^i = P^ji alpha_j  for a (2,0) bivector P.
TensorValue sharp_bivector(const TensorValue& p, const TensorValue& alpha);

/// (flat_T X)_j = T_ij X^i  for a (0,2) form or metric T.
TensorValue flat_form(const TensorValue& t, const TensorValue& x);

/// Index raising with an inverse metric; inverse of flat_form(g, .).
TensorValue sharp_metric(const TensorValue& g_inv, const TensorValue& alpha);

/// Inverse of a (1,1) field at a point.  Throws SingularEndomorphism when
/// |det A| <= tol.
TensorValue invert_endomorphism(const TensorValue& a, double tol);

/// Wedge product of covariant antisymmetric tensors by the shuffle-sum
/// convention (no factorial weights):
///   (a ^ b)(X_1..X_{p+q}) = sum over (p,q)-shuffles of sign * a(..) b(..).
TensorValue wedge(const TensorValue& a, const TensorValue& b);

/// Antisymmetrization of the two argument slots of a (1,2) tensor:
///   alt(T)(X,Y) = (T(X,Y) - T(Y,X)) / 2.
TensorValue alt12(const TensorValue& t);

struct RankDecomposition {
    int rank = 0;
    std::vector<std::vector<double>> kernel;  // orthonormal basis vectors
    std::vector<std::vector<double>> image;   // orthonormal basis vectors
};

/// Singular value analysis of a (1,1) field.  rank counts singular values
/// above tol * max(largest singular value, 1).
RankDecomposition rank_with_kernel(const TensorValue& a, double tol);

/// Symmetric eigenvalue range of a (0,2) table, used for the informational
/// definiteness report on metrics.
std::pair<double, double> symmetric_eigen_range(const TensorValue& g);

}  // namespace kcn

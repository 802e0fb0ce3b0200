#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kcn/expr.hpp"
#include "kcn/tensor.hpp"

namespace kcn {

/// A tensor field evaluated at a point together with its first partial
/// derivatives (and second partials when the field came straight from
/// expressions).  d[a] holds the componentwise partial along coordinate a;
/// d2, when present, is row-major [a*dim+b] and symmetric in (a,b).
///
/// Fields produced by the combinators below carry exact first derivatives
/// obtained by jet arithmetic (product rule, and
/// d(M^-1) = -M^-1 (dM) M^-1 for inverses); they do not carry second
/// derivatives.
struct JetTensor {
    TensorValue value;
    std::vector<TensorValue> d;
    std::optional<std::vector<TensorValue>> d2;

    int dim() const { return value.dim(); }
    bool has_first() const { return static_cast<int>(d.size()) == value.dim(); }
    bool has_second() const { return d2.has_value(); }

    const TensorValue& d2_at(int a, int b) const {
        return (*d2)[std::size_t(a) * value.dim() + b];
    }
};

/// Grid of component expressions for a rank-2 tensor field.
struct ExprGrid {
    int dim = 0;
    std::vector<Expression> entries;  // dim*dim, row-major

    ExprGrid() = default;
    explicit ExprGrid(int d) : dim(d), entries(std::size_t(d) * d) {}
    Expression& at(int i, int j) { return entries[std::size_t(i) * dim + j]; }
    const Expression& at(int i, int j) const { return entries[std::size_t(i) * dim + j]; }
};

/// Evaluate a rank-2 expression grid into a JetTensor (2-jet).
JetTensor eval_grid(const ExprGrid& grid, Valence v, std::span<const double> point);

/// Evaluate only the component values of a grid.
TensorValue eval_grid_value(const ExprGrid& grid, Valence v, std::span<const double> point);

JetTensor jet_add(const JetTensor& a, const JetTensor& b);
JetTensor jet_sub(const JetTensor& a, const JetTensor& b);
JetTensor jet_neg(const JetTensor& a);
JetTensor jet_scale(double s, const JetTensor& a);

/// Matrix product of two rank-2 jet fields (contraction of a's second slot
/// with b's first); the caller names the resulting variance.
JetTensor jet_mat_mul(const JetTensor& a, const JetTensor& b, Valence result);

JetTensor jet_mat_transpose(const JetTensor& a, Valence result);

/// Rank-2 inverse with first-derivative propagation.
JetTensor jet_mat_inverse(const JetTensor& a, Valence result, double tol);

/// Wedge of covariant antisymmetric jet fields.
JetTensor jet_wedge(const JetTensor& a, const JetTensor& b);

/// C operator: (C w)(X_1..X_p) = w(J X_1, .., J X_p), with derivative
/// propagation through both w and J.
JetTensor jet_c_operator(const JetTensor& omega, const JetTensor& j_field);

/// Value-only C operator.
TensorValue c_operator(const TensorValue& omega, const TensorValue& j_value);

}  // namespace kcn

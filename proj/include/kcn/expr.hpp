#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcn/errors.hpp"

namespace kcn {

/// Value, gradient and Hessian of a scalar function at a point.
/// The Hessian is stored dense (m*m, row-major) and is exactly symmetric:
/// every entry is written to both triangles from one computed value.
struct Jet2 {
    double value = 0.0;
    std::vector<double> gradient;
    std::vector<double> hessian;

    Jet2() = default;
    explicit Jet2(int m) : gradient(m, 0.0), hessian(std::size_t(m) * m, 0.0) {}

    int dim() const { return static_cast<int>(gradient.size()); }
    double hess(int i, int j) const { return hessian[std::size_t(i) * dim() + j]; }
    void set_hess(int i, int j, double v) {
        hessian[std::size_t(i) * dim() + j] = v;
        hessian[std::size_t(j) * dim() + i] = v;
    }
};

namespace detail {
struct ExprNode;
}

/// Immutable closed-form scalar expression over the coordinates of a chart.
///
/// Grammar (infix, tightest first):  ^  unary-  * /  + -
/// with parentheses, `sin cos exp sqrt` call syntax, numeric literals, and
/// the chart's coordinate names as variables.  Integer exponents only,
/// |k| <= 16.  Expressions are immutable after parse and evaluation is
/// pure, so shared instances may be evaluated concurrently.
class Expression {
  public:
    Expression() = default;

    /// Parse `source` against the declared coordinate names (their number is
    /// the chart dimension).  Throws ParseError with a byte offset.
    static Expression parse(std::string_view source, std::span<const std::string> coords);

    /// Convenience: constant expression.
    static Expression constant(double v);

    bool empty() const { return root_ == nullptr; }
    int dim() const { return dim_; }

    /// Fully parenthesized canonical text; parse(serialize()) reproduces the
    /// same tree.
    std::string serialize() const;

    /// Value only (no derivatives).  Throws DomainError.
    double eval(std::span<const double> point) const;

    /// Value, gradient and Hessian by forward-mode automatic
    /// differentiation.  Throws DomainError naming the offending
    /// subexpression.
    Jet2 eval_jet2(std::span<const double> point) const;

    bool structurally_equal(const Expression& other) const;

  private:
    std::shared_ptr<const detail::ExprNode> root_;
    std::shared_ptr<const std::vector<std::string>> coords_;
    int dim_ = 0;
};

}  // namespace kcn

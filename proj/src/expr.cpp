#include "kcn/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace kcn {
namespace detail {

enum class Kind {
    Constant,
    Coordinate,
    Negate,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Exp,
    Sqrt,
};

struct ExprNode {
    Kind kind;
    double constant = 0.0;  // Constant
    int coord = -1;         // Coordinate
    int exponent = 0;       // Pow
    std::shared_ptr<const ExprNode> lhs, rhs;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace {

constexpr int kMaxExponent = 16;
constexpr double kDivFloor = 1e-14;

NodePtr make(Kind k, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

// ---------------------------------------------------------------------------
// Parser: plain recursive descent over the raw bytes, offsets kept for
// diagnostics.

class Parser {
  public:
    Parser(std::string_view src, std::span<const std::string> coords)
        : src_(src), coords_(coords) {}

    NodePtr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
        NodePtr e = sum();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    std::string_view src_;
    std::span<const std::string> coords_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) throw ParseError(std::string("expected `") + c + "` " + what, pos_);
    }

    NodePtr sum() {
        NodePtr e = term();
        for (;;) {
            if (accept('+'))
                e = make(Kind::Add, e, term());
            else if (accept('-'))
                e = make(Kind::Sub, e, term());
            else
                return e;
        }
    }

    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            if (accept('*'))
                e = make(Kind::Mul, e, unary());
            else if (accept('/'))
                e = make(Kind::Div, e, unary());
            else
                return e;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::Negate, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        while (accept('^')) {
            std::size_t at = pos_;
            long k = exponent();
            if (std::labs(k) > kMaxExponent)
                throw ParseError("integer exponent out of range (|k| <= 16)", at);
            auto n = std::make_shared<ExprNode>();
            n->kind = Kind::Pow;
            n->lhs = base;
            n->exponent = static_cast<int>(k);
            base = n;
        }
        return base;
    }

    long exponent() {
        skip_ws();
        bool paren = accept('(');
        skip_ws();
        bool neg = accept('-');
        skip_ws();
        std::size_t at = pos_;
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
            throw ParseError("integer exponent expected after `^`", at);
        long v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            v = v * 10 + (src_[pos_] - '0');
            if (v > 1000) throw ParseError("integer exponent out of range (|k| <= 16)", at);
            ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
            throw ParseError("integer exponent expected after `^`", at);
        if (paren) expect(')', "closing the exponent");
        return neg ? -v : v;
    }

    NodePtr primary() {
        skip_ws();
        std::size_t at = pos_;
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", at);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            expect(')', "closing a parenthesized expression");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(at);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier(at);
        throw ParseError("unexpected character", at);
    }

    NodePtr number(std::size_t at) {
        // strtod accepts leading signs and "inf"/"nan"; the grammar routes
        // signs through unary- and identifiers elsewhere, so plain digits or
        // '.' reach this point.
        std::string buf(src_.substr(pos_));
        char* end = nullptr;
        double v = std::strtod(buf.c_str(), &end);
        if (end == buf.c_str()) throw ParseError("malformed numeric literal", at);
        pos_ += static_cast<std::size_t>(end - buf.c_str());
        auto n = std::make_shared<ExprNode>();
        n->kind = Kind::Constant;
        n->constant = v;
        return n;
    }

    NodePtr identifier(std::size_t at) {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt") {
            expect('(', "to open a function argument list");
            NodePtr arg = sum();
            skip_ws();
            if (peek() == ',')
                throw ParseError("function takes exactly one argument", pos_);
            expect(')', "closing a function argument list");
            Kind k = name == "sin"   ? Kind::Sin
                     : name == "cos" ? Kind::Cos
                     : name == "exp" ? Kind::Exp
                                     : Kind::Sqrt;
            return make(k, arg);
        }
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (coords_[i] == name) {
                auto n = std::make_shared<ExprNode>();
                n->kind = Kind::Coordinate;
                n->coord = static_cast<int>(i);
                return n;
            }
        }
        throw ParseError("unknown identifier `" + std::string(name) + "`", at);
    }
};

// ---------------------------------------------------------------------------
// Serialization

void format_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void serialize_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case Kind::Constant:
            format_double(out, n.constant);
            break;
        case Kind::Coordinate:
            out += "@" + std::to_string(n.coord);  // replaced by caller
            break;
        case Kind::Negate:
            out += "(-";
            serialize_node(*n.lhs, out);
            out += ")";
            break;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            const char* op = n.kind == Kind::Add   ? " + "
                             : n.kind == Kind::Sub ? " - "
                             : n.kind == Kind::Mul ? " * "
                                                   : " / ";
            out += "(";
            serialize_node(*n.lhs, out);
            out += op;
            serialize_node(*n.rhs, out);
            out += ")";
            break;
        }
        case Kind::Pow:
            out += "(";
            serialize_node(*n.lhs, out);
            out += n.exponent < 0 ? "^(" + std::to_string(n.exponent) + ")"
                                  : "^" + std::to_string(n.exponent);
            out += ")";
            break;
        case Kind::Sin:
        case Kind::Cos:
        case Kind::Exp:
        case Kind::Sqrt: {
            const char* f = n.kind == Kind::Sin   ? "sin("
                            : n.kind == Kind::Cos ? "cos("
                            : n.kind == Kind::Exp ? "exp("
                                                  : "sqrt(";
            out += f;
            serialize_node(*n.lhs, out);
            out += ")";
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// 2-jet arithmetic

Jet2 jet_const(double v, int m) {
    Jet2 j(m);
    j.value = v;
    return j;
}

Jet2 jet_coord(double v, int i, int m) {
    Jet2 j(m);
    j.value = v;
    j.gradient[i] = 1.0;
    return j;
}

Jet2 jet_add(const Jet2& a, const Jet2& b) {
    Jet2 r(a.dim());
    r.value = a.value + b.value;
    for (int i = 0; i < a.dim(); ++i) r.gradient[i] = a.gradient[i] + b.gradient[i];
    for (std::size_t i = 0; i < a.hessian.size(); ++i) r.hessian[i] = a.hessian[i] + b.hessian[i];
    return r;
}

Jet2 jet_sub(const Jet2& a, const Jet2& b) {
    Jet2 r(a.dim());
    r.value = a.value - b.value;
    for (int i = 0; i < a.dim(); ++i) r.gradient[i] = a.gradient[i] - b.gradient[i];
    for (std::size_t i = 0; i < a.hessian.size(); ++i) r.hessian[i] = a.hessian[i] - b.hessian[i];
    return r;
}

Jet2 jet_neg(const Jet2& a) {
    Jet2 r(a.dim());
    r.value = -a.value;
    for (int i = 0; i < a.dim(); ++i) r.gradient[i] = -a.gradient[i];
    for (std::size_t i = 0; i < a.hessian.size(); ++i) r.hessian[i] = -a.hessian[i];
    return r;
}

Jet2 jet_mul(const Jet2& a, const Jet2& b) {
    const int m = a.dim();
    Jet2 r(m);
    r.value = a.value * b.value;
    for (int i = 0; i < m; ++i)
        r.gradient[i] = a.value * b.gradient[i] + b.value * a.gradient[i];
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            r.set_hess(i, j, a.value * b.hess(i, j) + b.value * a.hess(i, j) +
                                 a.gradient[i] * b.gradient[j] + a.gradient[j] * b.gradient[i]);
    return r;
}

// Chain rule for a univariate f applied to jet u: needs f(u), f'(u), f''(u).
Jet2 jet_chain(const Jet2& u, double f, double df, double ddf) {
    const int m = u.dim();
    Jet2 r(m);
    r.value = f;
    for (int i = 0; i < m; ++i) r.gradient[i] = df * u.gradient[i];
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            r.set_hess(i, j, df * u.hess(i, j) + ddf * u.gradient[i] * u.gradient[j]);
    return r;
}

std::string describe(const ExprNode& n, std::span<const std::string> coords);

Jet2 jet_div(const Jet2& a, const Jet2& b, const ExprNode& at,
             std::span<const std::string> coords) {
    if (std::abs(b.value) < kDivFloor)
        throw DomainError("division by ~0", describe(at, coords));
    const double inv = 1.0 / b.value;
    Jet2 binv = jet_chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
    return jet_mul(a, binv);
}

Jet2 jet_pow(const Jet2& u, int k, const ExprNode& at, std::span<const std::string> coords) {
    if (k == 0) return jet_const(1.0, u.dim());
    if (k < 0 && std::abs(u.value) < kDivFloor)
        throw DomainError("negative power of ~0", describe(at, coords));
    const double f = std::pow(u.value, k);
    const double df = k * std::pow(u.value, k - 1);
    const double ddf = (k == 1) ? 0.0 : double(k) * (k - 1) * std::pow(u.value, k - 2);
    return jet_chain(u, f, df, ddf);
}

Jet2 jet_sqrt(const Jet2& u, const ExprNode& at, std::span<const std::string> coords) {
    if (u.value <= 0.0)
        throw DomainError("sqrt of a non-positive argument", describe(at, coords));
    const double s = std::sqrt(u.value);
    return jet_chain(u, s, 0.5 / s, -0.25 / (s * u.value));
}

Jet2 eval_node(const ExprNode& n, std::span<const double> x,
               std::span<const std::string> coords) {
    const int m = static_cast<int>(x.size());
    switch (n.kind) {
        case Kind::Constant:
            return jet_const(n.constant, m);
        case Kind::Coordinate:
            return jet_coord(x[n.coord], n.coord, m);
        case Kind::Negate:
            return jet_neg(eval_node(*n.lhs, x, coords));
        case Kind::Add:
            return jet_add(eval_node(*n.lhs, x, coords), eval_node(*n.rhs, x, coords));
        case Kind::Sub:
            return jet_sub(eval_node(*n.lhs, x, coords), eval_node(*n.rhs, x, coords));
        case Kind::Mul:
            return jet_mul(eval_node(*n.lhs, x, coords), eval_node(*n.rhs, x, coords));
        case Kind::Div:
            return jet_div(eval_node(*n.lhs, x, coords), eval_node(*n.rhs, x, coords), n, coords);
        case Kind::Pow:
            return jet_pow(eval_node(*n.lhs, x, coords), n.exponent, n, coords);
        case Kind::Sin: {
            Jet2 u = eval_node(*n.lhs, x, coords);
            return jet_chain(u, std::sin(u.value), std::cos(u.value), -std::sin(u.value));
        }
        case Kind::Cos: {
            Jet2 u = eval_node(*n.lhs, x, coords);
            return jet_chain(u, std::cos(u.value), -std::sin(u.value), -std::cos(u.value));
        }
        case Kind::Exp: {
            Jet2 u = eval_node(*n.lhs, x, coords);
            const double e = std::exp(u.value);
            return jet_chain(u, e, e, e);
        }
        case Kind::Sqrt:
            return jet_sqrt(eval_node(*n.lhs, x, coords), n, coords);
    }
    throw Error("unreachable expression node kind");
}

double eval_value(const ExprNode& n, std::span<const double> x,
                  std::span<const std::string> coords) {
    switch (n.kind) {
        case Kind::Constant:
            return n.constant;
        case Kind::Coordinate:
            return x[n.coord];
        case Kind::Negate:
            return -eval_value(*n.lhs, x, coords);
        case Kind::Add:
            return eval_value(*n.lhs, x, coords) + eval_value(*n.rhs, x, coords);
        case Kind::Sub:
            return eval_value(*n.lhs, x, coords) - eval_value(*n.rhs, x, coords);
        case Kind::Mul:
            return eval_value(*n.lhs, x, coords) * eval_value(*n.rhs, x, coords);
        case Kind::Div: {
            double b = eval_value(*n.rhs, x, coords);
            if (std::abs(b) < kDivFloor)
                throw DomainError("division by ~0", describe(n, coords));
            return eval_value(*n.lhs, x, coords) / b;
        }
        case Kind::Pow: {
            double u = eval_value(*n.lhs, x, coords);
            if (n.exponent < 0 && std::abs(u) < kDivFloor)
                throw DomainError("negative power of ~0", describe(n, coords));
            return std::pow(u, n.exponent);
        }
        case Kind::Sin:
            return std::sin(eval_value(*n.lhs, x, coords));
        case Kind::Cos:
            return std::cos(eval_value(*n.lhs, x, coords));
        case Kind::Exp:
            return std::exp(eval_value(*n.lhs, x, coords));
        case Kind::Sqrt: {
            double u = eval_value(*n.lhs, x, coords);
            if (u <= 0.0) throw DomainError("sqrt of a non-positive argument", describe(n, coords));
            return std::sqrt(u);
        }
    }
    throw Error("unreachable expression node kind");
}

std::string serialize_with_names(const ExprNode& root, std::span<const std::string> coords) {
    std::string raw;
    serialize_node(root, raw);
    // Substitute coordinate placeholders with the declared names.
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
        if (raw[i] == '@') {
            std::size_t j = i + 1;
            int idx = 0;
            while (j < raw.size() && std::isdigit(static_cast<unsigned char>(raw[j])))
                idx = idx * 10 + (raw[j++] - '0');
            if (coords.empty())
                out += "x" + std::to_string(idx + 1);
            else
                out += coords[idx];
            i = j;
        } else {
            out += raw[i++];
        }
    }
    return out;
}

std::string describe(const ExprNode& n, std::span<const std::string> coords) {
    return serialize_with_names(n, coords);
}

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::Constant:
            return a.constant == b.constant;
        case Kind::Coordinate:
            return a.coord == b.coord;
        case Kind::Pow:
            return a.exponent == b.exponent && nodes_equal(*a.lhs, *b.lhs);
        default:
            if ((a.lhs == nullptr) != (b.lhs == nullptr)) return false;
            if ((a.rhs == nullptr) != (b.rhs == nullptr)) return false;
            if (a.lhs && !nodes_equal(*a.lhs, *b.lhs)) return false;
            if (a.rhs && !nodes_equal(*a.rhs, *b.rhs)) return false;
            return true;
    }
}

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------

Expression Expression::parse(std::string_view source, std::span<const std::string> coords) {
    if (source.empty()) throw ParseError("empty expression", 0);
    detail::Parser p(source, coords);
    Expression e;
    e.root_ = p.run();
    e.coords_ = std::make_shared<const std::vector<std::string>>(coords.begin(), coords.end());
    e.dim_ = static_cast<int>(coords.size());
    return e;
}

Expression Expression::constant(double v) {
    auto n = std::make_shared<detail::ExprNode>();
    n->kind = detail::Kind::Constant;
    n->constant = v;
    Expression e;
    e.root_ = std::move(n);
    e.dim_ = 0;
    return e;
}

namespace {
const std::vector<std::string> kNoCoords;
}

std::string Expression::serialize() const {
    if (!root_) return "0";
    return detail::serialize_with_names(*root_, coords_ ? *coords_ : kNoCoords);
}

double Expression::eval(std::span<const double> point) const {
    if (!root_) return 0.0;
    return detail::eval_value(*root_, point, coords_ ? *coords_ : kNoCoords);
}

Jet2 Expression::eval_jet2(std::span<const double> point) const {
    if (!root_) return detail::jet_const(0.0, static_cast<int>(point.size()));
    if (static_cast<int>(point.size()) < dim_)
        throw DimensionMismatch("point has fewer coordinates than the expression references");
    return detail::eval_node(*root_, point, coords_ ? *coords_ : kNoCoords);
}

bool Expression::structurally_equal(const Expression& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return detail::nodes_equal(*root_, *other.root_);
}

}  // namespace kcn

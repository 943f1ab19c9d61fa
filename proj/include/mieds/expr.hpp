#pragma once

// Vector fields as immutable expression graphs. One representation serves
// both point evaluation and exact truncated Taylor expansion (jets) about any
// non-singular center.

#include "mieds/error.hpp"
#include "mieds/taylor.hpp"

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace mieds {

/// |denominator| (or |cos| for tan) below this raises a DomainError.
inline constexpr double kSingularityTolerance = 1e-12;

class Expr {
public:
    enum class Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Tan, Tanh };

    static Expr constant(double value) { return Expr(std::make_shared<Node>(Node{Kind::Const, value, 0, 0, {}, {}})); }
    static Expr variable(std::size_t index) { return Expr(std::make_shared<Node>(Node{Kind::Var, 0.0, index, 0, {}, {}})); }

    static Expr unary(Kind kind, const Expr& child) {
        if (kind != Kind::Neg && kind != Kind::Sin && kind != Kind::Cos && kind != Kind::Tan && kind != Kind::Tanh)
            throw ConfigError("expr", "not a unary node kind");
        return Expr(std::make_shared<Node>(Node{kind, 0.0, 0, 0, child.node_, {}}));
    }

    static Expr binary(Kind kind, const Expr& lhs, const Expr& rhs) {
        if (kind != Kind::Add && kind != Kind::Sub && kind != Kind::Mul && kind != Kind::Div)
            throw ConfigError("expr", "not a binary node kind");
        return Expr(std::make_shared<Node>(Node{kind, 0.0, 0, 0, lhs.node_, rhs.node_}));
    }

    static Expr power(const Expr& base, int exponent) {
        if (exponent < 0) throw ConfigError("expr", "Pow exponent must be a non-negative integer");
        return Expr(std::make_shared<Node>(Node{Kind::Pow, 0.0, 0, exponent, base.node_, {}}));
    }

    Kind kind() const noexcept { return node_->kind; }
    double value() const noexcept { return node_->value; }
    std::size_t index() const noexcept { return node_->index; }
    int exponent() const noexcept { return node_->exponent; }
    Expr lhs() const { return Expr(node_->lhs); }
    Expr rhs() const { return Expr(node_->rhs); }

    /// Identity of the underlying node; shared subgraphs compare equal.
    const void* id() const noexcept { return node_.get(); }

    /// One past the largest Var index in the graph (0 if there are none).
    std::size_t arity() const {
        std::size_t n = 0;
        visit(*node_, [&n](const Node& x) {
            if (x.kind == Kind::Var) n = std::max(n, x.index + 1);
        });
        return n;
    }

private:
    struct Node {
        Kind kind;
        double value;
        std::size_t index;
        int exponent;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    template <class F>
    static void visit(const Node& n, F&& f) {
        f(n);
        if (n.lhs) visit(*n.lhs, f);
        if (n.rhs) visit(*n.rhs, f);
    }

    std::shared_ptr<const Node> node_;
};

inline Expr var(std::size_t index) { return Expr::variable(index); }
inline Expr constant(double value) { return Expr::constant(value); }

inline Expr operator-(const Expr& e) { return Expr::unary(Expr::Kind::Neg, e); }
inline Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Add, a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Sub, a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Mul, a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Expr::Kind::Div, a, b); }
inline Expr operator+(const Expr& a, double b) { return a + constant(b); }
inline Expr operator+(double a, const Expr& b) { return constant(a) + b; }
inline Expr operator-(const Expr& a, double b) { return a - constant(b); }
inline Expr operator-(double a, const Expr& b) { return constant(a) - b; }
inline Expr operator*(const Expr& a, double b) { return a * constant(b); }
inline Expr operator*(double a, const Expr& b) { return constant(a) * b; }
inline Expr operator/(const Expr& a, double b) { return a / constant(b); }
inline Expr operator/(double a, const Expr& b) { return constant(a) / b; }
inline Expr pow(const Expr& base, int exponent) { return Expr::power(base, exponent); }
inline Expr sin(const Expr& e) { return Expr::unary(Expr::Kind::Sin, e); }
inline Expr cos(const Expr& e) { return Expr::unary(Expr::Kind::Cos, e); }
inline Expr tan(const Expr& e) { return Expr::unary(Expr::Kind::Tan, e); }
inline Expr tanh(const Expr& e) { return Expr::unary(Expr::Kind::Tanh, e); }

inline double eval(const Expr& e, std::span<const double> x) {
    using K = Expr::Kind;
    switch (e.kind()) {
    case K::Const: return e.value();
    case K::Var:
        if (e.index() >= x.size()) throw ConfigError("expr", "state has fewer components than variable index");
        return x[e.index()];
    case K::Neg: return -eval(e.lhs(), x);
    case K::Add: return eval(e.lhs(), x) + eval(e.rhs(), x);
    case K::Sub: return eval(e.lhs(), x) - eval(e.rhs(), x);
    case K::Mul: return eval(e.lhs(), x) * eval(e.rhs(), x);
    case K::Div: {
        const double den = eval(e.rhs(), x);
        if (std::abs(den) < kSingularityTolerance) throw DomainError("expr", "division by zero");
        return eval(e.lhs(), x) / den;
    }
    case K::Pow: {
        const double b = eval(e.lhs(), x);
        double r = 1.0;
        for (int i = 0; i < e.exponent(); ++i) r *= b;
        return r;
    }
    case K::Sin: return std::sin(eval(e.lhs(), x));
    case K::Cos: return std::cos(eval(e.lhs(), x));
    case K::Tan: {
        const double a = eval(e.lhs(), x);
        if (std::abs(std::cos(a)) < kSingularityTolerance) throw DomainError("expr", "tan at an odd multiple of pi/2");
        return std::tan(a);
    }
    case K::Tanh: return std::tanh(eval(e.lhs(), x));
    }
    throw ConfigError("expr", "unknown node kind");
}

namespace detail {

// Univariate Taylor coefficients c_j = g^(j)(a)/j!, j = 0..d, of the
// elementary functions, from their derivative recurrences.

inline std::vector<double> sin_cos_series(double a, int d, bool cosine) {
    // derivatives cycle sin, cos, -sin, -cos
    const double s = std::sin(a), c = std::cos(a);
    const double cycle_sin[4] = {s, c, -s, -c};
    const double cycle_cos[4] = {c, -s, -c, s};
    std::vector<double> out(static_cast<std::size_t>(d) + 1);
    double inv_fact = 1.0;
    for (int j = 0; j <= d; ++j) {
        if (j > 0) inv_fact /= j;
        out[static_cast<std::size_t>(j)] = (cosine ? cycle_cos[j % 4] : cycle_sin[j % 4]) * inv_fact;
    }
    return out;
}

// g' = 1 + sign·g², g(a) = g0: (j+1) c_{j+1} = [j == 0] + sign · Σ_{i≤j} c_i c_{j−i}
inline std::vector<double> riccati_series(double g0, int d, double sign) {
    std::vector<double> c(static_cast<std::size_t>(d) + 1, 0.0);
    c[0] = g0;
    for (int j = 0; j < d; ++j) {
        double conv = 0.0;
        for (int i = 0; i <= j; ++i) conv += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j - i)];
        c[static_cast<std::size_t>(j + 1)] = ((j == 0 ? 1.0 : 0.0) + sign * conv) / (j + 1);
    }
    return c;
}

inline std::vector<double> tan_series(double a, int d) {
    if (std::abs(std::cos(a)) < kSingularityTolerance)
        throw DomainError("expr", "tan expanded at an odd multiple of pi/2");
    return riccati_series(std::tan(a), d, 1.0);
}

inline std::vector<double> tanh_series(double a, int d) { return riccati_series(std::tanh(a), d, -1.0); }

// 1/(b + h) = Σ (−1)^j h^j / b^{j+1}
inline std::vector<double> reciprocal_series(double b, int d) {
    if (std::abs(b) < kSingularityTolerance) throw DomainError("expr", "division by zero in expansion");
    std::vector<double> c(static_cast<std::size_t>(d) + 1);
    double term = 1.0 / b;
    for (int j = 0; j <= d; ++j) {
        c[static_cast<std::size_t>(j)] = term;
        term *= -1.0 / b;
    }
    return c;
}

inline TruncatedPoly apply_series(const TruncatedPoly& p, const std::vector<double>& series) {
    TruncatedPoly shifted = p;
    shifted += -p.constant_term();
    return compose_univariate(series, shifted);
}

class JetEvaluator {
public:
    JetEvaluator(std::span<const double> center, int degree) : center_(center), degree_(degree) {}

    const TruncatedPoly& operator()(const Expr& e) {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
        return memo_.emplace(e.id(), compute(e)).first->second;
    }

private:
    TruncatedPoly compute(const Expr& e) {
        using K = Expr::Kind;
        const std::size_t n = center_.size();
        switch (e.kind()) {
        case K::Const: return TruncatedPoly::constant(n, degree_, e.value());
        case K::Var:
            if (e.index() >= n) throw ConfigError("expr", "center has fewer components than variable index");
            return TruncatedPoly::variable(n, degree_, e.index(), center_[e.index()]);
        case K::Neg: return -(*this)(e.lhs());
        case K::Add: return (*this)(e.lhs()) + (*this)(e.rhs());
        case K::Sub: return (*this)(e.lhs()) - (*this)(e.rhs());
        case K::Mul: return (*this)(e.lhs()) * (*this)(e.rhs());
        case K::Div: {
            const TruncatedPoly& den = (*this)(e.rhs());
            TruncatedPoly inv = apply_series(den, reciprocal_series(den.constant_term(), degree_));
            return (*this)(e.lhs()) * inv;
        }
        case K::Pow: {
            TruncatedPoly result = TruncatedPoly::constant(n, degree_, 1.0);
            TruncatedPoly base = (*this)(e.lhs());
            for (int k = e.exponent(); k > 0; k >>= 1) {
                if (k & 1) result = result * base;
                if (k > 1) base = base * base;
            }
            return result;
        }
        case K::Sin: {
            const TruncatedPoly& a = (*this)(e.lhs());
            return apply_series(a, sin_cos_series(a.constant_term(), degree_, false));
        }
        case K::Cos: {
            const TruncatedPoly& a = (*this)(e.lhs());
            return apply_series(a, sin_cos_series(a.constant_term(), degree_, true));
        }
        case K::Tan: {
            const TruncatedPoly& a = (*this)(e.lhs());
            return apply_series(a, tan_series(a.constant_term(), degree_));
        }
        case K::Tanh: {
            const TruncatedPoly& a = (*this)(e.lhs());
            return apply_series(a, tanh_series(a.constant_term(), degree_));
        }
        }
        throw ConfigError("expr", "unknown node kind");
    }

    std::span<const double> center_;
    int degree_;
    std::unordered_map<const void*, TruncatedPoly> memo_;
};

} // namespace detail

/// Exact Taylor expansion of `e` about `center`, truncated at total degree
/// `degree`, obtained by propagating truncated polynomials through the graph.
inline TruncatedPoly eval_jet(const Expr& e, std::span<const double> center, int degree) {
    if (center.empty()) throw ConfigError("expr", "expansion center must be non-empty");
    detail::JetEvaluator jets(center, degree);
    return jets(e);
}

/// ẋ = f(x) with f given component-wise as expression graphs.
class VectorField {
public:
    explicit VectorField(std::vector<Expr> components) : components_(std::move(components)) {
        if (components_.empty()) throw ConfigError("expr", "vector field needs at least one component");
        for (const auto& c : components_)
            if (c.arity() > components_.size())
                throw ConfigError("expr", "variable index exceeds field dimension " + std::to_string(components_.size()));
    }

    std::size_t dim() const noexcept { return components_.size(); }
    const std::vector<Expr>& components() const noexcept { return components_; }

    State operator()(std::span<const double> x) const {
        if (x.size() != dim())
            throw ConfigError("expr", "state has dimension " + std::to_string(x.size()) + ", field expects " +
                                          std::to_string(dim()));
        State out(dim());
        for (std::size_t i = 0; i < dim(); ++i) out[i] = mieds::eval(components_[i], x);
        return out;
    }

private:
    std::vector<Expr> components_;
};

inline State eval(const VectorField& field, std::span<const double> x) { return field(x); }

/// Degree-k local model of `field` about `center`: the jets of all components,
/// sharing the memo so common subgraphs are expanded once.
inline LocalModel field_jet(const VectorField& field, std::span<const double> center, int degree) {
    if (center.size() != field.dim()) throw ConfigError("expr", "expansion center has wrong dimension");
    detail::JetEvaluator jets(center, degree);
    std::vector<TruncatedPoly> comps;
    comps.reserve(field.dim());
    for (const auto& c : field.components()) comps.push_back(jets(c));
    return LocalModel(State(center.begin(), center.end()), std::move(comps));
}

} // namespace mieds

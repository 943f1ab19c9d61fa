#pragma once

// Truncated multivariate polynomials in the displacement δ = x − x* and the
// LocalModel record built from them.
//
// Coefficients are stored densely over a shared monomial basis in graded
// lexicographic order (total degree first, then descending lex with
// x0 > x1 > ...). Truncating a polynomial to a lower degree is therefore a
// prefix copy.

#include "mieds/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mieds {

using State = std::vector<double>;
using MultiIndex = std::vector<int>;

/// Largest truncation degree accepted by the jet machinery.
inline constexpr int kMaxDegree = 16;

inline std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// All monomials in `dim` variables of total degree ≤ `degree`, in graded-lex
/// order, plus the index tables needed for multiplication and evaluation.
/// Instances are immutable and shared through `MonomialBasis::get`.
class MonomialBasis {
public:
    struct Product {
        std::uint32_t lhs;
        std::uint32_t rhs;
        std::uint32_t out;
    };

    static std::shared_ptr<const MonomialBasis> get(std::size_t dim, int degree) {
        if (dim == 0) throw ConfigError("taylor", "polynomial dimension must be at least 1");
        if (degree < 0 || degree > kMaxDegree)
            throw ConfigError("taylor", "truncation degree " + std::to_string(degree) + " outside [0, " +
                                            std::to_string(kMaxDegree) + "]");
        static std::mutex mutex;
        static std::map<std::pair<std::size_t, int>, std::shared_ptr<const MonomialBasis>> cache;
        std::lock_guard lock(mutex);
        auto& slot = cache[{dim, degree}];
        if (!slot) slot = std::shared_ptr<const MonomialBasis>(new MonomialBasis(dim, degree));
        return slot;
    }

    std::size_t dim() const noexcept { return dim_; }
    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return exponents_.size(); }

    const MultiIndex& exponents(std::size_t i) const { return exponents_.at(i); }
    int total_degree(std::size_t i) const { return total_degree_.at(i); }

    /// Number of monomials of total degree ≤ d, i.e. C(dim + d, d).
    std::size_t count_up_to(int d) const { return binomial(dim_ + static_cast<std::size_t>(d), static_cast<std::size_t>(d)); }

    /// Position of `alpha` in the basis; throws if it has the wrong length or
    /// exceeds the truncation degree.
    std::size_t index_of(const MultiIndex& alpha) const {
        auto it = index_.find(alpha);
        if (it == index_.end()) throw ConfigError("taylor", "multi-index not in basis");
        return it->second;
    }

    bool contains(const MultiIndex& alpha) const { return index_.count(alpha) != 0; }

    /// Pairs (lhs, rhs) whose product survives truncation, sorted by lhs.
    std::span<const Product> products() const noexcept { return products_; }

    /// For monomial i of degree ≥ 1: i = parent(i) · δ_{factor(i)}.
    std::size_t parent(std::size_t i) const { return parent_.at(i); }
    std::size_t factor(std::size_t i) const { return factor_.at(i); }

    /// Values of every basis monomial at displacement `delta`.
    void monomial_values(std::span<const double> delta, std::vector<double>& out) const {
        out.resize(size());
        out[0] = 1.0;
        for (std::size_t i = 1; i < size(); ++i) out[i] = out[parent_[i]] * delta[factor_[i]];
    }

private:
    MonomialBasis(std::size_t dim, int degree) : dim_(dim), degree_(degree) {
        MultiIndex alpha(dim, 0);
        for (int d = 0; d <= degree; ++d) enumerate(alpha, 0, d);
        for (std::size_t i = 0; i < exponents_.size(); ++i) index_.emplace(exponents_[i], i);

        parent_.assign(size(), 0);
        factor_.assign(size(), 0);
        for (std::size_t i = 1; i < size(); ++i) {
            MultiIndex p = exponents_[i];
            std::size_t v = 0;
            while (p[v] == 0) ++v;
            --p[v];
            parent_[i] = index_.at(p);
            factor_[i] = v;
        }

        MultiIndex sum(dim);
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t j = 0; j < size(); ++j) {
                if (total_degree_[i] + total_degree_[j] > degree) break; // basis is graded
                for (std::size_t v = 0; v < dim; ++v) sum[v] = exponents_[i][v] + exponents_[j][v];
                products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                     static_cast<std::uint32_t>(index_.at(sum))});
            }
        }
    }

    // Exponent vectors of total degree `remaining` over variables [var, dim),
    // in descending lex order.
    void enumerate(MultiIndex& alpha, std::size_t var, int remaining) {
        if (var + 1 == dim_) {
            alpha[var] = remaining;
            exponents_.push_back(alpha);
            int total = 0;
            for (int e : alpha) total += e;
            total_degree_.push_back(total);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            alpha[var] = e;
            enumerate(alpha, var + 1, remaining - e);
        }
        alpha[var] = 0;
    }

    std::size_t dim_;
    int degree_;
    std::vector<MultiIndex> exponents_;
    std::vector<int> total_degree_;
    std::map<MultiIndex, std::size_t> index_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> factor_;
    std::vector<Product> products_;
};

/// Polynomial in δ truncated at a fixed total degree.
class TruncatedPoly {
public:
    TruncatedPoly(std::size_t dim, int degree)
        : basis_(MonomialBasis::get(dim, degree)), coeffs_(basis_->size(), 0.0) {}

    TruncatedPoly(std::size_t dim, int degree, std::vector<double> coefficients)
        : basis_(MonomialBasis::get(dim, degree)), coeffs_(std::move(coefficients)) {
        if (coeffs_.size() != basis_->size())
            throw ConfigError("taylor", "expected " + std::to_string(basis_->size()) + " coefficients, got " +
                                            std::to_string(coeffs_.size()));
    }

    static TruncatedPoly constant(std::size_t dim, int degree, double value) {
        TruncatedPoly p(dim, degree);
        p.coeffs_[0] = value;
        return p;
    }

    /// center + δ_index
    static TruncatedPoly variable(std::size_t dim, int degree, std::size_t index, double center) {
        if (index >= dim) throw ConfigError("taylor", "variable index out of range");
        TruncatedPoly p = constant(dim, degree, center);
        if (degree >= 1) p.coeffs_[1 + index] = 1.0;
        return p;
    }

    std::size_t dim() const noexcept { return basis_->dim(); }
    int degree() const noexcept { return basis_->degree(); }
    const MonomialBasis& basis() const noexcept { return *basis_; }

    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double constant_term() const noexcept { return coeffs_[0]; }

    /// Coefficient of δ^alpha; zero for indices above the truncation degree.
    double coefficient(const MultiIndex& alpha) const {
        if (alpha.size() != dim()) throw ConfigError("taylor", "multi-index has wrong dimension");
        return basis_->contains(alpha) ? coeffs_[basis_->index_of(alpha)] : 0.0;
    }

    void set_coefficient(const MultiIndex& alpha, double value) {
        if (alpha.size() != dim()) throw ConfigError("taylor", "multi-index has wrong dimension");
        coeffs_[basis_->index_of(alpha)] = value;
    }

    /// Drops every monomial of total degree above `d` and returns a polynomial
    /// truncated at `d`.
    TruncatedPoly truncated(int d) const {
        if (d > degree()) throw ConfigError("taylor", "cannot raise truncation degree");
        TruncatedPoly r(dim(), d);
        std::copy_n(coeffs_.begin(), r.coeffs_.size(), r.coeffs_.begin());
        return r;
    }

    double evaluate(std::span<const double> delta) const {
        if (delta.size() != dim()) throw ConfigError("taylor", "evaluation point has wrong dimension");
        std::vector<double> monos;
        basis_->monomial_values(delta, monos);
        return dot(monos);
    }

    /// Σ c_i · monos_i for precomputed monomial values.
    double dot(std::span<const double> monos) const {
        double s = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) s += coeffs_[i] * monos[i];
        return s;
    }

    TruncatedPoly& operator+=(const TruncatedPoly& o) {
        require_compatible(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    TruncatedPoly& operator-=(const TruncatedPoly& o) {
        require_compatible(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    TruncatedPoly& operator*=(double s) {
        for (double& c : coeffs_) c *= s;
        return *this;
    }
    TruncatedPoly& operator+=(double s) {
        coeffs_[0] += s;
        return *this;
    }

    friend TruncatedPoly operator+(TruncatedPoly a, const TruncatedPoly& b) { return a += b; }
    friend TruncatedPoly operator-(TruncatedPoly a, const TruncatedPoly& b) { return a -= b; }
    friend TruncatedPoly operator*(TruncatedPoly a, double s) { return a *= s; }
    friend TruncatedPoly operator*(double s, TruncatedPoly a) { return a *= s; }
    friend TruncatedPoly operator+(TruncatedPoly a, double s) { return a += s; }
    friend TruncatedPoly operator-(TruncatedPoly a) { return a *= -1.0; }

    friend TruncatedPoly operator*(const TruncatedPoly& a, const TruncatedPoly& b) {
        a.require_compatible(b);
        TruncatedPoly r(a.dim(), a.degree());
        std::uint32_t skip = UINT32_MAX;
        for (const auto& p : a.basis_->products()) {
            if (p.lhs == skip) continue;
            const double x = a.coeffs_[p.lhs];
            if (x == 0.0) {
                skip = p.lhs;
                continue;
            }
            r.coeffs_[p.out] += x * b.coeffs_[p.rhs];
        }
        return r;
    }

    friend bool operator==(const TruncatedPoly& a, const TruncatedPoly& b) {
        return a.dim() == b.dim() && a.degree() == b.degree() && a.coeffs_ == b.coeffs_;
    }

private:
    void require_compatible(const TruncatedPoly& o) const {
        if (dim() != o.dim() || degree() != o.degree())
            throw ConfigError("taylor", "dimension/degree mismatch (" + std::to_string(dim()) + "," +
                                            std::to_string(degree()) + ") vs (" + std::to_string(o.dim()) + "," +
                                            std::to_string(o.degree()) + ")");
    }

    std::shared_ptr<const MonomialBasis> basis_;
    std::vector<double> coeffs_;
};

inline TruncatedPoly poly_add(const TruncatedPoly& a, const TruncatedPoly& b) { return a + b; }
inline TruncatedPoly poly_mul(const TruncatedPoly& a, const TruncatedPoly& b) { return a * b; }

/// Σ_j series[j] · p^j truncated at p's degree, by Horner's rule. `p` must have
/// a zero constant term; `series` holds the univariate Taylor coefficients of
/// the outer function about the split-off constant.
inline TruncatedPoly compose_univariate(std::span<const double> series, const TruncatedPoly& p) {
    const auto d = static_cast<std::size_t>(p.degree());
    if (series.size() != d + 1)
        throw ConfigError("taylor", "series length " + std::to_string(series.size()) + " != degree + 1 = " +
                                        std::to_string(d + 1));
    if (p.constant_term() != 0.0) throw ConfigError("taylor", "composition argument must have zero constant term");
    TruncatedPoly r = TruncatedPoly::constant(p.dim(), p.degree(), series[d]);
    for (std::size_t j = d; j-- > 0;) {
        r = r * p;
        r += series[j];
    }
    return r;
}

/// One segment's local approximation f̂ of a vector field: n component
/// polynomials in δ = x − center, all of the same dimension and degree.
class LocalModel {
public:
    LocalModel(State center, std::vector<TruncatedPoly> components)
        : center_(std::move(center)), components_(std::move(components)) {
        if (center_.empty()) throw ConfigError("taylor", "local model needs a non-empty center");
        if (components_.size() != center_.size())
            throw ConfigError("taylor", "local model needs one component per state dimension");
        for (const auto& c : components_)
            if (c.dim() != center_.size() || c.degree() != components_.front().degree())
                throw ConfigError("taylor", "local model components must share dimension and degree");
    }

    std::size_t dim() const noexcept { return center_.size(); }
    int degree() const noexcept { return components_.front().degree(); }
    const State& center() const noexcept { return center_; }
    const std::vector<TruncatedPoly>& components() const noexcept { return components_; }

    /// f̂(x): every component evaluated at δ = x − center.
    State operator()(std::span<const double> x) const {
        if (x.size() != dim()) throw ConfigError("taylor", "state has wrong dimension for local model");
        thread_local std::vector<double> delta, monos;
        delta.resize(dim());
        for (std::size_t i = 0; i < dim(); ++i) delta[i] = x[i] - center_[i];
        components_.front().basis().monomial_values(delta, monos);
        State out(dim());
        for (std::size_t i = 0; i < dim(); ++i) out[i] = components_[i].dot(monos);
        return out;
    }

    LocalModel truncated(int d) const {
        std::vector<TruncatedPoly> comps;
        comps.reserve(components_.size());
        for (const auto& c : components_) comps.push_back(c.truncated(d));
        return LocalModel(center_, std::move(comps));
    }

    friend bool operator==(const LocalModel& a, const LocalModel& b) {
        return a.center_ == b.center_ && a.components_ == b.components_;
    }

private:
    State center_;
    std::vector<TruncatedPoly> components_;
};

inline State model_eval(const LocalModel& model, std::span<const double> x) { return model(x); }

/// Payload size in the complexity convention of the MDL cost: the degree k.
inline int weight_count(const LocalModel& model) noexcept { return model.degree(); }

/// Literal number of stored coefficients, n · C(n + k, k).
inline std::size_t coefficient_count(const LocalModel& model) {
    return model.dim() * binomial(model.dim() + static_cast<std::size_t>(model.degree()),
                                  static_cast<std::size_t>(model.degree()));
}

} // namespace mieds

#pragma once

#include <map>
#include <string>
#include <vector>

#include "radon/multiindex.hpp"
#include "radon/rational.hpp"

namespace radon {

/// Multivariate polynomial over Q with exact rational coefficients.
/// Terms are kept in a canonical ordered map; zero coefficients are never stored.
class Poly {
public:
    Poly() = default;
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, const Rat& c);
    static Poly variable(int nvars, int i);
    static Poly monomial(int nvars, const MultiIndex& m, const Rat& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_term() const;
    int total_degree() const;  // -1 for the zero polynomial
    const std::map<MultiIndex, Rat>& terms() const { return terms_; }

    Rat coeff(const MultiIndex& m) const;
    void set_coeff(const MultiIndex& m, const Rat& c);
    void add_term(const MultiIndex& m, const Rat& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(const Rat& c) const;

    /// Product truncated to total degree <= lx; *saturated set if terms were dropped.
    Poly mul(const Poly& o, int lx, bool* saturated = nullptr) const;

    /// Exact product, no truncation.
    Poly mul_exact(const Poly& o) const;

    /// Drop terms of total degree > lx; *saturated set if any dropped.
    Poly truncated(int lx, bool* saturated = nullptr) const;

    Poly derivative(int var) const;

    Rat eval(const std::vector<Rat>& x) const;
    double eval_d(const std::vector<double>& x) const;

    /// Substitute args[i] for variable i. Exact (no truncation).
    Poly subst_exact(const std::vector<Poly>& args) const;

    bool operator==(const Poly& o) const = default;

    std::string str(const std::vector<std::string>& var_names = {}) const;

private:
    int nvars_ = 0;
    std::map<MultiIndex, Rat> terms_;
};

/// R^n-valued polynomial map / polynomial vector field on R^n.
struct PolyVec {
    std::vector<Poly> comp;

    PolyVec() = default;
    PolyVec(int arity, int nvars) : comp(arity, Poly(nvars)) {}
    explicit PolyVec(std::vector<Poly> c) : comp(std::move(c)) {}

    int arity() const { return static_cast<int>(comp.size()); }
    int nvars() const { return comp.empty() ? 0 : comp[0].nvars(); }
    bool is_zero() const;
    int total_degree() const;

    PolyVec operator+(const PolyVec& o) const;
    PolyVec operator-(const PolyVec& o) const;
    PolyVec scaled(const Rat& c) const;
    PolyVec truncated(int lx, bool* saturated = nullptr) const;

    std::vector<Rat> eval(const std::vector<Rat>& x) const;
    std::vector<double> eval_d(const std::vector<double>& x) const;

    /// The identity map (x_1, ..., x_n).
    static PolyVec identity(int n);

    bool operator==(const PolyVec& o) const = default;

    std::string str(const std::vector<std::string>& var_names = {}) const;
};

}  // namespace radon

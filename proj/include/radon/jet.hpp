#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "radon/poly.hpp"

namespace radon {

/// Truncated series in t whose coefficients are R^m-valued polynomials in x:
///   F(t,x) = sum_{|alpha| <= lt} t^alpha F_alpha(x),  deg_x F_alpha <= lx.
/// Represents maps gamma_t(x), fields W(t,x) and scalar data c(t,s,x).
/// Values are immutable in spirit: operations return new jets.
class JetSeries {
public:
    JetSeries() = default;
    JetSeries(int nt, int nx, int arity, int lt, int lx)
        : nt_(nt), nx_(nx), arity_(arity), lt_(lt), lx_(lx) {}

    static JetSeries zero(int nt, int nx, int arity, int lt, int lx) {
        return JetSeries(nt, nx, arity, lt, lx);
    }
    /// The identity map x (arity = nx, constant in t).
    static JetSeries identity_map(int nt, int nx, int lt, int lx);
    /// Scalar jet from a single term t^alpha * p(x).
    static JetSeries term(int nt, const MultiIndex& alpha, const PolyVec& p, int lt, int lx);

    int nt() const { return nt_; }
    int nx() const { return nx_; }
    int arity() const { return arity_; }
    int lt() const { return lt_; }
    int lx() const { return lx_; }
    bool x_saturated() const { return x_saturated_; }
    void mark_saturated() { x_saturated_ = true; }

    bool is_zero() const { return terms_.empty(); }
    const std::map<MultiIndex, PolyVec>& terms() const { return terms_; }

    /// Taylor coefficient F_alpha (zero vector if absent).
    PolyVec coeff(const MultiIndex& alpha) const;
    void set_coeff(const MultiIndex& alpha, const PolyVec& p);
    void add_coeff(const MultiIndex& alpha, const PolyVec& p);

    /// Component i as a scalar jet.
    JetSeries component(int i) const;

    JetSeries operator+(const JetSeries& o) const;
    JetSeries operator-(const JetSeries& o) const;
    JetSeries operator-() const;
    JetSeries scaled(const Rat& c) const;

    /// Scalar-jet product (arity 1 x arity 1) or scalar x vector.
    JetSeries mul(const JetSeries& o) const;

    /// Multiply by the monomial t^beta.
    JetSeries t_mul(const MultiIndex& beta) const;

    /// d/dt_j.
    JetSeries t_derivative(int j) const;
    /// d/dx_i (componentwise).
    JetSeries x_derivative(int i) const;

    /// sum_j t_j d/dt_j: multiplies each term by |alpha|.
    JetSeries euler_t() const;

    /// Substitute the map G (arity = nx) for x. Both share the t-variables.
    JetSeries compose_x(const JetSeries& G) const;

    /// Filtration inverse of a map jet with gamma_0 = id:
    /// gamma(inverse) = x modulo t-order lt+1. Throws if gamma_0 != id.
    JetSeries invert_map() const;

    /// Linear-monomial substitution on t-variables: source variable j becomes
    /// scale[j] * (target variable target[j]). Distinct sources may share a target.
    JetSeries subst_t(const std::vector<int>& target, const std::vector<Rat>& scale,
                      int new_nt) const;

    /// Re-truncate to new orders (marks saturation if x-terms drop).
    JetSeries retruncated(int lt, int lx) const;

    /// Numeric evaluation: F(t,x) as a vector of doubles.
    std::vector<double> eval_d(const std::vector<double>& t, const std::vector<double>& x) const;

    bool operator==(const JetSeries& o) const {
        return nt_ == o.nt_ && nx_ == o.nx_ && arity_ == o.arity_ && terms_ == o.terms_;
    }

    std::string str(const std::vector<std::string>& t_names = {},
                    const std::vector<std::string>& x_names = {}) const;

private:
    void require_compatible(const JetSeries& o) const;

    int nt_ = 0;
    int nx_ = 0;
    int arity_ = 1;
    int lt_ = 0;
    int lx_ = 0;
    bool x_saturated_ = false;
    std::map<MultiIndex, PolyVec> terms_;
};

/// Apply the (t,x)-dependent field V (arity = nx) to F as a derivation in x:
/// (V . F)_k = sum_i V_i d/dx_i F_k.
JetSeries apply_field(const JetSeries& V, const JetSeries& F);

/// Time-one flow map of the field jet V (min t-order >= 1): exp(V)x.
JetSeries flow_exp(const JetSeries& V);

/// Inverse of flow_exp: the unique field jet V with flow_exp(V) = gamma.
/// Requires gamma_0 = id.
JetSeries flow_log(const JetSeries& gamma);

}  // namespace radon

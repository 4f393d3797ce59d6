#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "radon/jet.hpp"
#include "radon/linalg.hpp"

namespace radon {

/// Weights defining the linear monomial order L(alpha) = sum alpha_i lambda_i.
/// Rational weights with verified injectivity on a finite exponent domain stand
/// in for the Z-independent reals.
struct OrderWeights {
    std::vector<Rat> lambda;

    Rat value(const MultiIndex& exp) const;
    bool injective_on(const std::vector<MultiIndex>& domain) const;
};

/// Random positive rational weights, re-drawn until L is injective on `domain`.
/// Deterministic under seed; throws after a bounded number of draws.
OrderWeights draw_order_weights(const std::vector<MultiIndex>& domain, std::uint64_t seed);

/// Deterministic weights lambda_i = 1 + 1/p_i over distinct primes, injective
/// on every domain with entry sums <= max_entry_sum (verified at construction).
OrderWeights default_order_weights(std::size_t nvars, int max_entry_sum);

/// Thrown when the order fails to separate exponents encountered in a division.
struct OrderCollision : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Column key of the graded coefficient space: ((t-exp, x-exp), component).
struct GradedKey {
    MultiIndex texp;
    MultiIndex xexp;
    int comp = 0;
    auto operator<=>(const GradedKey&) const = default;
};

/// The graded coefficient space of JetSeries with fixed shape, with columns
/// sorted by increasing L-value (ties broken by component index).
class GradedSpace {
public:
    GradedSpace(int nt, int nx, int arity, int lt, int lx, const OrderWeights& order);

    int ncols() const { return static_cast<int>(keys_.size()); }
    const std::vector<GradedKey>& keys() const { return keys_; }
    int col(const GradedKey& k) const;

    std::vector<Rat> to_vector(const JetSeries& f) const;
    JetSeries from_vector(const std::vector<Rat>& v) const;

    int nt() const { return nt_; }
    int nx() const { return nx_; }
    int arity() const { return arity_; }
    int lt() const { return lt_; }
    int lx() const { return lx_; }

private:
    int nt_, nx_, arity_, lt_, lx_;
    std::vector<GradedKey> keys_;
    std::map<GradedKey, int> index_;
};

/// Newton diagram Q(f) (support keys) and its least element under the order.
struct NewtonData {
    std::vector<GradedKey> q;
    std::optional<GradedKey> exp_least;
};
NewtonData newton_diagram(const JetSeries& f, const GradedSpace& space);

struct DivisionResult {
    JetSeries remainder;
    std::vector<JetSeries> coeffs;     // one scalar jet per generator
    std::vector<GradedKey> module_el;  // E_L(M) at truncation (pivot keys)
    bool x_saturated = false;
};

/// Division with remainder relative to the truncated module generated by
/// `generators`: f = sum_k coeffs[k] * generators[k] + r, where no term of r has
/// its key in E_L(M). Module multiples are restricted to monomial multiples that
/// stay entirely inside the truncation box, so returned identities hold exactly
/// as polynomials.
DivisionResult galligo_divide(const JetSeries& f, const std::vector<JetSeries>& generators,
                              const OrderWeights& order);

struct PrepTerm {
    MultiIndex alpha;  // t-multi-index
    JetSeries c;       // normalized coefficient c_alpha(t, x), scalar jet
    PolyVec f_alpha;   // the Taylor coefficient of f at t^alpha
};

struct PrepResult {
    std::vector<PrepTerm> terms;
    bool x_saturated = false;

    /// sum_k c_k t^{alpha_k} f_{alpha_k} as a jet with f's shape.
    JetSeries reconstruct(int nt, int nx, int arity, int lt, int lx) const;
};

/// Taylor preparation of f(t,x): selects multi-indices alpha_k greedily in
/// increasing L-order so that the t^{alpha_k} f_{alpha_k} span the truncated
/// module generated by all t^alpha f_alpha, solves for the coefficients and
/// renormalizes them so that (1/alpha_j!) d_t^{alpha_j} (t^{alpha_k} c_k)|_0 =
/// delta_jk exactly.
PrepResult taylor_prepare(const JetSeries& f, const OrderWeights& order);
PrepResult taylor_prepare(const JetSeries& f);  // default order weights

struct GenerateCertificate {
    int element = 0;                          // index into S
    std::vector<std::pair<int, Poly>> combo;  // (index into S of a kept generator, coefficient)
};

struct GenerateResult {
    std::vector<int> kept;  // indices into S forming F
    std::vector<GenerateCertificate> certs;
    int unresolved = 0;  // elements kept only because no representation was found
};

/// Constructive finite generation: returns F subseteq S such that every (g, e)
/// in S admits g = sum c_(f,d) f over kept (f, d) with d <= e coordinatewise,
/// the combination exact at truncation lx. Elements are scanned by increasing
/// |d|_1; an element with no representation joins F.
GenerateResult finite_generate(const std::vector<std::pair<PolyVec, MultiIndex>>& s, int lx);

}  // namespace radon

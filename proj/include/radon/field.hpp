#pragma once

#include <string>
#include <vector>

#include "radon/multiindex.hpp"
#include "radon/poly.hpp"

namespace radon {

/// Polynomial vector field on R^n paired with a multi-parameter formal degree.
struct WeightedField {
    PolyVec X;      // n component polynomials in x
    MultiIndex d;   // formal degree in N^nu

    WeightedField() = delete;
    WeightedField(PolyVec x, MultiIndex deg) : X(std::move(x)), d(std::move(deg)) {}

    int n() const { return X.arity(); }
    int nu() const { return static_cast<int>(d.size()); }
    bool is_zero_field() const { return X.is_zero(); }

    std::string str() const { return X.str() + " @ " + d.str(); }
};

/// [a, b]_i = sum_j (a_j d_j b_i - b_j d_j a_i), truncated at lx.
PolyVec lie_bracket_fields(const PolyVec& a, const PolyVec& b, int lx, bool* saturated = nullptr);

/// ([X_a, X_b], d_a + d_b).
WeightedField lie_bracket(const WeightedField& a, const WeightedField& b, int lx,
                          bool* saturated = nullptr);

/// Dense coefficient vector of a field over the monomial basis (component-major):
/// entry index = comp * #monomials + monomial index. `monomials` must cover lx.
std::vector<Rat> field_coeff_vector(const PolyVec& X, const std::vector<MultiIndex>& monomials);

}  // namespace radon

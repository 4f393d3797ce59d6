#include "radon/field.hpp"

#include <stdexcept>

namespace radon {

PolyVec lie_bracket_fields(const PolyVec& a, const PolyVec& b, int lx, bool* saturated) {
    if (a.arity() != b.arity() || a.nvars() != b.nvars())
        throw std::invalid_argument("lie_bracket: dimension mismatch");
    int n = a.arity();
    PolyVec out(n, a.nvars());
    for (int i = 0; i < n; ++i) {
        Poly acc(a.nvars());
        for (int j = 0; j < n; ++j) {
            acc = acc + a.comp[j].mul(b.comp[i].derivative(j), lx, saturated);
            acc = acc - b.comp[j].mul(a.comp[i].derivative(j), lx, saturated);
        }
        out.comp[i] = std::move(acc);
    }
    return out;
}

WeightedField lie_bracket(const WeightedField& a, const WeightedField& b, int lx,
                          bool* saturated) {
    if (a.nu() != b.nu()) throw std::invalid_argument("lie_bracket: degree dimension mismatch");
    return WeightedField(lie_bracket_fields(a.X, b.X, lx, saturated), a.d + b.d);
}

std::vector<Rat> field_coeff_vector(const PolyVec& X, const std::vector<MultiIndex>& monomials) {
    std::vector<Rat> v(static_cast<std::size_t>(X.arity()) * monomials.size(), Rat(0));
    for (int c = 0; c < X.arity(); ++c) {
        for (std::size_t m = 0; m < monomials.size(); ++m) {
            Rat coef = X.comp[c].coeff(monomials[m]);
            if (!is_zero(coef)) v[static_cast<std::size_t>(c) * monomials.size() + m] = coef;
        }
    }
    return v;
}

}  // namespace radon

#pragma once

#include <optional>
#include <vector>

#include "radon/field.hpp"
#include "radon/jet.hpp"

namespace radon {

enum class ClosureFlavor { Full, LeftNormed };  // L(S) vs L0(S)

struct ClosureElement {
    WeightedField wf;
    // provenance: bracket of elements a, b (indices into the closure), or -1 for seeds
    int parent_a = -1;
    int parent_b = -1;
};

/// Bracket closure of a weighted field set, bounded by |d|_1 <= cutoff.
/// Exact duplicates are merged; zero fields produced by bracketing are dropped.
struct ClosureSet {
    std::vector<ClosureElement> elems;
    int n_seeds = 0;
    int cutoff = 0;
    ClosureFlavor flavor = ClosureFlavor::Full;
    bool x_saturated = false;

    std::vector<int> degree_slice(const MultiIndex& d0) const;
};

ClosureSet lie_closure(const std::vector<WeightedField>& seeds, int cutoff,
                       ClosureFlavor flavor, int lx);

struct SpanBasis {
    int rank = 0;
    std::vector<int> basis_elems;  // closure indices forming a basis of the slice span
};

/// Span of {Y : (Y, d0) in C} evaluated at a rational point.
SpanBasis span_at_degree_point(const ClosureSet& c, const MultiIndex& d0,
                               const std::vector<Rat>& x0);

/// Span of {Y : (Y, d0) in C} over Q, fields as coefficient vectors up to lx.
SpanBasis span_at_degree_symbolic(const ClosureSet& c, const MultiIndex& d0, int lx);

struct HoermanderResult {
    int rank = 0;
    bool spans = false;
};

/// Rank at x0 of all closure elements with |d|_1 <= cutoff; spans iff rank = n.
HoermanderResult hoermander_check(const std::vector<WeightedField>& seeds,
                                  const std::vector<Rat>& x0, int cutoff, int lx);

/// Truncated Campbell-Hausdorff logarithm of exp(a) exp(b) for t-graded field
/// jets vanishing at t = 0. Bracket coefficients are hard-coded through order 4;
/// orders above 4 are rejected. The t-truncation of the inputs bounds everything
/// else.
JetSeries bch_log(const JetSeries& a, const JetSeries& b, int order);

/// Convenience overload: plain fields a, b placed at formal grades t1, t2.
/// Returns the graded series over two t-variables.
JetSeries bch_log_fields(const PolyVec& a, const PolyVec& b, int order, int lx);

}  // namespace radon

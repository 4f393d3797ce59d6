#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radon/geometry.hpp"
#include "radon/jet.hpp"
#include "radon/lie.hpp"
#include "radon/multiindex.hpp"

namespace radon {

/// A germ gamma_t(x) with gamma_0 = id, at truncation. The series form is
/// always materialized; the exponential form (the single exponent of the flow
/// writing gamma_t = exp(sum t^alpha X_alpha) x) is cached when known.
struct Surface {
    DilationSpec dil;
    TruncationPolicy pol;
    int n = 1;
    JetSeries gamma;  // map jet: nt = dil.N, arity = n, gamma_0 = id

    // exponent field of the flow form, lazily computed
    mutable std::optional<JetSeries> exp_exponent;

    static Surface from_series(JetSeries gamma, DilationSpec dil, TruncationPolicy pol);
    /// gamma = flow of sum t^alpha X_alpha (single exponent).
    static Surface from_exp(const std::map<MultiIndex, PolyVec>& fields, DilationSpec dil,
                            TruncationPolicy pol, int n);
    static Surface identity(DilationSpec dil, TruncationPolicy pol, int n);

    /// The exponent jet V with flow_exp(V) = gamma (computed once and cached).
    const JetSeries& exponent() const;
};

/// W(t,x) = d/de|_{e=1} gamma_{e t} (gamma_t^{-1}(x)); W(0,.) = 0.
struct WField {
    JetSeries W;

    /// Taylor fields (X^_alpha, deg alpha); zero coefficients are not stored.
    const std::map<MultiIndex, PolyVec>& taylor() const { return W.terms(); }
};

WField gamma_to_w(const Surface& s);

/// Inverse construction: solves d omega / d e = (1/e) W(e t, omega) order by
/// order in t (the 1/e singularity cancels since W(e t, .) = O(e)).
Surface w_to_gamma(const WField& w, const DilationSpec& dil, const TruncationPolicy& pol);

/// Numeric flow of the same ODE: gamma_t(x) for concrete (t, x).
std::vector<double> w_flow_numeric(const JetSeries& w, const std::vector<double>& t,
                                   const std::vector<double>& x, int steps = 64);

/// Fields of the exponential writing of gamma (all alpha with 0 < |alpha| <= lt
/// and nonzero coefficient).
std::map<MultiIndex, PolyVec> extract_exp_fields(const Surface& s);

struct PartitionEntry {
    MultiIndex alpha;
    WeightedField field;  // (X_alpha, deg alpha)
    bool is_zero = false;
};

struct PurePartition {
    std::vector<PartitionEntry> pure;      // P
    std::vector<PartitionEntry> non_pure;  // N
};

/// Partition over every alpha with 0 < |alpha|_1 <= lt (zero fields retained,
/// flagged). deg(alpha) = 0 entries are dropped (their formal degree is zero).
PurePartition partition_pure(const std::map<MultiIndex, PolyVec>& fields,
                             const DilationSpec& dil, int lt, int n);

/// Exponential form with negated fields.
Surface invert_surface(const Surface& s);

/// Exponential form via the Campbell-Hausdorff logarithm of the two exponents;
/// parameters concatenate to nu1 + nu2 on R^{N1+N2}.
Surface compose_surfaces(const Surface& a, const Surface& b);

enum class ConditionId { I, IIF, IIA, IIIF, IIIA };
std::string condition_str(ConditionId c);

struct ConditionVerdict {
    ConditionId cond = ConditionId::IIIA;
    Status status = Status::Unknown;
    std::string detail;
    // per-target certificates (N-elements for the A-parts, prepared
    // coefficients and bracket controls for the F-parts)
    std::vector<std::pair<std::string, ControlCertificate>> certs;
    int closure_cutoff = 0;
    TruncationPolicy pol;
    bool saturated = false;
};

struct ConditionOptions {
    int closure_cutoff = 4;  // retain closure elements with |d|_1 <= cutoff
    ControlOptions control;
};

ConditionVerdict check_condition(const Surface& s, ConditionId which,
                                 const ConditionOptions& opt = {});

/// Degree-slice span comparison of L({(X_alpha, deg alpha)}) against
/// L({(X^_alpha, deg alpha)}): equal symbolic ranks and mutual membership for
/// every d0 with |d0|_1 <= cutoff.
struct SpanEqualityReport {
    bool equal = true;
    std::vector<std::string> failures;
    int degrees_checked = 0;
};
SpanEqualityReport span_equality_check(const Surface& s, int cutoff);

}  // namespace radon

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radon/grid.hpp"
#include "radon/jet.hpp"
#include "radon/kernels.hpp"
#include "radon/surface.hpp"

namespace radon {

/// Plateau cutoff: 1 for |x_i| <= plateau, polynomial decay to 0 at support.
struct CutoffSpec {
    double plateau = 0.25;
    double support = 0.5;
    int k = 4;

    double eval1(double s) const;
    double eval(const std::vector<double>& x) const;
};

struct OperatorConfig {
    CutoffSpec psi1{0.25, 0.5, 4};
    CutoffSpec psi2{1.0, 1.5, 4};
    CutoffSpec psi0{0.5, 0.75, 4};
    double a = 0.5;      // t-support radius
    int t_points = 16;   // quadrature points per t-axis and dyadic scale
    double sigma_scale = 2.0;  // sigma = sigma_scale * plateau bump (>= 1 near 0)
    GridSpec xgrid;
    int flow_steps = 24;  // RK4 steps for W_j flows
    std::optional<JetSeries> kappa;  // smooth factor kappa(t,x); 1 when absent
};

/// T f(x) = psi1(x) int f(gamma_t(x)) psi2(gamma_t(x)) kappa(t,x) K_J(t) dt,
/// evaluated scale by scale with a tensor midpoint rule on each dyadic box.
GridFn eval_t_operator(const Surface& s, const BumpFamily& fam, int J,
                       const OperatorConfig& cfg, const GridFn& f);

/// The same operator as a matrix-free pair (apply, apply_adjoint) with the
/// quadrature tables precomputed once.
struct LinearOperator {
    std::function<void(const double*, double*)> apply;      // y = A x
    std::function<void(const double*, double*)> apply_adj;  // y = A^T x
    std::size_t dim = 0;
};
LinearOperator make_t_operator(const Surface& s, const BumpFamily& fam, int J,
                               const OperatorConfig& cfg);

enum class MaximalMode {
    ScaleDyadic,   // sup over delta in {2^-k}^N of psi1 int |f(gamma_{delta t}(x))| dt
    ScaleDyadicCut,  // same with the psi2(gamma) factor inside
};

/// Dyadic-scale maximal average of f along gamma.
GridFn eval_maximal(const Surface& s, const OperatorConfig& cfg, const GridFn& f,
                    MaximalMode mode, int scale_levels);

/// The dyadic family specification behind the flow-based maximal operators:
/// W_j(t,x) = sum_l c_l(2^-j t, t, x) 2^{-j.d_l} X_l.
struct DyadicFamilySpec {
    DilationSpec dil;  // dilations e on the N t-variables, nu parameters
    int r = 0;         // leading fields with unit degrees and nonzero alphas
    std::vector<PolyVec> fields;      // X_l, l = 0..q-1
    std::vector<MultiIndex> degrees;  // d_l in N^nu, nonzero
    std::vector<MultiIndex> alphas;   // alpha_l for l < r (t-multi-indices)
    std::vector<JetSeries> coeffs;    // c_l(t,s,x): scalar jets over 2N t-variables
    std::vector<std::string> provenance;  // how fields r..q-1 arise from the first r
    TruncationPolicy pol;
    int n = 1;

    int q() const { return static_cast<int>(fields.size()); }
};

/// Symbolic validation of the coefficient conditions: the alpha_l-derivative
/// normalization (= 1) and the vanishing of all lower mixed derivatives.
bool validate_spec(const DyadicFamilySpec& spec, std::string* why = nullptr);

/// Entries may be disengaged (infinity): 2^{-inf} = 0.
using ScaleIndex = std::vector<std::optional<int>>;

/// W_j as an exact jet (scales 2^{-j} are exact rationals).
JetSeries build_wj(const DyadicFamilySpec& spec, const ScaleIndex& j);

/// Weighting of the flow averages: Psi0Sigma is the sigma-weighted two-sided
/// psi0 form used by the induction; Psi12 is the psi1/psi2 form of the scale
/// comparison.
enum class FlowAverageKind { Psi0Sigma, Psi12 };

/// The scale-j average of f along the flow of W_j.
GridFn eval_mj(const DyadicFamilySpec& spec, const ScaleIndex& j, const OperatorConfig& cfg,
               const GridFn& f, FlowAverageKind kind = FlowAverageKind::Psi0Sigma);

/// sup over a finite grid of scale indices.
GridFn eval_maximal_family(const DyadicFamilySpec& spec, const std::vector<ScaleIndex>& js,
                           const OperatorConfig& cfg, const GridFn& f,
                           FlowAverageKind kind = FlowAverageKind::Psi0Sigma);

/// The scale indices (j, j . alpha) realizing gamma_{2^-j t} inside the family.
ScaleIndex embed_scale(const DyadicFamilySpec& spec, const std::vector<int>& j);

/// The reduction pipeline: preparation of W, coefficients c_l(t,s,x) =
/// c_{alpha_l}(t,x) s^{alpha_l}, unit degrees in the extended nu = N + r
/// grading, field list extended through the left-normed closure.
DyadicFamilySpec reduce_maximal_pipeline(const Surface& s, int closure_cutoff = 3);

struct OpNormEstimate {
    double value = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> history;
};

/// p = 2: power iteration on A^T A (dominant singular value). Other p: best
/// lower bound max ||A f||_p / ||f||_p over randomized trials.
OpNormEstimate estimate_opnorm(const LinearOperator& op, double p, int trials = 16,
                               double rel_tol = 1e-4, int max_iter = 200,
                               std::uint64_t seed = 2);

double lp_norm(const GridFn& f, double p);

}  // namespace radon

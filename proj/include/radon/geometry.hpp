#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radon/field.hpp"
#include "radon/jet.hpp"
#include "radon/multiindex.hpp"

namespace radon {

enum class Status { Proved, Refuted, Unknown };

std::string status_str(Status s);

struct BallSampleParams {
    int paths = 2000;
    int segments = 32;
    int steps_per_segment = 4;
    double domain_radius = 8.0;
    double boundary_fraction = 0.25;  // fraction of paths drawn near unit speed
    std::uint64_t seed = 1;
};

/// Monte-Carlo inner approximation of the Carnot-Caratheodory ball of radius
/// delta: endpoints of unit-time paths gamma' = sum a_j(t) (delta^{d_j} X_j)(gamma)
/// with piecewise-constant controls, sum_j |a_j|^2 < 1 on every segment.
struct BallSample {
    std::vector<double> center;
    std::vector<double> delta;
    std::vector<std::vector<double>> points;
    std::vector<std::vector<double>> controls;  // per path: segment-major controls
    std::vector<double> extents;                // per axis: max |y_i - x0_i|
    int escaped = 0;
};

BallSample cc_ball_sample(const std::vector<WeightedField>& fields,
                          const std::vector<double>& x0, const std::vector<double>& delta,
                          const BallSampleParams& params = {});

/// Write one point per line, coordinates separated by a single space.
void write_point_cloud(const BallSample& sample, const std::string& path);

struct ControlOptions {
    int lx = 3;              // degree bound for certificate coefficients
    int delta_levels = 8;    // dyadic grid 2^0 .. 2^-levels, plus zero components
    int x_samples = 48;      // random dyadic sample points per delta
    double box_radius = 0.5;
    double residual_tol = 1e-7;
    std::uint64_t seed = 7;
};

struct ControlCoefficient {
    int generator = -1;  // index into the generator list
    Poly c;              // polynomial coefficient
    MultiIndex d;        // generator degree (satisfies d <= d0)
};

struct RefutationWitness {
    std::vector<Rat> delta;
    std::vector<Rat> x;
    int span_rank = 0;  // rank of scaled generators at the witness
    int aug_rank = 0;   // rank with the scaled target appended (> span_rank)
    std::string note;
};

struct ControlCertificate {
    Status status = Status::Unknown;
    std::vector<ControlCoefficient> coeffs;
    std::optional<RefutationWitness> witness;
    double max_coeff_supnorm = 0.0;  // sup of certificate coefficients over the box
    double max_ls_coeff = 0.0;       // observed least-squares coefficient growth
    std::string note;
};

/// Two-tier control decision for (X0, d0) against the weighted generators S.
/// Exact tier (sufficient): X0 = sum c_j X_j over generators with d_j <= d0,
/// polynomial coefficients, identity exact; then delta^{d0} X0 =
/// sum (delta^{d0-d_j} c_j) delta^{d_j} X_j with coefficients bounded on [0,1]^nu.
/// Refutation tier (necessary): pointwise solvability at sampled (delta, x);
/// an infeasible sample is confirmed by exact rank computation before Refuted
/// is returned.
ControlCertificate control_check(const WeightedField& target,
                                 const std::vector<WeightedField>& s,
                                 const ControlOptions& opt = {});

/// Control of a t-dependent field W(t,x): Proved via the preparation route
/// (each prepared Taylor coefficient exactly controlled by S), Refuted via a
/// pointwise witness against some Taylor coefficient of W.
struct WControlResult {
    ControlCertificate cert;
    std::vector<std::pair<MultiIndex, ControlCertificate>> per_coefficient;
};
WControlResult control_check_w(const JetSeries& w, const DilationSpec& dil,
                               const std::vector<WeightedField>& s,
                               const ControlOptions& opt = {});

/// Exact infeasibility replay: true iff delta^{d0} X0(x) lies outside the span
/// of {delta^{d_j} X_j(x)} over Q.
bool witness_infeasible_exact(const WeightedField& target,
                              const std::vector<WeightedField>& s,
                              const std::vector<Rat>& delta, const std::vector<Rat>& x);

/// Replay a Proved certificate: substitute the coefficients and compare with
/// the target, exact polynomial equality.
bool certificate_replays(const WeightedField& target, const std::vector<WeightedField>& s,
                         const ControlCertificate& cert);

}  // namespace radon

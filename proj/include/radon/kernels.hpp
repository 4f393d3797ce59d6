#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radon/grid.hpp"
#include "radon/multiindex.hpp"

namespace radon {

struct BumpParams {
    double a = 0.5;          // support radius (box B^N(a))
    int k = 4;               // smoothness exponent of the (1 - (t_i/a)^2)^k factors
    bool asymmetric = false; // generic profile: cancellation needs projection
    int ref_res = 512;       // reference grid resolution for projected members
};

/// One member of the family: a smooth bump supported in the box, with the
/// cancellation pattern required by its grid index j.
struct BumpMember {
    MultiIndex j;               // in N^nu
    std::vector<int> odd_vars;  // representative coordinates carrying odd factors
    // projected members carry corrected samples on a reference grid
    std::optional<GridFn> samples;

    double eval(const BumpParams& p, const std::vector<double>& t) const;
};

/// The family {sigma_j : |j|_inf <= J} of smooth bumps with per-parameter
/// cancellation: int sigma_j dt_mu = 0 whenever j_mu != 0, where t_mu collects
/// the coordinates t_i with e_i^mu != 0.
struct BumpFamily {
    DilationSpec dil;  // N, nu, e
    BumpParams params;
    int J = 0;
    std::vector<BumpMember> members;
    double uniform_bound = 0.0;           // sup of the sampled C^m norms below
    std::vector<int> checked_norm_orders;  // derivative orders measured (<= 4)

    const BumpMember& member(const MultiIndex& j) const;
    double eval_member(const MultiIndex& j, const std::vector<double>& t) const;

    /// Dilated member: 2^{j.(e_1+...+e_N)} sigma_j(2^j t).
    double eval_dilated(const MultiIndex& j, const std::vector<double>& t) const;

    /// log2 of the per-axis contraction of member j: (j . e_i) for axis i.
    std::vector<int> dilation_exponents(const MultiIndex& j) const;

    /// Quadrature integral of a member over a block of coordinates at fixed
    /// remaining coordinates (used by the cancellation validation).
    double block_integral(const MultiIndex& j, const std::vector<int>& block,
                          std::vector<double> t, int quad_points = 64) const;
};

BumpFamily make_bump_family(const BumpParams& params, int J, const DilationSpec& dil);

/// Coordinates of each parameter block: block[mu] = { i : e_i^mu != 0 }.
std::vector<std::vector<int>> parameter_blocks(const DilationSpec& dil);

/// K_J = sum_{|j|_inf <= J} sigma_j^{(2^j)} sampled on a midpoint grid.
struct GridKernel {
    DilationSpec dil;
    double a = 0.5;
    int J = 0;
    GridFn values;
    const BumpFamily* family = nullptr;  // non-owning; source family
};

/// Throws if the grid fails to resolve the finest dyadic scale with at least
/// min_cells cells across a member support.
GridKernel synth_kernel(const BumpFamily& fam, int J, const GridSpec& grid, int min_cells = 16);

/// Measured product-bound constants sup |d^alpha K| * prod_mu |t_mu|^{N_mu + |alpha_mu|}
/// for derivative multi-indices up to order 1 (finite differences on the grid).
/// Requires the parameter blocks to partition the coordinates.
std::map<MultiIndex, double> validate_product_bounds(const GridKernel& k, int max_order = 1);

/// Quadrature check: every cancellation integral of the family (all members,
/// all blocks with j_mu != 0, sampled sections) is below tol.
double max_cancellation_residual(const BumpFamily& fam, int sections = 8);

GridDump kernel_to_dump(const GridKernel& k);
GridKernel kernel_from_dump(const GridDump& dump, const BumpFamily* family = nullptr);

}  // namespace radon

#include "radon/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace radon {

namespace {

double base_factor(double u, int k) {
    double s = 1.0 - u * u;
    if (s <= 0.0) return 0.0;
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= s;
    return out;
}

double raw_eval(const BumpParams& p, const std::vector<int>& odd_vars,
                const std::vector<double>& t) {
    double out = 1.0;
    for (double ti : t) {
        out *= base_factor(ti / p.a, p.k);
        if (out == 0.0) return 0.0;
    }
    for (int i : odd_vars) out *= t[static_cast<std::size_t>(i)] / p.a;
    if (p.asymmetric) out *= 1.0 + t[0] / (2.0 * p.a);
    return out;
}

}  // namespace

double BumpMember::eval(const BumpParams& p, const std::vector<double>& t) const {
    if (samples) return samples->interp(t);
    return raw_eval(p, odd_vars, t);
}

std::vector<std::vector<int>> parameter_blocks(const DilationSpec& dil) {
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(dil.nu));
    for (int mu = 0; mu < dil.nu; ++mu)
        for (int i = 0; i < dil.N; ++i)
            if (dil.e[static_cast<std::size_t>(i)][mu] != 0)
                blocks[static_cast<std::size_t>(mu)].push_back(i);
    return blocks;
}

const BumpMember& BumpFamily::member(const MultiIndex& j) const {
    for (const auto& m : members)
        if (m.j == j) return m;
    throw std::invalid_argument("BumpFamily: no member at " + j.str());
}

double BumpFamily::eval_member(const MultiIndex& j, const std::vector<double>& t) const {
    return member(j).eval(params, t);
}

std::vector<int> BumpFamily::dilation_exponents(const MultiIndex& j) const {
    std::vector<int> s(static_cast<std::size_t>(dil.N), 0);
    for (int i = 0; i < dil.N; ++i) {
        int acc = 0;
        for (int mu = 0; mu < dil.nu; ++mu) acc += j[mu] * dil.e[static_cast<std::size_t>(i)][mu];
        s[static_cast<std::size_t>(i)] = acc;
    }
    return s;
}

double BumpFamily::eval_dilated(const MultiIndex& j, const std::vector<double>& t) const {
    std::vector<int> s = dilation_exponents(j);
    std::vector<double> scaled(t.size());
    double amp = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double factor = std::ldexp(1.0, s[i]);
        scaled[i] = t[i] * factor;
        amp *= factor;
    }
    return amp * eval_member(j, scaled);
}

double BumpFamily::block_integral(const MultiIndex& j, const std::vector<int>& block,
                                  std::vector<double> t, int quad_points) const {
    const BumpMember& m = member(j);
    // when the member is grid-sampled, integrate on its own reference grid so
    // the discrete projection zeros are reproduced exactly
    int q = quad_points;
    double lo = -params.a, hi = params.a;
    if (m.samples) q = m.samples->spec.axes[0].res;
    double h = (hi - lo) / q;

    std::vector<std::size_t> idx(block.size(), 0);
    double acc = 0.0;
    bool done = false;
    while (!done) {
        for (std::size_t d = 0; d < block.size(); ++d)
            t[static_cast<std::size_t>(block[d])] = lo + (static_cast<double>(idx[d]) + 0.5) * h;
        acc += m.eval(params, t);
        // advance odometer
        std::size_t d = 0;
        for (;; ++d) {
            if (d == block.size()) {
                done = true;
                break;
            }
            if (++idx[d] < static_cast<std::size_t>(q)) break;
            idx[d] = 0;
        }
    }
    double vol = 1.0;
    for (std::size_t d = 0; d < block.size(); ++d) vol *= h;
    return acc * vol;
}

namespace {

/// Discrete cancellation projection on the reference grid: subtract
/// w(t_block) * marginal(t_rest) for each required block until every required
/// marginal vanishes; alternating projections onto the subspaces converge.
void project_cancellations(GridFn& g, const BumpParams& params,
                           const std::vector<std::vector<int>>& needed_blocks) {
    if (needed_blocks.empty()) return;
    const GridSpec& spec = g.spec;
    int dims = spec.dims();
    // normalized window per block: product base bump over the block coordinates
    auto block_window = [&](const std::vector<int>& block, const std::vector<int>& idx) {
        double w = 1.0;
        for (int ax : block) {
            double t = spec.axes[static_cast<std::size_t>(ax)].node(idx[static_cast<std::size_t>(ax)]);
            w *= base_factor(t / params.a, params.k);
        }
        return w;
    };

    for (int round = 0; round < 64; ++round) {
        double worst = 0.0;
        for (const auto& block : needed_blocks) {
            // accumulate marginals over the block for every rest-index
            std::vector<int> rest_axes;
            for (int d = 0; d < dims; ++d)
                if (std::find(block.begin(), block.end(), d) == block.end())
                    rest_axes.push_back(d);
            std::size_t rest_size = 1;
            for (int d : rest_axes)
                rest_size *= static_cast<std::size_t>(spec.axes[static_cast<std::size_t>(d)].res);

            std::vector<double> marginal(rest_size, 0.0);
            std::vector<double> wsum(rest_size, 0.0);
            std::vector<double> window(g.v.size(), 0.0);
            for (std::size_t f = 0; f < g.v.size(); ++f) {
                std::vector<int> idx = spec.unflat(f);
                std::size_t r = 0;
                for (int d : rest_axes)
                    r = r * static_cast<std::size_t>(spec.axes[static_cast<std::size_t>(d)].res) +
                        static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
                double w = block_window(block, idx);
                window[f] = w;
                marginal[r] += g.v[f];
                wsum[r] += w;
            }
            for (std::size_t f = 0; f < g.v.size(); ++f) {
                std::vector<int> idx = spec.unflat(f);
                std::size_t r = 0;
                for (int d : rest_axes)
                    r = r * static_cast<std::size_t>(spec.axes[static_cast<std::size_t>(d)].res) +
                        static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
                if (wsum[r] > 0.0) g.v[f] -= window[f] * marginal[r] / wsum[r];
            }
            for (std::size_t r = 0; r < rest_size; ++r) worst = std::max(worst, std::abs(marginal[r]));
        }
        if (worst < 1e-14) break;
    }
}

double measure_uniform_bound(const BumpFamily& fam, std::vector<int>& orders) {
    // axis-aligned finite differences up to order 4 on a coarse probe grid
    orders = {0, 1, 2, 3, 4};
    const int probe = fam.dil.N == 1 ? 257 : 65;
    double bound = 0.0;
    double h = 2.0 * fam.params.a / probe;
    std::vector<double> t(static_cast<std::size_t>(fam.dil.N), 0.0);
    for (const auto& m : fam.members) {
        std::size_t total = 1;
        for (int d = 0; d < fam.dil.N; ++d) total *= static_cast<std::size_t>(probe);
        for (std::size_t f = 0; f < total; ++f) {
            std::size_t rem = f;
            for (int d = fam.dil.N - 1; d >= 0; --d) {
                t[static_cast<std::size_t>(d)] =
                    -fam.params.a + (static_cast<double>(rem % probe) + 0.5) * h;
                rem /= probe;
            }
            for (int axis = 0; axis < fam.dil.N; ++axis) {
                double stencil[5];
                std::vector<double> tt = t;
                for (int sft = -2; sft <= 2; ++sft) {
                    tt[static_cast<std::size_t>(axis)] = t[static_cast<std::size_t>(axis)] + sft * h;
                    stencil[sft + 2] = m.eval(fam.params, tt);
                }
                double d0 = std::abs(stencil[2]);
                double d1 = std::abs((stencil[3] - stencil[1]) / (2 * h));
                double d2 = std::abs((stencil[3] - 2 * stencil[2] + stencil[1]) / (h * h));
                double d3 = std::abs((stencil[4] - 2 * stencil[3] + 2 * stencil[1] - stencil[0]) /
                                     (2 * h * h * h));
                double d4 = std::abs(
                    (stencil[4] - 4 * stencil[3] + 6 * stencil[2] - 4 * stencil[1] + stencil[0]) /
                    (h * h * h * h));
                bound = std::max({bound, d0, d1, d2, d3, d4});
            }
        }
    }
    return bound;
}

}  // namespace

BumpFamily make_bump_family(const BumpParams& params, int J, const DilationSpec& dil) {
    if (params.a <= 0) throw std::invalid_argument("make_bump_family: a must be positive");
    if (J < 0) throw std::invalid_argument("make_bump_family: J must be >= 0");
    dil.validate();

    BumpFamily fam;
    fam.dil = dil;
    fam.params = params;
    fam.J = J;
    auto blocks = parameter_blocks(dil);

    for (const auto& j : enumerate_multiindices(static_cast<std::size_t>(dil.nu), J * dil.nu)) {
        bool inside = true;
        for (int mu = 0; mu < dil.nu; ++mu)
            if (j[mu] > J) inside = false;
        if (!inside) continue;

        BumpMember m;
        m.j = j;
        std::set<int> reps;
        for (int mu = 0; mu < dil.nu; ++mu) {
            if (j[mu] == 0) continue;
            if (blocks[static_cast<std::size_t>(mu)].empty())
                throw std::invalid_argument("make_bump_family: parameter with empty block");
            reps.insert(blocks[static_cast<std::size_t>(mu)].front());
        }
        m.odd_vars.assign(reps.begin(), reps.end());

        if (params.asymmetric) {
            // generic profile: sample and enforce cancellation by projection
            int res = dil.N == 1 ? params.ref_res : (dil.N == 2 ? std::min(params.ref_res, 512) : 64);
            GridSpec spec;
            for (int d = 0; d < dil.N; ++d) spec.axes.push_back({-params.a, params.a, res});
            GridFn g = GridFn::zeros(spec);
            std::vector<double> t(static_cast<std::size_t>(dil.N));
            for (std::size_t f = 0; f < g.v.size(); ++f) {
                auto p = spec.node(f);
                g.v[f] = raw_eval(params, m.odd_vars, p);
                (void)t;
            }
            std::vector<std::vector<int>> needed;
            for (int mu = 0; mu < dil.nu; ++mu)
                if (j[mu] != 0) needed.push_back(blocks[static_cast<std::size_t>(mu)]);
            project_cancellations(g, params, needed);
            m.samples = std::move(g);
        }
        fam.members.push_back(std::move(m));
    }

    fam.uniform_bound = measure_uniform_bound(fam, fam.checked_norm_orders);
    return fam;
}

GridKernel synth_kernel(const BumpFamily& fam, int J, const GridSpec& grid, int min_cells) {
    if (J > fam.J) throw std::invalid_argument("synth_kernel: J exceeds the family");
    if (grid.dims() != fam.dil.N) throw std::invalid_argument("synth_kernel: grid dimension");

    // the finest member must still be resolved
    MultiIndex jmax(static_cast<std::size_t>(fam.dil.nu));
    for (int mu = 0; mu < fam.dil.nu; ++mu) jmax[mu] = J;
    std::vector<int> smax = fam.dilation_exponents(jmax);
    for (int i = 0; i < fam.dil.N; ++i) {
        double support = 2.0 * fam.params.a * std::ldexp(1.0, -smax[static_cast<std::size_t>(i)]);
        if (support / grid.axes[static_cast<std::size_t>(i)].h() < min_cells)
            throw std::invalid_argument(
                "synth_kernel: grid does not resolve the finest dyadic scale on axis " +
                std::to_string(i + 1));
    }

    GridKernel out;
    out.dil = fam.dil;
    out.a = fam.params.a;
    out.J = J;
    out.family = &fam;
    out.values = GridFn::zeros(grid);

    for (const auto& m : fam.members) {
        bool inside = true;
        for (int mu = 0; mu < fam.dil.nu; ++mu)
            if (m.j[mu] > J) inside = false;
        if (!inside) continue;
        std::vector<int> s = fam.dilation_exponents(m.j);
        double amp = 1.0;
        std::vector<double> halfwidth(static_cast<std::size_t>(fam.dil.N));
        for (int i = 0; i < fam.dil.N; ++i) {
            amp *= std::ldexp(1.0, s[static_cast<std::size_t>(i)]);
            halfwidth[static_cast<std::size_t>(i)] =
                fam.params.a * std::ldexp(1.0, -s[static_cast<std::size_t>(i)]);
        }
        // index window of the support box
        std::vector<int> lo(static_cast<std::size_t>(fam.dil.N)), hi(static_cast<std::size_t>(fam.dil.N));
        for (int i = 0; i < fam.dil.N; ++i) {
            const GridAxis& ax = grid.axes[static_cast<std::size_t>(i)];
            lo[static_cast<std::size_t>(i)] = std::max(
                0, static_cast<int>(std::floor((-halfwidth[static_cast<std::size_t>(i)] - ax.lo) / ax.h() - 0.5)));
            hi[static_cast<std::size_t>(i)] = std::min(
                ax.res - 1,
                static_cast<int>(std::ceil((halfwidth[static_cast<std::size_t>(i)] - ax.lo) / ax.h() - 0.5)));
        }
        std::vector<int> idx = lo;
        std::vector<double> t(static_cast<std::size_t>(fam.dil.N));
        std::vector<double> scaled(static_cast<std::size_t>(fam.dil.N));
        bool done = false;
        for (int i = 0; i < fam.dil.N; ++i)
            if (lo[static_cast<std::size_t>(i)] > hi[static_cast<std::size_t>(i)]) done = true;
        while (!done) {
            for (int i = 0; i < fam.dil.N; ++i) {
                t[static_cast<std::size_t>(i)] =
                    grid.axes[static_cast<std::size_t>(i)].node(idx[static_cast<std::size_t>(i)]);
                scaled[static_cast<std::size_t>(i)] =
                    t[static_cast<std::size_t>(i)] * std::ldexp(1.0, s[static_cast<std::size_t>(i)]);
            }
            double val = m.eval(fam.params, scaled);
            if (val != 0.0) out.values.v[grid.flat(idx)] += amp * val;
            int d = fam.dil.N - 1;
            for (;; --d) {
                if (d < 0) {
                    done = true;
                    break;
                }
                if (++idx[static_cast<std::size_t>(d)] <= hi[static_cast<std::size_t>(d)]) break;
                idx[static_cast<std::size_t>(d)] = lo[static_cast<std::size_t>(d)];
            }
        }
    }
    return out;
}

std::map<MultiIndex, double> validate_product_bounds(const GridKernel& k, int max_order) {
    auto blocks = parameter_blocks(k.dil);
    std::vector<int> owner(static_cast<std::size_t>(k.dil.N), -1);
    for (int mu = 0; mu < k.dil.nu; ++mu) {
        for (int i : blocks[static_cast<std::size_t>(mu)]) {
            if (owner[static_cast<std::size_t>(i)] != -1)
                throw std::invalid_argument(
                    "validate_product_bounds: parameter blocks must partition the coordinates");
            owner[static_cast<std::size_t>(i)] = mu;
        }
    }
    for (int i = 0; i < k.dil.N; ++i)
        if (owner[static_cast<std::size_t>(i)] < 0)
            throw std::invalid_argument("validate_product_bounds: coordinate outside every block");

    std::vector<MultiIndex> alphas;
    alphas.push_back(MultiIndex(static_cast<std::size_t>(k.dil.N)));
    if (max_order >= 1)
        for (int i = 0; i < k.dil.N; ++i)
            alphas.push_back(MultiIndex::unit(static_cast<std::size_t>(k.dil.N), static_cast<std::size_t>(i)));

    const GridSpec& grid = k.values.spec;
    std::map<MultiIndex, double> out;
    for (const auto& alpha : alphas) {
        double best = 0.0;
        for (std::size_t f = 0; f < k.values.v.size(); ++f) {
            std::vector<int> idx = grid.unflat(f);
            // central differences need interior nodes
            bool interior = true;
            for (int i = 0; i < k.dil.N; ++i)
                if (alpha[i] && (idx[static_cast<std::size_t>(i)] == 0 ||
                                 idx[static_cast<std::size_t>(i)] + 1 >= grid.axes[static_cast<std::size_t>(i)].res))
                    interior = false;
            if (!interior) continue;

            double deriv;
            if (alpha.is_zero()) {
                deriv = k.values.v[f];
            } else {
                int axis = 0;
                for (int i = 0; i < k.dil.N; ++i)
                    if (alpha[i]) axis = i;
                std::vector<int> up = idx, dn = idx;
                ++up[static_cast<std::size_t>(axis)];
                --dn[static_cast<std::size_t>(axis)];
                deriv = (k.values.v[grid.flat(up)] - k.values.v[grid.flat(dn)]) /
                        (2.0 * grid.axes[static_cast<std::size_t>(axis)].h());
            }
            double weight = 1.0;
            std::vector<double> t = grid.node(f);
            for (int mu = 0; mu < k.dil.nu; ++mu) {
                double norm2 = 0.0;
                int asum = 0;
                for (int i : blocks[static_cast<std::size_t>(mu)]) {
                    norm2 += t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(i)];
                    asum += alpha[i];
                }
                int exponent = static_cast<int>(blocks[static_cast<std::size_t>(mu)].size()) + asum;
                weight *= std::pow(std::sqrt(norm2), exponent);
            }
            best = std::max(best, std::abs(deriv) * weight);
        }
        out[alpha] = best;
    }
    return out;
}

double max_cancellation_residual(const BumpFamily& fam, int sections) {
    auto blocks = parameter_blocks(fam.dil);
    double worst = 0.0;
    for (const auto& m : fam.members) {
        for (int mu = 0; mu < fam.dil.nu; ++mu) {
            if (m.j[mu] == 0) continue;
            const auto& block = blocks[static_cast<std::size_t>(mu)];
            // sweep the remaining coordinates through a few sections
            std::vector<int> rest;
            for (int i = 0; i < fam.dil.N; ++i)
                if (std::find(block.begin(), block.end(), i) == block.end()) rest.push_back(i);
            int combos = rest.empty() ? 1 : sections;
            for (int c = 0; c < combos; ++c) {
                std::vector<double> t(static_cast<std::size_t>(fam.dil.N), 0.0);
                for (std::size_t r = 0; r < rest.size(); ++r) {
                    double frac = (c + 0.5 + static_cast<double>(r)) / (sections + static_cast<double>(rest.size()));
                    t[static_cast<std::size_t>(rest[r])] = -fam.params.a + 2.0 * fam.params.a * frac;
                }
                worst = std::max(worst, std::abs(fam.block_integral(m.j, block, t)));
            }
        }
    }
    return worst;
}

GridDump kernel_to_dump(const GridKernel& k) {
    GridDump dump;
    dump.kind = "kernel";
    dump.meta["N"] = std::to_string(k.dil.N);
    dump.meta["nu"] = std::to_string(k.dil.nu);
    std::ostringstream es;
    for (int i = 0; i < k.dil.N; ++i) {
        if (i) es << ";";
        for (int mu = 0; mu < k.dil.nu; ++mu) {
            if (mu) es << ",";
            es << k.dil.e[static_cast<std::size_t>(i)][mu];
        }
    }
    dump.meta["e"] = es.str();
    dump.meta["a"] = std::to_string(k.a);
    dump.meta["J"] = std::to_string(k.J);
    dump.spec = k.values.spec;
    dump.values = k.values.v;
    return dump;
}

GridKernel kernel_from_dump(const GridDump& dump, const BumpFamily* family) {
    if (dump.kind != "kernel") throw std::invalid_argument("kernel_from_dump: not a kernel dump");
    GridKernel k;
    int n = std::stoi(dump.meta.at("N"));
    int nu = std::stoi(dump.meta.at("nu"));
    std::vector<MultiIndex> e;
    {
        std::istringstream es(dump.meta.at("e"));
        std::string part;
        while (std::getline(es, part, ';')) {
            std::vector<int> entries;
            std::istringstream ps(part);
            std::string num;
            while (std::getline(ps, num, ',')) entries.push_back(std::stoi(num));
            e.push_back(MultiIndex(entries));
        }
    }
    k.dil = DilationSpec(n, nu, std::move(e));
    k.a = std::stod(dump.meta.at("a"));
    k.J = std::stoi(dump.meta.at("J"));
    k.family = family;
    k.values.spec = dump.spec;
    k.values.v = dump.values;
    return k;
}

}  // namespace radon

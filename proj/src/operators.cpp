#include "radon/operators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "radon/prep.hpp"
#include "radon/simd.hpp"

namespace radon {

double CutoffSpec::eval1(double s) const {
    s = std::fabs(s);
    if (s <= plateau) return 1.0;
    if (s >= support) return 0.0;
    double u = (s - plateau) / (support - plateau);
    double b = 1.0 - u * u;
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= b;
    return out;
}

double CutoffSpec::eval(const std::vector<double>& x) const {
    double out = 1.0;
    for (double xi : x) {
        out *= eval1(xi);
        if (out == 0.0) return 0.0;
    }
    return out;
}

namespace {

/// Per dyadic index j: quadrature nodes over the support box of the dilated
/// member with combined weights (cell volume) * (dilated kernel value).
struct QuadratureTable {
    std::vector<std::vector<double>> nodes;  // t values
    std::vector<double> weights;             // includes the kernel factor
};

std::vector<QuadratureTable> kernel_quadrature(const BumpFamily& fam, int J, int t_points) {
    std::vector<QuadratureTable> tables;
    int N = fam.dil.N;
    for (const auto& m : fam.members) {
        bool inside = true;
        for (int mu = 0; mu < fam.dil.nu; ++mu)
            if (m.j[mu] > J) inside = false;
        if (!inside) continue;
        std::vector<int> s = fam.dilation_exponents(m.j);
        std::vector<double> halfwidth(static_cast<std::size_t>(N));
        double cell = 1.0;
        for (int i = 0; i < N; ++i) {
            halfwidth[static_cast<std::size_t>(i)] =
                fam.params.a * std::ldexp(1.0, -s[static_cast<std::size_t>(i)]);
            cell *= 2.0 * halfwidth[static_cast<std::size_t>(i)] / t_points;
        }
        QuadratureTable table;
        std::vector<int> idx(static_cast<std::size_t>(N), 0);
        bool done = false;
        while (!done) {
            std::vector<double> t(static_cast<std::size_t>(N));
            for (int i = 0; i < N; ++i) {
                double h = 2.0 * halfwidth[static_cast<std::size_t>(i)] / t_points;
                t[static_cast<std::size_t>(i)] =
                    -halfwidth[static_cast<std::size_t>(i)] + (idx[static_cast<std::size_t>(i)] + 0.5) * h;
            }
            double kval = fam.eval_dilated(m.j, t);
            if (kval != 0.0) {
                table.nodes.push_back(std::move(t));
                table.weights.push_back(cell * kval);
            }
            int d = N - 1;
            for (;; --d) {
                if (d < 0) {
                    done = true;
                    break;
                }
                if (++idx[static_cast<std::size_t>(d)] < t_points) break;
                idx[static_cast<std::size_t>(d)] = 0;
            }
        }
        tables.push_back(std::move(table));
    }
    return tables;
}

double kappa_value(const OperatorConfig& cfg, const std::vector<double>& t,
                   const std::vector<double>& x) {
    if (!cfg.kappa) return 1.0;
    return cfg.kappa->eval_d(t, x)[0];
}

/// Flat evaluator for a polynomial map in (t, x): one multiply chain per term.
struct CompiledMap {
    struct Term {
        double c;
        std::vector<int> texp;
        std::vector<int> xexp;
        int comp;
    };
    int arity = 0;
    std::vector<Term> terms;

    explicit CompiledMap(const JetSeries& jet) : arity(jet.arity()) {
        for (const auto& [a, p] : jet.terms()) {
            for (int c = 0; c < jet.arity(); ++c) {
                for (const auto& [m, coef] : p.comp[c].terms()) {
                    Term term;
                    term.c = to_double(coef);
                    term.texp = a.entries();
                    term.xexp = m.entries();
                    term.comp = c;
                    terms.push_back(std::move(term));
                }
            }
        }
    }

    void eval(const double* t, const double* x, double* out) const {
        for (int c = 0; c < arity; ++c) out[c] = 0.0;
        for (const auto& term : terms) {
            double v = term.c;
            for (std::size_t i = 0; i < term.texp.size(); ++i)
                for (int k = 0; k < term.texp[i]; ++k) v *= t[i];
            for (std::size_t i = 0; i < term.xexp.size(); ++i)
                for (int k = 0; k < term.xexp[i]; ++k) v *= x[i];
            out[term.comp] += v;
        }
    }
};

/// Assembled banded rows for 1-dimensional x-grids: row i holds the dense
/// window of interpolation weights it touches. apply is a window dot product,
/// the adjoint a window axpy.
struct Banded1D {
    int res = 0;
    std::vector<int> lo;
    std::vector<std::vector<double>> rows;

    void apply(const double* in, double* out) const {
        for (int i = 0; i < res; ++i) {
            const auto& r = rows[static_cast<std::size_t>(i)];
            out[i] = r.empty() ? 0.0
                               : simd::dot(r.data(), in + lo[static_cast<std::size_t>(i)], r.size());
        }
    }
    void apply_adj(const double* in, double* out) const {
        std::fill(out, out + res, 0.0);
        for (int i = 0; i < res; ++i) {
            const auto& r = rows[static_cast<std::size_t>(i)];
            if (!r.empty() && in[i] != 0.0)
                simd::axpy(out + lo[static_cast<std::size_t>(i)], in[i], r.data(), r.size());
        }
    }
};

}  // namespace

GridFn eval_t_operator(const Surface& s, const BumpFamily& fam, int J,
                       const OperatorConfig& cfg, const GridFn& f) {
    LinearOperator op = make_t_operator(s, fam, J, cfg);
    if (f.spec != cfg.xgrid) throw std::invalid_argument("eval_t_operator: f grid mismatch");
    GridFn out = GridFn::zeros(cfg.xgrid);
    op.apply(f.v.data(), out.v.data());
    return out;
}

LinearOperator make_t_operator(const Surface& s, const BumpFamily& fam, int J,
                               const OperatorConfig& cfg) {
    auto tables = std::make_shared<std::vector<QuadratureTable>>(
        kernel_quadrature(fam, J, cfg.t_points));
    auto grid = std::make_shared<GridSpec>(cfg.xgrid);
    std::size_t dim = grid->size();
    auto gamma = std::make_shared<CompiledMap>(s.gamma);
    auto config = std::make_shared<OperatorConfig>(cfg);

    LinearOperator op;
    op.dim = dim;

    if (grid->dims() == 1) {
        // assemble banded rows once; escape errors surface here
        auto band = std::make_shared<Banded1D>();
        band->res = grid->axes[0].res;
        band->lo.assign(static_cast<std::size_t>(band->res), 0);
        band->rows.resize(static_cast<std::size_t>(band->res));
        const GridAxis& ax = grid->axes[0];
        for (int i = 0; i < band->res; ++i) {
            std::vector<double> x{ax.node(i)};
            double p1 = config->psi1.eval(x);
            if (p1 == 0.0) continue;
            // window by scanning the touched indices first
            int wlo = band->res, whi = -1;
            double y;
            for (const auto& table : *tables) {
                for (std::size_t q = 0; q < table.nodes.size(); ++q) {
                    gamma->eval(table.nodes[q].data(), x.data(), &y);
                    if (y < ax.lo || y > ax.hi)
                        throw std::runtime_error(
                            "t operator: gamma leaves the sampled domain at x = " +
                            std::to_string(x[0]) + ", t1 = " + std::to_string(table.nodes[q][0]));
                    double u = (y - ax.lo) / ax.h() - 0.5;
                    int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, ax.res - 2);
                    wlo = std::min(wlo, i0);
                    whi = std::max(whi, i0 + 1);
                }
            }
            if (whi < 0) continue;
            band->lo[static_cast<std::size_t>(i)] = wlo;
            auto& row = band->rows[static_cast<std::size_t>(i)];
            row.assign(static_cast<std::size_t>(whi - wlo + 1), 0.0);
            for (const auto& table : *tables) {
                for (std::size_t q = 0; q < table.nodes.size(); ++q) {
                    gamma->eval(table.nodes[q].data(), x.data(), &y);
                    double w = table.weights[q] * p1 * config->psi2.eval({y}) *
                               kappa_value(*config, table.nodes[q], x);
                    if (w == 0.0) continue;
                    double u = (y - ax.lo) / ax.h() - 0.5;
                    double fl = std::floor(u);
                    int i0 = static_cast<int>(fl);
                    double frac = u - fl;
                    if (i0 < 0) {
                        i0 = 0;
                        frac = 0.0;
                    }
                    if (i0 >= ax.res - 1) {
                        i0 = ax.res - 2;
                        frac = 1.0;
                    }
                    row[static_cast<std::size_t>(i0 - wlo)] += w * (1.0 - frac);
                    row[static_cast<std::size_t>(i0 + 1 - wlo)] += w * frac;
                }
            }
        }
        op.apply = [band](const double* in, double* out) { band->apply(in, out); };
        op.apply_adj = [band](const double* in, double* out) { band->apply_adj(in, out); };
        return op;
    }

    // general dimension: matrix-free gather/scatter
    op.apply = [tables, grid, gamma, config, dim](const double* in, double* out) {
        std::fill(out, out + dim, 0.0);
        GridFn view{*grid, std::vector<double>(in, in + dim)};
        std::vector<double> y(static_cast<std::size_t>(grid->dims()));
        for (std::size_t xi = 0; xi < dim; ++xi) {
            std::vector<double> x = grid->node(xi);
            double p1 = config->psi1.eval(x);
            if (p1 == 0.0) continue;
            double acc = 0.0;
            for (const auto& table : *tables) {
                for (std::size_t q = 0; q < table.nodes.size(); ++q) {
                    gamma->eval(table.nodes[q].data(), x.data(), y.data());
                    if (!grid->contains(y))
                        throw std::runtime_error("t operator: gamma leaves the sampled domain");
                    double w = table.weights[q] * config->psi2.eval(y) *
                               kappa_value(*config, table.nodes[q], x);
                    if (w != 0.0) acc += w * view.interp(y);
                }
            }
            out[xi] = p1 * acc;
        }
    };
    op.apply_adj = [tables, grid, gamma, config, dim](const double* in, double* out) {
        std::fill(out, out + dim, 0.0);
        GridFn acc{*grid, std::vector<double>(dim, 0.0)};
        std::vector<double> y(static_cast<std::size_t>(grid->dims()));
        for (std::size_t xi = 0; xi < dim; ++xi) {
            if (in[xi] == 0.0) continue;
            std::vector<double> x = grid->node(xi);
            double p1 = config->psi1.eval(x);
            if (p1 == 0.0) continue;
            for (const auto& table : *tables) {
                for (std::size_t q = 0; q < table.nodes.size(); ++q) {
                    gamma->eval(table.nodes[q].data(), x.data(), y.data());
                    if (!grid->contains(y))
                        throw std::runtime_error("t operator: gamma leaves the sampled domain");
                    double w = table.weights[q] * config->psi2.eval(y) *
                               kappa_value(*config, table.nodes[q], x);
                    if (w != 0.0) acc.scatter(y, p1 * w * in[xi]);
                }
            }
        }
        std::copy(acc.v.begin(), acc.v.end(), out);
    };
    return op;
}

GridFn eval_maximal(const Surface& s, const OperatorConfig& cfg, const GridFn& f,
                    MaximalMode mode, int scale_levels) {
    if (f.spec != cfg.xgrid) throw std::invalid_argument("eval_maximal: f grid mismatch");
    int N = s.dil.N;
    GridSpec grid = cfg.xgrid;
    std::size_t dim = grid.size();

    // quadrature nodes over the fixed box |t| < a (midpoint)
    std::vector<std::vector<double>> tnodes;
    double cell = 1.0;
    {
        double h = 2.0 * cfg.a / cfg.t_points;
        for (int i = 0; i < N; ++i) cell *= h;
        std::vector<int> idx(static_cast<std::size_t>(N), 0);
        bool done = false;
        while (!done) {
            std::vector<double> t(static_cast<std::size_t>(N));
            for (int i = 0; i < N; ++i)
                t[static_cast<std::size_t>(i)] = -cfg.a + (idx[static_cast<std::size_t>(i)] + 0.5) * h;
            tnodes.push_back(std::move(t));
            int d = N - 1;
            for (;; --d) {
                if (d < 0) {
                    done = true;
                    break;
                }
                if (++idx[static_cast<std::size_t>(d)] < cfg.t_points) break;
                idx[static_cast<std::size_t>(d)] = 0;
            }
        }
    }

    // dyadic per-coordinate scale grid
    std::vector<std::vector<double>> deltas;
    {
        std::vector<int> idx(static_cast<std::size_t>(N), 0);
        bool done = false;
        while (!done) {
            std::vector<double> d(static_cast<std::size_t>(N));
            for (int i = 0; i < N; ++i)
                d[static_cast<std::size_t>(i)] = std::ldexp(1.0, -idx[static_cast<std::size_t>(i)]);
            deltas.push_back(std::move(d));
            int ax = N - 1;
            for (;; --ax) {
                if (ax < 0) {
                    done = true;
                    break;
                }
                if (++idx[static_cast<std::size_t>(ax)] <= scale_levels) break;
                idx[static_cast<std::size_t>(ax)] = 0;
            }
        }
    }

    GridFn out = GridFn::zeros(grid);
    std::vector<double> layer(dim);
    for (const auto& delta : deltas) {
        std::fill(layer.begin(), layer.end(), 0.0);
        for (std::size_t xi = 0; xi < dim; ++xi) {
            std::vector<double> x = grid.node(xi);
            double p1 = cfg.psi1.eval(x);
            if (p1 == 0.0) continue;
            double acc = 0.0;
            std::vector<double> dt(static_cast<std::size_t>(N));
            for (const auto& t : tnodes) {
                for (int i = 0; i < N; ++i)
                    dt[static_cast<std::size_t>(i)] = delta[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(i)];
                std::vector<double> y = s.gamma.eval_d(dt, x);
                if (!grid.contains(y))
                    throw std::runtime_error("eval_maximal: gamma leaves the sampled domain");
                double inner = std::fabs(f.interp(y));
                if (mode == MaximalMode::ScaleDyadicCut) inner *= cfg.psi2.eval(y);
                acc += inner;
            }
            layer[xi] = p1 * acc * cell;
        }
        simd::ewise_max(out.v.data(), layer.data(), dim);
    }
    return out;
}

bool validate_spec(const DyadicFamilySpec& spec, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    int N = spec.dil.N;
    if (spec.r > spec.q()) return fail("r exceeds q");
    for (int l = 0; l < spec.q(); ++l) {
        if (spec.degrees[static_cast<std::size_t>(l)].is_zero()) return fail("zero formal degree");
    }
    for (int l = 0; l < spec.r; ++l) {
        const auto& alpha = spec.alphas[static_cast<std::size_t>(l)];
        if (alpha.is_zero()) return fail("zero alpha");
        // normalization: the (0, alpha_l) coefficient of c_l is the constant 1
        const JetSeries& c = spec.coeffs[static_cast<std::size_t>(l)];
        MultiIndex key(static_cast<std::size_t>(2 * N));
        for (int i = 0; i < N; ++i) key[N + i] = alpha[i];
        PolyVec v = c.coeff(key);
        if (!(v.comp[0] == Poly::constant(c.nx(), 1)))
            return fail("coefficient normalization fails at l = " + std::to_string(l));
        // vanishing of every split beta1 + beta2 = alpha_l across all k
        for (int k = 0; k < spec.q(); ++k) {
            const JetSeries& ck = spec.coeffs[static_cast<std::size_t>(k)];
            if (ck.is_zero()) continue;
            for (const auto& beta1 : enumerate_multiindices(static_cast<std::size_t>(N), alpha.order())) {
                if (!beta1.leq(alpha)) continue;
                MultiIndex beta2 = alpha - beta1;
                if (k == l && beta1.is_zero()) continue;
                MultiIndex kk(static_cast<std::size_t>(2 * N));
                for (int i = 0; i < N; ++i) {
                    kk[i] = beta1[i];
                    kk[N + i] = beta2[i];
                }
                if (!ck.coeff(kk).is_zero())
                    return fail("mixed derivative at l = " + std::to_string(l) +
                                ", k = " + std::to_string(k) + " does not vanish");
            }
        }
    }
    return true;
}

JetSeries build_wj(const DyadicFamilySpec& spec, const ScaleIndex& j) {
    int N = spec.dil.N;
    if (static_cast<int>(j.size()) != spec.dil.nu)
        throw std::invalid_argument("build_wj: scale index size != nu");

    // scale of the first slot: t_i <- 2^{-j.e_i} t_i
    std::vector<int> target(static_cast<std::size_t>(2 * N));
    std::vector<Rat> scale(static_cast<std::size_t>(2 * N), Rat(1));
    for (int i = 0; i < N; ++i) {
        target[static_cast<std::size_t>(i)] = i;
        target[static_cast<std::size_t>(N + i)] = i;
        Rat s = 1;
        bool zero = false;
        for (int mu = 0; mu < spec.dil.nu; ++mu) {
            int emu = spec.dil.e[static_cast<std::size_t>(i)][mu];
            if (emu == 0) continue;
            if (!j[static_cast<std::size_t>(mu)]) {
                zero = true;
                break;
            }
            s *= rat_pow(rat(1, 2), *j[static_cast<std::size_t>(mu)] * emu);
        }
        scale[static_cast<std::size_t>(i)] = zero ? Rat(0) : s;
    }

    JetSeries w(N, spec.n, spec.n, spec.pol.lt, spec.pol.lx);
    for (int l = 0; l < spec.q(); ++l) {
        const JetSeries& c = spec.coeffs[static_cast<std::size_t>(l)];
        if (c.is_zero()) continue;
        // 2^{-j.d_l}
        Rat amp = 1;
        bool zero = false;
        for (int mu = 0; mu < spec.dil.nu; ++mu) {
            int dmu = spec.degrees[static_cast<std::size_t>(l)][mu];
            if (dmu == 0) continue;
            if (!j[static_cast<std::size_t>(mu)]) {
                zero = true;
                break;
            }
            amp *= rat_pow(rat(1, 2), *j[static_cast<std::size_t>(mu)] * dmu);
        }
        if (zero) continue;
        JetSeries cl = c.subst_t(target, scale, N);
        JetSeries term = cl.mul(JetSeries::term(
            N, MultiIndex(static_cast<std::size_t>(N)),
            spec.fields[static_cast<std::size_t>(l)], spec.pol.lt, spec.pol.lx));
        w = w + term.scaled(amp);
    }
    return w;
}

GridFn eval_mj(const DyadicFamilySpec& spec, const ScaleIndex& j, const OperatorConfig& cfg,
               const GridFn& f, FlowAverageKind kind) {
    JetSeries w = build_wj(spec, j);
    GridSpec grid = cfg.xgrid;
    std::size_t dim = grid.size();
    int N = spec.dil.N;

    std::vector<std::vector<double>> tnodes;
    double cell = 1.0;
    double h = 2.0 * cfg.a / cfg.t_points;
    for (int i = 0; i < N; ++i) cell *= h;
    {
        std::vector<int> idx(static_cast<std::size_t>(N), 0);
        bool done = false;
        while (!done) {
            std::vector<double> t(static_cast<std::size_t>(N));
            for (int i = 0; i < N; ++i)
                t[static_cast<std::size_t>(i)] = -cfg.a + (idx[static_cast<std::size_t>(i)] + 0.5) * h;
            tnodes.push_back(std::move(t));
            int d = N - 1;
            for (;; --d) {
                if (d < 0) {
                    done = true;
                    break;
                }
                if (++idx[static_cast<std::size_t>(d)] < cfg.t_points) break;
                idx[static_cast<std::size_t>(d)] = 0;
            }
        }
    }

    CutoffSpec sigma_cut{cfg.a / 2.0, cfg.a, cfg.psi0.k};
    const CutoffSpec& outer = (kind == FlowAverageKind::Psi0Sigma) ? cfg.psi0 : cfg.psi1;
    const CutoffSpec& inner = (kind == FlowAverageKind::Psi0Sigma) ? cfg.psi0 : cfg.psi2;
    GridFn out = GridFn::zeros(grid);
    for (std::size_t xi = 0; xi < dim; ++xi) {
        std::vector<double> x = grid.node(xi);
        double p0 = outer.eval(x);
        if (p0 == 0.0) continue;
        double acc = 0.0;
        for (const auto& t : tnodes) {
            double tw = (kind == FlowAverageKind::Psi0Sigma)
                            ? cfg.sigma_scale * sigma_cut.eval(t)
                            : 1.0;
            if (tw == 0.0) continue;
            std::vector<double> y = w_flow_numeric(w, t, x, cfg.flow_steps);
            if (!grid.contains(y))
                throw std::runtime_error("eval_mj: flow leaves the sampled domain");
            acc += std::fabs(f.interp(y)) * inner.eval(y) * tw;
        }
        out.v[xi] = p0 * acc * cell;
    }
    return out;
}

GridFn eval_maximal_family(const DyadicFamilySpec& spec, const std::vector<ScaleIndex>& js,
                           const OperatorConfig& cfg, const GridFn& f, FlowAverageKind kind) {
    GridFn out = GridFn::zeros(cfg.xgrid);
    for (const auto& j : js) {
        GridFn layer = eval_mj(spec, j, cfg, f, kind);
        simd::ewise_max(out.v.data(), layer.data(), out.v.size());
    }
    return out;
}

ScaleIndex embed_scale(const DyadicFamilySpec& spec, const std::vector<int>& j) {
    if (static_cast<int>(j.size()) != spec.dil.N)
        throw std::invalid_argument("embed_scale: need one entry per t-variable");
    ScaleIndex out(static_cast<std::size_t>(spec.dil.nu));
    for (int i = 0; i < spec.dil.N; ++i) out[static_cast<std::size_t>(i)] = j[static_cast<std::size_t>(i)];
    for (int l = 0; l < spec.r; ++l) {
        int acc = 0;
        const auto& alpha = spec.alphas[static_cast<std::size_t>(l)];
        for (int i = 0; i < spec.dil.N; ++i) acc += j[static_cast<std::size_t>(i)] * alpha[i];
        out[static_cast<std::size_t>(spec.dil.N + l)] = acc;
    }
    return out;
}

DyadicFamilySpec reduce_maximal_pipeline(const Surface& s, int closure_cutoff) {
    WField w = gamma_to_w(s);
    PrepResult prep = taylor_prepare(w.W);
    int N = s.dil.N;
    int r = static_cast<int>(prep.terms.size());
    int nu = N + r;

    DyadicFamilySpec spec;
    spec.pol = s.pol;
    spec.n = s.n;
    spec.r = r;
    // dilations: t_i scales with the i-th of the first N parameters
    std::vector<MultiIndex> e;
    for (int i = 0; i < N; ++i) e.push_back(MultiIndex::unit(static_cast<std::size_t>(nu), static_cast<std::size_t>(i)));
    spec.dil = DilationSpec(N, nu, std::move(e));

    for (int l = 0; l < r; ++l) {
        const auto& term = prep.terms[static_cast<std::size_t>(l)];
        spec.fields.push_back(term.f_alpha);
        spec.degrees.push_back(MultiIndex::unit(static_cast<std::size_t>(nu), static_cast<std::size_t>(N + l)));
        spec.alphas.push_back(term.alpha);
        // c_l(t, s, x) = c_alpha(t, x) s^alpha over 2N t-variables
        std::vector<int> target(static_cast<std::size_t>(N));
        std::vector<Rat> one(static_cast<std::size_t>(N), Rat(1));
        for (int i = 0; i < N; ++i) target[static_cast<std::size_t>(i)] = i;
        JetSeries c = term.c.retruncated(s.pol.lt, s.pol.lx).subst_t(target, one, 2 * N);
        MultiIndex smon(static_cast<std::size_t>(2 * N));
        for (int i = 0; i < N; ++i) smon[N + i] = term.alpha[i];
        c = c.retruncated(2 * s.pol.lt, s.pol.lx).t_mul(smon);
        spec.coeffs.push_back(std::move(c));
        spec.provenance.push_back("prepared coefficient at " + term.alpha.str());
    }

    // extend the list through the left-normed closure of the prepared fields
    if (r > 0) {
        std::vector<WeightedField> seeds;
        for (int l = 0; l < r; ++l)
            seeds.emplace_back(spec.fields[static_cast<std::size_t>(l)],
                               spec.degrees[static_cast<std::size_t>(l)]);
        ClosureSet closure = lie_closure(seeds, closure_cutoff, ClosureFlavor::LeftNormed, s.pol.lx);
        std::vector<std::pair<PolyVec, MultiIndex>> pairs;
        for (const auto& elem : closure.elems) pairs.emplace_back(elem.wf.X, elem.wf.d);
        GenerateResult gen = finite_generate(pairs, s.pol.lx);
        for (int kept : gen.kept) {
            if (kept < r) continue;  // the seeds are already listed
            const auto& elem = closure.elems[static_cast<std::size_t>(kept)];
            spec.fields.push_back(elem.wf.X);
            spec.degrees.push_back(elem.wf.d);
            spec.coeffs.push_back(JetSeries(2 * N, s.n, 1, 2 * s.pol.lt, s.pol.lx));
            spec.provenance.push_back("bracket of closure elements " +
                                      std::to_string(elem.parent_a) + "," +
                                      std::to_string(elem.parent_b));
        }
    }

    std::string why;
    if (!validate_spec(spec, &why))
        throw std::runtime_error("reduce_maximal_pipeline: invalid spec: " + why);
    return spec;
}

OpNormEstimate estimate_opnorm(const LinearOperator& op, double p, int trials, double rel_tol,
                               int max_iter, std::uint64_t seed) {
    OpNormEstimate est;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::size_t n = op.dim;
    std::vector<double> v(n), av(n), atav(n);

    if (p == 2.0) {
        for (auto& c : v) c = normal(rng);
        double norm = std::sqrt(simd::l2_norm_sq(v.data(), n));
        simd::scale(v.data(), 1.0 / norm, n);
        double prev = 0.0;
        for (int it = 1; it <= max_iter; ++it) {
            op.apply(v.data(), av.data());
            op.apply_adj(av.data(), atav.data());
            double lambda = std::sqrt(simd::l2_norm_sq(av.data(), n));
            double gain = std::sqrt(simd::l2_norm_sq(atav.data(), n));
            est.iterations = it;
            est.value = lambda;
            est.history.push_back(lambda);
            if (gain == 0.0) {
                est.converged = true;
                est.residual = 0.0;
                break;
            }
            simd::scale(atav.data(), 1.0 / gain, n);
            est.residual = std::fabs(lambda - prev) / (lambda == 0.0 ? 1.0 : lambda);
            std::swap(v, atav);
            if (it > 2 && est.residual <= rel_tol) {
                est.converged = true;
                break;
            }
            prev = lambda;
        }
        return est;
    }

    // p != 2: randomized lower bound
    double best = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        for (auto& c : v) c = normal(rng);
        double fn = 0.0;
        for (double c : v) fn += std::pow(std::fabs(c), p);
        fn = std::pow(fn, 1.0 / p);
        op.apply(v.data(), av.data());
        double gn = 0.0;
        for (double c : av) gn += std::pow(std::fabs(c), p);
        gn = std::pow(gn, 1.0 / p);
        best = std::max(best, gn / fn);
        est.iterations = trial + 1;
    }
    est.value = best;
    est.converged = true;
    return est;
}

double lp_norm(const GridFn& f, double p) {
    double cell = f.spec.cell_volume();
    if (std::isinf(p)) return simd::sup_abs(f.v.data(), f.v.size());
    double acc = 0.0;
    for (double v : f.v) acc += std::pow(std::fabs(v), p);
    return std::pow(acc * cell, 1.0 / p);
}

}  // namespace radon

#include "radon/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "radon/linalg.hpp"
#include "radon/prep.hpp"

namespace radon {

std::string status_str(Status s) {
    switch (s) {
        case Status::Proved: return "proved";
        case Status::Refuted: return "refuted";
        default: return "unknown";
    }
}

namespace {

double delta_power_d(const std::vector<double>& delta, const MultiIndex& d) {
    double out = 1.0;
    for (std::size_t mu = 0; mu < d.size(); ++mu)
        for (int k = 0; k < d[mu]; ++k) out *= delta[mu];
    return out;
}

Rat delta_power_exact(const std::vector<Rat>& delta, const MultiIndex& d) {
    Rat out = 1;
    for (std::size_t mu = 0; mu < d.size(); ++mu)
        if (d[mu]) out *= rat_pow(delta[mu], d[mu]);
    return out;
}

void rk4_step(const std::vector<PolyVec const*>& fields, const std::vector<double>& scale,
              const double* a, std::vector<double>& y, double h) {
    std::size_t n = y.size();
    auto rhs = [&](const std::vector<double>& p, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t j = 0; j < fields.size(); ++j) {
            double w = a[j] * scale[j];
            if (w == 0.0) continue;
            std::vector<double> v = fields[j]->eval_d(p);
            for (std::size_t i = 0; i < n; ++i) out[i] += w * v[i];
        }
    };
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    rhs(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

BallSample cc_ball_sample(const std::vector<WeightedField>& fields,
                          const std::vector<double>& x0, const std::vector<double>& delta,
                          const BallSampleParams& params) {
    if (fields.empty()) throw std::invalid_argument("cc_ball_sample: no fields");
    std::size_t n = x0.size();
    std::size_t q = fields.size();

    BallSample out;
    out.center = x0;
    out.delta = delta;
    out.extents.assign(n, 0.0);

    std::vector<double> scale(q);
    std::vector<PolyVec const*> fx(q);
    for (std::size_t j = 0; j < q; ++j) {
        scale[j] = delta_power_d(delta, fields[j].d);
        fx[j] = &fields[j].X;
    }

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    const int seg = params.segments;
    const double hseg = 1.0 / seg;
    const double hstep = hseg / params.steps_per_segment;

    // deterministic extremal controls first: constant +-e_j, then two-phase
    // combinations e_i then e_j; the rest are random draws in the unit ball
    std::vector<std::vector<double>> plans;
    for (std::size_t j = 0; j < q; ++j) {
        for (double sgn : {1.0, -1.0}) {
            std::vector<double> plan(static_cast<std::size_t>(seg) * q, 0.0);
            for (int s = 0; s < seg; ++s) plan[static_cast<std::size_t>(s) * q + j] = sgn * 0.999;
            plans.push_back(std::move(plan));
        }
    }
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            if (i == j) continue;
            for (double s1 : {1.0, -1.0}) {
                for (double s2 : {1.0, -1.0}) {
                    std::vector<double> plan(static_cast<std::size_t>(seg) * q, 0.0);
                    for (int s = 0; s < seg; ++s) {
                        std::size_t base = static_cast<std::size_t>(s) * q;
                        if (s < seg / 2)
                            plan[base + i] = s1 * 0.999;
                        else
                            plan[base + j] = s2 * 0.999;
                    }
                    plans.push_back(std::move(plan));
                }
            }
        }
    }
    while (static_cast<int>(plans.size()) < params.paths) {
        std::vector<double> plan(static_cast<std::size_t>(seg) * q, 0.0);
        bool boundary = unif(rng) < params.boundary_fraction;
        for (int s = 0; s < seg; ++s) {
            double norm2 = 0.0;
            std::size_t base = static_cast<std::size_t>(s) * q;
            for (std::size_t j = 0; j < q; ++j) {
                plan[base + j] = normal(rng);
                norm2 += plan[base + j] * plan[base + j];
            }
            double norm = std::sqrt(std::max(norm2, 1e-300));
            double radius = boundary ? 0.999 : 0.999 * std::pow(unif(rng), 1.0 / static_cast<double>(q));
            for (std::size_t j = 0; j < q; ++j) plan[base + j] *= radius / norm;
        }
        plans.push_back(std::move(plan));
    }

    for (auto& plan : plans) {
        std::vector<double> y = x0;
        bool ok = true;
        for (int s = 0; s < seg && ok; ++s) {
            const double* a = plan.data() + static_cast<std::size_t>(s) * q;
            for (int st = 0; st < params.steps_per_segment; ++st) {
                rk4_step(fx, scale, a, y, hstep);
                for (std::size_t i = 0; i < n; ++i) {
                    if (!std::isfinite(y[i]) || std::abs(y[i] - x0[i]) > params.domain_radius) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
        }
        if (!ok) {
            ++out.escaped;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i)
            out.extents[i] = std::max(out.extents[i], std::abs(y[i] - x0[i]));
        out.points.push_back(std::move(y));
        out.controls.push_back(std::move(plan));
    }
    return out;
}

void write_point_cloud(const BallSample& sample, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_point_cloud: cannot open " + path);
    for (const auto& p : sample.points) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) os << ' ';
            os << p[i];
        }
        os << '\n';
    }
}

namespace {

/// Exact-tier solve: X0 = sum c_j X_j over generators with d_j <= d0, with
/// polynomial coefficients and no degree overflow.
std::optional<std::vector<ControlCoefficient>> exact_control_solve(
    const WeightedField& target, const std::vector<WeightedField>& s, int lx) {
    int nx = target.X.nvars();
    int arity = target.X.arity();
    auto monomials = enumerate_multiindices(static_cast<std::size_t>(nx), lx);
    std::map<MultiIndex, std::size_t> mono_index;
    for (std::size_t m = 0; m < monomials.size(); ++m) mono_index[monomials[m]] = m;

    std::vector<std::pair<int, MultiIndex>> unknowns;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (!s[j].d.leq(target.d)) continue;
        if (s[j].X.is_zero()) continue;
        int fdeg = std::max(s[j].X.total_degree(), 0);
        for (const auto& m : monomials)
            if (m.order() + fdeg <= lx) unknowns.emplace_back(static_cast<int>(j), m);
    }
    if (unknowns.empty() && !target.X.is_zero()) return std::nullopt;

    std::size_t nrows = static_cast<std::size_t>(arity) * monomials.size();
    std::vector<std::vector<Rat>> a(nrows, std::vector<Rat>(unknowns.size(), Rat(0)));
    std::vector<Rat> b(nrows, Rat(0));
    for (int c = 0; c < arity; ++c)
        for (const auto& [m, coef] : target.X.comp[c].terms())
            b[static_cast<std::size_t>(c) * monomials.size() + mono_index[m]] = coef;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        const auto& [j, m] = unknowns[u];
        const auto& gen = s[static_cast<std::size_t>(j)].X;
        for (int c = 0; c < arity; ++c)
            for (const auto& [mg, coef] : gen.comp[c].terms())
                a[static_cast<std::size_t>(c) * monomials.size() + mono_index[m + mg]][u] = coef;
    }
    auto sol = solve_exact(std::move(a), std::move(b));
    if (!sol) return std::nullopt;

    std::map<int, Poly> combine;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        if (is_zero((*sol)[u])) continue;
        const auto& [j, m] = unknowns[u];
        combine.try_emplace(j, Poly(nx)).first->second.add_term(m, (*sol)[u]);
    }
    std::vector<ControlCoefficient> out;
    for (auto& [j, poly] : combine)
        out.push_back(ControlCoefficient{j, std::move(poly), s[static_cast<std::size_t>(j)].d});
    return out;
}

std::vector<std::vector<Rat>> dyadic_delta_grid(int nu, int levels) {
    std::vector<Rat> axis;
    axis.push_back(Rat(1));
    for (int k = 1; k <= levels; ++k) axis.push_back(rat(1, 1L << k));
    axis.push_back(Rat(0));
    std::vector<std::vector<Rat>> grid;
    if (nu == 1) {
        for (const auto& a : axis) grid.push_back({a});
        return grid;
    }
    if (nu == 2) {
        for (const auto& a : axis)
            for (const auto& b : axis) grid.push_back({a, b});
        return grid;
    }
    // higher nu: diagonal plus single-axis degenerations to keep the grid small
    for (const auto& a : axis) grid.push_back(std::vector<Rat>(static_cast<std::size_t>(nu), a));
    for (int mu = 0; mu < nu; ++mu) {
        for (const auto& a : axis) {
            std::vector<Rat> d(static_cast<std::size_t>(nu), Rat(1));
            d[static_cast<std::size_t>(mu)] = a;
            grid.push_back(std::move(d));
        }
    }
    return grid;
}

std::vector<std::vector<Rat>> dyadic_points(int n, double radius, int count,
                                            std::uint64_t seed) {
    std::vector<std::vector<Rat>> pts;
    pts.push_back(std::vector<Rat>(static_cast<std::size_t>(n), Rat(0)));  // the center
    std::mt19937_64 rng(seed);
    const long denom = 32;
    long span = std::lround(radius * static_cast<double>(denom));
    std::uniform_int_distribution<long> num(-span, span);
    for (int i = 1; i < count; ++i) {
        std::vector<Rat> p;
        p.reserve(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) p.push_back(rat(num(rng), denom));
        pts.push_back(std::move(p));
    }
    return pts;
}

}  // namespace

bool witness_infeasible_exact(const WeightedField& target,
                              const std::vector<WeightedField>& s,
                              const std::vector<Rat>& delta, const std::vector<Rat>& x) {
    std::vector<std::vector<Rat>> span_vecs;
    for (const auto& gen : s) {
        Rat w = delta_power_exact(delta, gen.d);
        if (is_zero(w)) continue;
        std::vector<Rat> v = gen.X.eval(x);
        for (auto& c : v) c *= w;
        span_vecs.push_back(std::move(v));
    }
    Rat wt = delta_power_exact(delta, target.d);
    std::vector<Rat> b = target.X.eval(x);
    for (auto& c : b) c *= wt;
    return !in_span(span_vecs, b);
}

bool certificate_replays(const WeightedField& target, const std::vector<WeightedField>& s,
                         const ControlCertificate& cert) {
    if (cert.status != Status::Proved) return false;
    PolyVec acc(target.X.arity(), target.X.nvars());
    for (const auto& cc : cert.coeffs) {
        if (cc.generator < 0 || cc.generator >= static_cast<int>(s.size())) return false;
        const auto& gen = s[static_cast<std::size_t>(cc.generator)];
        if (!gen.d.leq(target.d)) return false;
        for (int c = 0; c < acc.arity(); ++c)
            acc.comp[c] = acc.comp[c] + cc.c.mul_exact(gen.X.comp[c]);
    }
    return acc == target.X;
}

ControlCertificate control_check(const WeightedField& target,
                                 const std::vector<WeightedField>& s,
                                 const ControlOptions& opt) {
    ControlCertificate cert;

    if (target.X.is_zero()) {
        cert.status = Status::Proved;
        cert.note = "zero target";
        return cert;
    }

    // exact tier
    if (auto coeffs = exact_control_solve(target, s, opt.lx)) {
        cert.status = Status::Proved;
        cert.coeffs = std::move(*coeffs);
        // measured sup-norm of the coefficients over the sampling box
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> u(-opt.box_radius, opt.box_radius);
        int n = target.X.nvars();
        for (int trial = 0; trial < 256; ++trial) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (auto& c : x) c = u(rng);
            for (const auto& cc : cert.coeffs)
                cert.max_coeff_supnorm = std::max(cert.max_coeff_supnorm, std::abs(cc.c.eval_d(x)));
        }
        return cert;
    }

    // refutation tier: pointwise solvability at sampled (delta, x)
    int nu = static_cast<int>(target.d.size());
    int n = target.X.arity();
    auto deltas = dyadic_delta_grid(nu, opt.delta_levels);
    auto points = dyadic_points(target.X.nvars(), opt.box_radius, opt.x_samples, opt.seed);

    for (const auto& delta : deltas) {
        std::vector<double> delta_d(delta.size());
        for (std::size_t i = 0; i < delta.size(); ++i) delta_d[i] = to_double(delta[i]);
        for (const auto& x : points) {
            std::vector<double> xd(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) xd[i] = to_double(x[i]);

            Eigen::VectorXd b(n);
            std::vector<double> tv = target.X.eval_d(xd);
            double wt = delta_power_d(delta_d, target.d);
            for (int i = 0; i < n; ++i) b(i) = wt * tv[i];
            if (b.norm() < 1e-14) continue;

            double residual = b.norm();
            if (!s.empty()) {
                Eigen::MatrixXd a(n, static_cast<int>(s.size()));
                for (std::size_t j = 0; j < s.size(); ++j) {
                    double w = delta_power_d(delta_d, s[j].d);
                    std::vector<double> v = s[j].X.eval_d(xd);
                    for (int i = 0; i < n; ++i) a(i, static_cast<int>(j)) = w * v[i];
                }
                Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(b);
                residual = (a * c - b).norm();
                if (residual <= opt.residual_tol * b.norm()) {
                    cert.max_ls_coeff = std::max(cert.max_ls_coeff, c.lpNorm<Eigen::Infinity>());
                    continue;
                }
            }
            // confirm with exact arithmetic before refuting
            if (witness_infeasible_exact(target, s, delta, x)) {
                cert.status = Status::Refuted;
                RefutationWitness w;
                w.delta = delta;
                w.x = x;
                std::vector<std::vector<Rat>> span_vecs;
                for (const auto& gen : s) {
                    Rat wd = delta_power_exact(delta, gen.d);
                    if (is_zero(wd)) continue;
                    std::vector<Rat> v = gen.X.eval(x);
                    for (auto& cc : v) cc *= wd;
                    span_vecs.push_back(std::move(v));
                }
                w.span_rank = rational_rank(span_vecs);
                std::vector<Rat> bb = target.X.eval(x);
                Rat wdt = delta_power_exact(delta, target.d);
                for (auto& cc : bb) cc *= wdt;
                span_vecs.push_back(std::move(bb));
                w.aug_rank = rational_rank(span_vecs);
                w.note = "target leaves the pointwise span";
                cert.witness = std::move(w);
                return cert;
            }
        }
    }

    cert.status = Status::Unknown;
    cert.note = "no exact certificate at this degree bound; no pointwise witness";
    return cert;
}

WControlResult control_check_w(const JetSeries& w, const DilationSpec& dil,
                               const std::vector<WeightedField>& s,
                               const ControlOptions& opt) {
    WControlResult out;

    // necessary direction: every Taylor coefficient is controlled
    for (const auto& [alpha, p] : w.terms()) {
        if (alpha.is_zero()) continue;
        WeightedField coeff_field(p, deg(alpha, dil));
        ControlCertificate c = control_check(coeff_field, s, opt);
        if (c.status == Status::Refuted) {
            out.cert.status = Status::Refuted;
            out.cert.witness = c.witness;
            out.cert.note = "Taylor coefficient at " + alpha.str() + " refuted";
            out.per_coefficient.emplace_back(alpha, std::move(c));
            return out;
        }
        out.per_coefficient.emplace_back(alpha, std::move(c));
    }

    // sufficient direction: preparation route
    PrepResult prep = taylor_prepare(w);
    bool all_proved = true;
    double supnorm = 0.0;
    for (const auto& term : prep.terms) {
        WeightedField coeff_field(term.f_alpha, deg(term.alpha, dil));
        ControlCertificate c = control_check(coeff_field, s, opt);
        supnorm = std::max(supnorm, c.max_coeff_supnorm);
        if (c.status != Status::Proved) all_proved = false;
    }
    if (all_proved) {
        out.cert.status = Status::Proved;
        out.cert.max_coeff_supnorm = supnorm;
        out.cert.note =
            "preparation route: every prepared coefficient field exactly controlled";
    } else {
        out.cert.status = Status::Unknown;
        out.cert.note = "preparation route incomplete at this cutoff";
    }
    if (prep.x_saturated) out.cert.note += "; x-truncation saturated";
    return out;
}

}  // namespace radon

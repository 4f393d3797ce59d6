#include "radon/surface.hpp"

#include <algorithm>
#include <stdexcept>

#include "radon/linalg.hpp"
#include "radon/prep.hpp"

namespace radon {

Surface Surface::from_series(JetSeries gamma, DilationSpec dil, TruncationPolicy pol) {
    pol.validate();
    dil.validate();
    if (gamma.nt() != dil.N) throw std::invalid_argument("Surface: gamma t-variables != N");
    if (gamma.arity() != gamma.nx()) throw std::invalid_argument("Surface: gamma must be a map");
    MultiIndex zero(static_cast<std::size_t>(gamma.nt()));
    if (!(gamma.coeff(zero) == PolyVec::identity(gamma.nx())))
        throw std::invalid_argument("Surface: gamma_0 != id");
    Surface s;
    s.dil = std::move(dil);
    s.pol = pol;
    s.n = gamma.nx();
    s.gamma = std::move(gamma);
    return s;
}

Surface Surface::from_exp(const std::map<MultiIndex, PolyVec>& fields, DilationSpec dil,
                          TruncationPolicy pol, int n) {
    JetSeries v(dil.N, n, n, pol.lt, pol.lx);
    for (const auto& [alpha, x] : fields) {
        if (alpha.is_zero()) throw std::invalid_argument("Surface: exponential form needs alpha != 0");
        v.add_coeff(alpha, x);
    }
    Surface s = from_series(flow_exp(v), dil, pol);
    s.exp_exponent = std::move(v);
    return s;
}

Surface Surface::identity(DilationSpec dil, TruncationPolicy pol, int n) {
    return from_series(JetSeries::identity_map(dil.N, n, pol.lt, pol.lx), dil, pol);
}

const JetSeries& Surface::exponent() const {
    if (!exp_exponent) exp_exponent = flow_log(gamma);
    return *exp_exponent;
}

WField gamma_to_w(const Surface& s) {
    // gamma_{e t}(y) = sum e^{|alpha|} t^alpha gamma_alpha(y), so the
    // derivative at e = 1 composed with gamma^{-1} is the t-Euler operator of
    // gamma evaluated at gamma^{-1}
    JetSeries euler = s.gamma.euler_t();
    JetSeries inv = s.gamma.invert_map();
    return WField{euler.compose_x(inv)};
}

Surface w_to_gamma(const WField& w, const DilationSpec& dil, const TruncationPolicy& pol) {
    MultiIndex zero(static_cast<std::size_t>(w.W.nt()));
    if (!w.W.coeff(zero).is_zero())
        throw std::invalid_argument("w_to_gamma: W(0,.) != 0");
    int n = w.W.nx();
    JetSeries gamma = JetSeries::identity_map(w.W.nt(), n, pol.lt, pol.lx);
    JetSeries ww = w.W.retruncated(pol.lt, pol.lx);
    // gamma_alpha = (1/|alpha|) <t^alpha> W(t, gamma(t,x)): triangular in |alpha|
    for (int m = 1; m <= pol.lt; ++m) {
        JetSeries c = ww.compose_x(gamma);
        for (const auto& [a, p] : c.terms()) {
            if (a.order() != m) continue;
            gamma.add_coeff(a, p.scaled(Rat(1, m)));
        }
        if (c.x_saturated()) gamma.mark_saturated();
    }
    return Surface::from_series(std::move(gamma), dil, pol);
}

std::vector<double> w_flow_numeric(const JetSeries& w, const std::vector<double>& t,
                                   const std::vector<double>& x, int steps) {
    // d omega/d eps = sum_beta eps^{|beta|-1} t^beta W_beta(omega): polynomial
    // in eps, no singularity at 0
    std::size_t n = x.size();
    std::vector<double> y = x;
    struct Term {
        double tmono;
        int order;
        const PolyVec* p;
    };
    std::vector<Term> terms;
    for (const auto& [a, p] : w.terms()) {
        if (a.is_zero()) continue;
        double tm = 1.0;
        for (int j = 0; j < w.nt(); ++j)
            for (int k = 0; k < a[j]; ++k) tm *= t[static_cast<std::size_t>(j)];
        if (tm != 0.0) terms.push_back({tm, a.order(), &p});
    }
    auto rhs = [&](double eps, const std::vector<double>& p, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (const auto& term : terms) {
            double w_eps = term.tmono;
            for (int k = 0; k < term.order - 1; ++k) w_eps *= eps;
            std::vector<double> v = term.p->eval_d(p);
            for (std::size_t i = 0; i < n; ++i) out[i] += w_eps * v[i];
        }
    };
    double h = 1.0 / steps;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (int s = 0; s < steps; ++s) {
        double eps = s * h;
        rhs(eps, y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(eps + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(eps + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        rhs(eps + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return y;
}

std::map<MultiIndex, PolyVec> extract_exp_fields(const Surface& s) {
    std::map<MultiIndex, PolyVec> out;
    for (const auto& [alpha, p] : s.exponent().terms()) out.emplace(alpha, p);
    return out;
}

PurePartition partition_pure(const std::map<MultiIndex, PolyVec>& fields,
                             const DilationSpec& dil, int lt, int n) {
    PurePartition out;
    for (const auto& alpha : enumerate_multiindices(static_cast<std::size_t>(dil.N), lt)) {
        if (alpha.is_zero()) continue;
        PowerKind kind = classify_power(alpha, dil);
        if (kind.cls == PowerClass::Zero) continue;
        auto it = fields.find(alpha);
        PolyVec x = (it != fields.end()) ? it->second : PolyVec(n, n);
        PartitionEntry entry{alpha, WeightedField(std::move(x), deg(alpha, dil)),
                             it == fields.end() || it->second.is_zero()};
        if (kind.cls == PowerClass::Pure)
            out.pure.push_back(std::move(entry));
        else
            out.non_pure.push_back(std::move(entry));
    }
    return out;
}

Surface invert_surface(const Surface& s) {
    const JetSeries& v = s.exponent();
    std::map<MultiIndex, PolyVec> neg;
    for (const auto& [alpha, p] : v.terms()) neg.emplace(alpha, p.scaled(-1));
    return Surface::from_exp(neg, s.dil, s.pol, s.n);
}

Surface compose_surfaces(const Surface& a, const Surface& b) {
    if (a.n != b.n) throw std::invalid_argument("compose_surfaces: ambient dimension mismatch");
    int N = a.dil.N + b.dil.N;
    int nu = a.dil.nu + b.dil.nu;
    std::vector<MultiIndex> e;
    e.reserve(static_cast<std::size_t>(N));
    for (const auto& ej : a.dil.e) {
        MultiIndex m(static_cast<std::size_t>(nu));
        for (int mu = 0; mu < a.dil.nu; ++mu) m[mu] = ej[mu];
        e.push_back(std::move(m));
    }
    for (const auto& ej : b.dil.e) {
        MultiIndex m(static_cast<std::size_t>(nu));
        for (int mu = 0; mu < b.dil.nu; ++mu) m[a.dil.nu + mu] = ej[mu];
        e.push_back(std::move(m));
    }
    DilationSpec dil(N, nu, std::move(e));
    TruncationPolicy pol = a.pol;
    pol.lt = std::min(a.pol.lt, b.pol.lt);
    pol.lx = std::min(a.pol.lx, b.pol.lx);

    // embed the exponents into the concatenated t-space
    std::vector<int> ta(static_cast<std::size_t>(a.dil.N));
    std::vector<Rat> sa(static_cast<std::size_t>(a.dil.N), Rat(1));
    for (int j = 0; j < a.dil.N; ++j) ta[static_cast<std::size_t>(j)] = j;
    std::vector<int> tb(static_cast<std::size_t>(b.dil.N));
    std::vector<Rat> sb(static_cast<std::size_t>(b.dil.N), Rat(1));
    for (int j = 0; j < b.dil.N; ++j) tb[static_cast<std::size_t>(j)] = a.dil.N + j;

    JetSeries va = a.exponent().retruncated(pol.lt, pol.lx).subst_t(ta, sa, N);
    JetSeries vb = b.exponent().retruncated(pol.lt, pol.lx).subst_t(tb, sb, N);

    JetSeries z = bch_log(va, vb, std::min(pol.lt, 4));
    std::map<MultiIndex, PolyVec> fields;
    for (const auto& [alpha, p] : z.terms()) fields.emplace(alpha, p);
    return Surface::from_exp(fields, dil, pol, a.n);
}

std::string condition_str(ConditionId c) {
    switch (c) {
        case ConditionId::I: return "I";
        case ConditionId::IIF: return "II.F";
        case ConditionId::IIA: return "II.A";
        case ConditionId::IIIF: return "III.F";
        default: return "III.A";
    }
}

namespace {

/// Shared verdict logic for the algebraic conditions (II.A) and (III.A): every
/// non-pure (X_alpha, deg alpha) controlled by L(P).
ConditionVerdict check_algebraic(const Surface& s, ConditionId which,
                                 const std::map<MultiIndex, PolyVec>& fields,
                                 const ConditionOptions& opt) {
    ConditionVerdict v;
    v.cond = which;
    v.pol = s.pol;
    v.closure_cutoff = opt.closure_cutoff;

    PurePartition part = partition_pure(fields, s.dil, s.pol.lt, s.n);
    if (part.non_pure.empty()) {
        v.status = Status::Proved;
        v.detail = "no non-pure powers at this truncation: condition holds vacuously";
        return v;
    }

    std::vector<WeightedField> seeds;
    for (const auto& p : part.pure)
        if (!p.is_zero) seeds.push_back(p.field);

    std::vector<WeightedField> closure_fields;
    if (!seeds.empty()) {
        ClosureSet closure = lie_closure(seeds, opt.closure_cutoff, ClosureFlavor::Full, s.pol.lx);
        v.saturated = closure.x_saturated;
        for (const auto& e : closure.elems) closure_fields.push_back(e.wf);
    }

    bool all_proved = true;
    bool any_refuted = false;
    for (const auto& entry : part.non_pure) {
        if (entry.is_zero) {
            ControlCertificate c;
            c.status = Status::Proved;
            c.note = "zero field";
            v.certs.emplace_back("X_" + entry.alpha.str(), std::move(c));
            continue;
        }
        ControlCertificate c = control_check(entry.field, closure_fields, opt.control);
        if (c.status == Status::Refuted) any_refuted = true;
        if (c.status != Status::Proved) all_proved = false;
        v.certs.emplace_back("X_" + entry.alpha.str(), std::move(c));
    }
    if (any_refuted) {
        v.status = Status::Refuted;
        v.detail = "some non-pure field escapes L(P) control (witness attached)";
    } else if (all_proved) {
        v.status = Status::Proved;
        v.detail = "every non-pure field exactly controlled by L(P)";
    } else {
        v.status = Status::Unknown;
        v.detail = "undecided at cutoff " + std::to_string(opt.closure_cutoff);
    }
    return v;
}

/// Constructive finite-type check: a seed set F is extended through its
/// left-normed closure by finite generation; Proved needs every pair bracket of
/// the extended list exactly controlled by the list and the list to control W
/// through the preparation route.
ConditionVerdict check_finite_type(const Surface& s, ConditionId which,
                                   const std::vector<WeightedField>& f_seeds,
                                   const JetSeries& w, const ConditionOptions& opt) {
    ConditionVerdict v;
    v.cond = which;
    v.pol = s.pol;
    v.closure_cutoff = opt.closure_cutoff;

    if (f_seeds.empty()) {
        // W must then vanish for the condition to make sense
        if (w.is_zero()) {
            v.status = Status::Proved;
            v.detail = "W = 0";
        } else {
            v.status = Status::Unknown;
            v.detail = "no seed fields at this truncation";
        }
        return v;
    }

    ClosureSet l0 = lie_closure(f_seeds, opt.closure_cutoff, ClosureFlavor::LeftNormed, s.pol.lx);
    v.saturated = l0.x_saturated;

    std::vector<std::pair<PolyVec, MultiIndex>> closure_pairs;
    for (const auto& e : l0.elems) closure_pairs.emplace_back(e.wf.X, e.wf.d);
    GenerateResult gen = finite_generate(closure_pairs, s.pol.lx);

    std::vector<WeightedField> list;
    for (int k : gen.kept) list.push_back(l0.elems[static_cast<std::size_t>(k)].wf);

    bool ok = true;
    // brackets of the list controlled by the list
    for (std::size_t i = 0; i < list.size() && ok; ++i) {
        for (std::size_t j = 0; j < list.size(); ++j) {
            if (i == j) continue;
            bool sat = false;
            WeightedField br = lie_bracket(list[i], list[j], s.pol.lx, &sat);
            if (sat) v.saturated = true;
            if (br.X.is_zero()) continue;
            if (br.d.order() > opt.closure_cutoff) continue;
            ControlCertificate c = control_check(br, list, opt.control);
            std::string label = "bracket(" + std::to_string(i) + "," + std::to_string(j) + ")";
            if (c.status != Status::Proved) ok = false;
            v.certs.emplace_back(label, std::move(c));
            if (!ok) break;
        }
    }
    // the list controls W via preparation
    if (ok) {
        WControlResult wc = control_check_w(w, s.dil, list, opt.control);
        v.certs.emplace_back("W", wc.cert);
        if (wc.cert.status != Status::Proved) ok = false;
    }
    if (ok) {
        v.status = Status::Proved;
        v.detail = "finite list of " + std::to_string(list.size()) +
                   " fields generates and controls W";
    } else {
        v.status = Status::Unknown;
        v.detail = "finite-type certificate incomplete at cutoff " +
                   std::to_string(opt.closure_cutoff);
    }
    return v;
}

}  // namespace

ConditionVerdict check_condition(const Surface& s, ConditionId which,
                                 const ConditionOptions& opt) {
    WField w = gamma_to_w(s);
    switch (which) {
        case ConditionId::IIIA:
            return check_algebraic(s, which, extract_exp_fields(s), opt);
        case ConditionId::IIA: {
            std::map<MultiIndex, PolyVec> taylor;
            for (const auto& [a, p] : w.taylor()) taylor.emplace(a, p);
            return check_algebraic(s, which, taylor, opt);
        }
        case ConditionId::IIF: {
            // F = prepared Taylor coefficients of W: controls W by construction
            PrepResult prep = taylor_prepare(w.W);
            std::vector<WeightedField> seeds;
            for (const auto& term : prep.terms)
                seeds.emplace_back(term.f_alpha, deg(term.alpha, s.dil));
            return check_finite_type(s, which, seeds, w.W, opt);
        }
        case ConditionId::IIIF: {
            PrepResult prep = taylor_prepare(w.W);
            std::vector<WeightedField> seeds;
            for (const auto& term : prep.terms)
                seeds.emplace_back(term.f_alpha, deg(term.alpha, s.dil));
            ConditionVerdict v = check_finite_type(s, which, seeds, w.W, opt);
            // bridge to the exponential fields through the degree-slice spans
            if (v.status == Status::Proved) {
                SpanEqualityReport rep = span_equality_check(s, opt.closure_cutoff);
                if (!rep.equal) {
                    v.status = Status::Unknown;
                    v.detail += "; span bridge to the exponential fields failed";
                }
            }
            return v;
        }
        case ConditionId::I: {
            // F restricted to pure powers of the W Taylor expansion
            std::map<MultiIndex, PolyVec> taylor;
            for (const auto& [a, p] : w.taylor()) taylor.emplace(a, p);
            PurePartition part = partition_pure(taylor, s.dil, s.pol.lt, s.n);
            std::vector<WeightedField> seeds;
            for (const auto& p : part.pure)
                if (!p.is_zero) seeds.push_back(p.field);
            ConditionVerdict v = check_finite_type(s, which, seeds, w.W, opt);
            // a pointwise witness against the full pure closure refutes (I)
            if (v.status == Status::Unknown) {
                ConditionVerdict alg = check_algebraic(s, ConditionId::IIA, taylor, opt);
                if (alg.status == Status::Refuted) {
                    v.status = Status::Refuted;
                    v.detail = "non-pure Taylor field escapes the pure-power closure";
                    for (auto& c : alg.certs) v.certs.push_back(std::move(c));
                }
            }
            return v;
        }
    }
    throw std::logic_error("check_condition: unreachable");
}

SpanEqualityReport span_equality_check(const Surface& s, int cutoff) {
    SpanEqualityReport rep;

    auto build = [&](const std::map<MultiIndex, PolyVec>& fields) {
        std::vector<WeightedField> seeds;
        for (const auto& [alpha, p] : fields) {
            if (alpha.is_zero() || p.is_zero()) continue;
            MultiIndex d = deg(alpha, s.dil);
            if (d.is_zero() || d.order() > cutoff) continue;
            seeds.emplace_back(p, d);
        }
        if (seeds.empty()) return ClosureSet{};
        return lie_closure(seeds, cutoff, ClosureFlavor::Full, s.pol.lx);
    };

    ClosureSet ca = build(extract_exp_fields(s));
    WField w = gamma_to_w(s);
    std::map<MultiIndex, PolyVec> taylor;
    for (const auto& [a, p] : w.taylor()) taylor.emplace(a, p);
    ClosureSet cb = build(taylor);

    auto monomials = enumerate_multiindices(static_cast<std::size_t>(s.n), s.pol.lx);
    for (const auto& d0 : enumerate_multiindices(static_cast<std::size_t>(s.dil.nu), cutoff)) {
        if (d0.is_zero()) continue;
        auto slice_a = ca.degree_slice(d0);
        auto slice_b = cb.degree_slice(d0);
        if (slice_a.empty() && slice_b.empty()) continue;
        ++rep.degrees_checked;

        std::vector<std::vector<Rat>> va, vb;
        for (int i : slice_a)
            va.push_back(field_coeff_vector(ca.elems[static_cast<std::size_t>(i)].wf.X, monomials));
        for (int i : slice_b)
            vb.push_back(field_coeff_vector(cb.elems[static_cast<std::size_t>(i)].wf.X, monomials));

        int ra = rational_rank(va);
        int rb = rational_rank(vb);
        std::vector<std::vector<Rat>> both = va;
        both.insert(both.end(), vb.begin(), vb.end());
        int rboth = rational_rank(both);
        if (!(ra == rb && rb == rboth)) {
            rep.equal = false;
            rep.failures.push_back("degree " + d0.str() + ": ranks " + std::to_string(ra) + "/" +
                                   std::to_string(rb) + "/" + std::to_string(rboth));
        }
    }
    return rep;
}

}  // namespace radon

#include "radon/jet.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace radon {

JetSeries JetSeries::identity_map(int nt, int nx, int lt, int lx) {
    JetSeries j(nt, nx, nx, lt, lx);
    j.terms_[MultiIndex(static_cast<std::size_t>(nt))] = PolyVec::identity(nx);
    return j;
}

JetSeries JetSeries::term(int nt, const MultiIndex& alpha, const PolyVec& p, int lt, int lx) {
    JetSeries j(nt, p.nvars(), p.arity(), lt, lx);
    if (alpha.order() <= lt) {
        bool sat = false;
        PolyVec q = p.truncated(lx, &sat);
        if (sat) j.x_saturated_ = true;
        if (!q.is_zero()) j.terms_[alpha] = std::move(q);
    }
    return j;
}

PolyVec JetSeries::coeff(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    if (it != terms_.end()) return it->second;
    return PolyVec(arity_, nx_);
}

void JetSeries::set_coeff(const MultiIndex& alpha, const PolyVec& p) {
    if (static_cast<int>(alpha.size()) != nt_) throw std::invalid_argument("jet: t-index size mismatch");
    if (alpha.order() > lt_) return;
    bool sat = false;
    PolyVec q = p.truncated(lx_, &sat);
    if (sat) x_saturated_ = true;
    if (q.is_zero())
        terms_.erase(alpha);
    else
        terms_[alpha] = std::move(q);
}

void JetSeries::add_coeff(const MultiIndex& alpha, const PolyVec& p) {
    set_coeff(alpha, coeff(alpha) + p);
}

JetSeries JetSeries::component(int i) const {
    JetSeries out(nt_, nx_, 1, lt_, lx_);
    out.x_saturated_ = x_saturated_;
    for (const auto& [a, p] : terms_) {
        if (p.comp[i].is_zero()) continue;
        out.terms_[a] = PolyVec({p.comp[i]});
    }
    return out;
}

void JetSeries::require_compatible(const JetSeries& o) const {
    if (nt_ != o.nt_ || nx_ != o.nx_ || lt_ != o.lt_ || lx_ != o.lx_)
        throw std::invalid_argument("jet: incompatible shapes or truncation orders");
}

JetSeries JetSeries::operator+(const JetSeries& o) const {
    require_compatible(o);
    if (arity_ != o.arity_) throw std::invalid_argument("jet: arity mismatch");
    JetSeries r(*this);
    r.x_saturated_ = x_saturated_ || o.x_saturated_;
    for (const auto& [a, p] : o.terms_) r.add_coeff(a, p);
    return r;
}

JetSeries JetSeries::operator-(const JetSeries& o) const { return *this + (-o); }

JetSeries JetSeries::operator-() const {
    JetSeries r(*this);
    for (auto& [a, p] : r.terms_) p = p.scaled(-1);
    return r;
}

JetSeries JetSeries::scaled(const Rat& c) const {
    JetSeries r(nt_, nx_, arity_, lt_, lx_);
    r.x_saturated_ = x_saturated_;
    if (radon::is_zero(c)) return r;
    for (const auto& [a, p] : terms_) r.terms_[a] = p.scaled(c);
    return r;
}

JetSeries JetSeries::mul(const JetSeries& o) const {
    require_compatible(o);
    const JetSeries* s = this;
    const JetSeries* v = &o;
    if (s->arity_ != 1) std::swap(s, v);
    if (s->arity_ != 1) throw std::invalid_argument("jet mul: need a scalar factor");
    JetSeries r(nt_, nx_, v->arity_, lt_, lx_);
    r.x_saturated_ = x_saturated_ || o.x_saturated_;
    bool sat = false;
    for (const auto& [a, p] : s->terms_) {
        for (const auto& [b, q] : v->terms_) {
            MultiIndex ab = a + b;
            if (ab.order() > lt_) continue;
            PolyVec pq(v->arity_, nx_);
            for (int i = 0; i < v->arity_; ++i) pq.comp[i] = p.comp[0].mul(q.comp[i], lx_, &sat);
            r.add_coeff(ab, pq);
        }
    }
    if (sat) r.x_saturated_ = true;
    return r;
}

JetSeries JetSeries::t_mul(const MultiIndex& beta) const {
    JetSeries r(nt_, nx_, arity_, lt_, lx_);
    r.x_saturated_ = x_saturated_;
    for (const auto& [a, p] : terms_) {
        MultiIndex ab = a + beta;
        if (ab.order() > lt_) continue;
        r.terms_[ab] = p;
    }
    return r;
}

JetSeries JetSeries::t_derivative(int j) const {
    JetSeries r(nt_, nx_, arity_, lt_, lx_);
    r.x_saturated_ = x_saturated_;
    for (const auto& [a, p] : terms_) {
        if (a[j] == 0) continue;
        MultiIndex b = a;
        b[j] -= 1;
        r.add_coeff(b, p.scaled(a[j]));
    }
    return r;
}

JetSeries JetSeries::x_derivative(int i) const {
    JetSeries r(nt_, nx_, arity_, lt_, lx_);
    r.x_saturated_ = x_saturated_;
    for (const auto& [a, p] : terms_) {
        PolyVec d(arity_, nx_);
        for (int k = 0; k < arity_; ++k) d.comp[k] = p.comp[k].derivative(i);
        if (!d.is_zero()) r.terms_[a] = std::move(d);
    }
    return r;
}

JetSeries JetSeries::euler_t() const {
    JetSeries r(nt_, nx_, arity_, lt_, lx_);
    r.x_saturated_ = x_saturated_;
    for (const auto& [a, p] : terms_) {
        int m = a.order();
        if (m == 0) continue;
        r.terms_[a] = p.scaled(m);
    }
    return r;
}

JetSeries JetSeries::compose_x(const JetSeries& G) const {
    if (G.nt_ != nt_ || G.nx_ != nx_ || G.lt_ != lt_ || G.lx_ != lx_)
        throw std::invalid_argument("compose_x: incompatible jets");
    if (G.arity_ != nx_) throw std::invalid_argument("compose_x: G must be a map with arity nx");
    // components of G as scalar jets
    std::vector<JetSeries> g;
    g.reserve(nx_);
    for (int i = 0; i < nx_; ++i) g.push_back(G.component(i));

    JetSeries result(nt_, nx_, arity_, lt_, lx_);
    result.x_saturated_ = x_saturated_ || G.x_saturated_;

    // cache powers of each component: pw[i][k] = g_i^k
    std::vector<std::vector<JetSeries>> pw(static_cast<std::size_t>(nx_));
    auto power = [&](int i, int k) -> const JetSeries& {
        auto& v = pw[static_cast<std::size_t>(i)];
        if (v.empty()) {
            JetSeries one(nt_, nx_, 1, lt_, lx_);
            one.set_coeff(MultiIndex(static_cast<std::size_t>(nt_)),
                          PolyVec({Poly::constant(nx_, 1)}));
            v.push_back(one);
        }
        while (static_cast<int>(v.size()) <= k) v.push_back(v.back().mul(g[static_cast<std::size_t>(i)]));
        return v[static_cast<std::size_t>(k)];
    };

    for (const auto& [a, p] : terms_) {
        for (int c = 0; c < arity_; ++c) {
            for (const auto& [m, coeffr] : p.comp[c].terms()) {
                // term coeffr * x^m evaluated at G
                JetSeries t(nt_, nx_, 1, lt_, lx_);
                t.set_coeff(MultiIndex(static_cast<std::size_t>(nt_)),
                            PolyVec({Poly::constant(nx_, coeffr)}));
                for (int i = 0; i < nx_; ++i)
                    if (m[i]) t = t.mul(power(i, m[i]));
                // multiply by t^a and add into component c
                JetSeries shifted = t.t_mul(a);
                for (const auto& [b, q] : shifted.terms()) {
                    PolyVec add(arity_, nx_);
                    add.comp[c] = q.comp[0];
                    result.add_coeff(b, add);
                }
                if (shifted.x_saturated()) result.x_saturated_ = true;
            }
        }
    }
    return result;
}

JetSeries JetSeries::invert_map() const {
    if (arity_ != nx_) throw std::invalid_argument("invert_map: not a map jet");
    MultiIndex zero(static_cast<std::size_t>(nt_));
    if (!(coeff(zero) == PolyVec::identity(nx_)))
        throw std::invalid_argument("invert_map: gamma_0 != id");

    JetSeries eta = JetSeries::identity_map(nt_, nx_, lt_, lx_);
    // nonconstant part of gamma
    JetSeries rest = *this;
    rest.set_coeff(zero, PolyVec(nx_, nx_));

    for (int m = 1; m <= lt_; ++m) {
        // R = sum_{|beta|>=1} t^beta gamma_beta(eta); order-m coefficients depend
        // only on eta's orders < m
        JetSeries R = rest.compose_x(eta);
        for (const auto& [a, p] : R.terms()) {
            if (a.order() != m) continue;
            eta.add_coeff(a, p.scaled(-1));
        }
        if (R.x_saturated()) eta.x_saturated_ = true;
    }
    return eta;
}

JetSeries JetSeries::subst_t(const std::vector<int>& target, const std::vector<Rat>& scale,
                             int new_nt) const {
    if (static_cast<int>(target.size()) != nt_ || static_cast<int>(scale.size()) != nt_)
        throw std::invalid_argument("subst_t: need one (target, scale) per t-variable");
    JetSeries r(new_nt, nx_, arity_, lt_, lx_);
    r.x_saturated_ = x_saturated_;
    for (const auto& [a, p] : terms_) {
        MultiIndex b(static_cast<std::size_t>(new_nt));
        Rat factor = 1;
        for (int j = 0; j < nt_; ++j) {
            if (a[j] == 0) continue;
            b[target[j]] += a[j];
            factor *= rat_pow(scale[j], a[j]);
        }
        if (b.order() > lt_) continue;
        if (radon::is_zero(factor)) continue;
        r.add_coeff(b, p.scaled(factor));
    }
    return r;
}

JetSeries JetSeries::retruncated(int lt, int lx) const {
    JetSeries r(nt_, nx_, arity_, lt, lx);
    r.x_saturated_ = x_saturated_;
    for (const auto& [a, p] : terms_) {
        if (a.order() > lt) continue;
        bool sat = false;
        PolyVec q = p.truncated(lx, &sat);
        if (sat) r.x_saturated_ = true;
        if (!q.is_zero()) r.terms_[a] = std::move(q);
    }
    return r;
}

std::vector<double> JetSeries::eval_d(const std::vector<double>& t,
                                      const std::vector<double>& x) const {
    std::vector<double> out(static_cast<std::size_t>(arity_), 0.0);
    for (const auto& [a, p] : terms_) {
        double tm = 1.0;
        for (int j = 0; j < nt_; ++j)
            for (int k = 0; k < a[j]; ++k) tm *= t[j];
        if (tm == 0.0) continue;
        for (int c = 0; c < arity_; ++c) out[c] += tm * p.comp[c].eval_d(x);
    }
    return out;
}

std::string JetSeries::str(const std::vector<std::string>& t_names,
                           const std::vector<std::string>& x_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [a, p] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::string mono;
        for (int j = 0; j < nt_; ++j) {
            if (a[j] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += (static_cast<std::size_t>(j) < t_names.size()) ? t_names[j]
                                                                   : "t" + std::to_string(j + 1);
            if (a[j] > 1) mono += "^" + std::to_string(a[j]);
        }
        if (mono.empty())
            os << p.str(x_names);
        else
            os << mono << "*" << p.str(x_names);
    }
    return os.str();
}

JetSeries apply_field(const JetSeries& V, const JetSeries& F) {
    if (V.arity() != F.nx()) throw std::invalid_argument("apply_field: V must have arity nx");
    JetSeries out = JetSeries::zero(F.nt(), F.nx(), F.arity(), F.lt(), F.lx());
    for (int i = 0; i < F.nx(); ++i) {
        JetSeries vi = V.component(i);
        if (vi.is_zero()) continue;
        out = out + vi.mul(F.x_derivative(i));
    }
    return out;
}

JetSeries flow_exp(const JetSeries& V) {
    MultiIndex zero(static_cast<std::size_t>(V.nt()));
    if (!V.coeff(zero).is_zero())
        throw std::invalid_argument("flow_exp: field must vanish at t = 0");
    JetSeries acc = JetSeries::identity_map(V.nt(), V.nx(), V.lt(), V.lx());
    JetSeries term = acc;
    for (int k = 1; k <= V.lt(); ++k) {
        term = apply_field(V, term).scaled(Rat(1, k));
        if (term.is_zero()) break;
        acc = acc + term;
    }
    return acc;
}

JetSeries flow_log(const JetSeries& gamma) {
    MultiIndex zero(static_cast<std::size_t>(gamma.nt()));
    if (!(gamma.coeff(zero) == PolyVec::identity(gamma.nx())))
        throw std::invalid_argument("flow_log: gamma_0 != id");
    JetSeries V = JetSeries::zero(gamma.nt(), gamma.nx(), gamma.nx(), gamma.lt(), gamma.lx());
    for (int m = 1; m <= gamma.lt(); ++m) {
        JetSeries R = gamma - flow_exp(V);
        for (const auto& [a, p] : R.terms()) {
            if (a.order() != m) continue;
            V.add_coeff(a, p);
        }
        if (R.x_saturated()) V.mark_saturated();
    }
    return V;
}

}  // namespace radon

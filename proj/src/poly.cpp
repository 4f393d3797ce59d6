#include "radon/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace radon {

std::vector<MultiIndex> enumerate_multiindices(std::size_t k, int max_order) {
    std::vector<MultiIndex> out;
    MultiIndex cur(k);
    // graded enumeration by recursion on positions
    auto rec = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == k) {
            for (int v = 0; v <= remaining; ++v) {
                cur[pos] = v;
                out.push_back(cur);
            }
            cur[pos] = 0;
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[pos] = v;
            self(self, pos + 1, remaining - v);
        }
        cur[pos] = 0;
    };
    if (k == 0) {
        out.push_back(MultiIndex{});
        return out;
    }
    rec(rec, 0, max_order);
    return out;
}

Poly Poly::constant(int nvars, const Rat& c) {
    Poly p(nvars);
    if (!radon::is_zero(c)) p.terms_[MultiIndex(static_cast<std::size_t>(nvars))] = c;
    return p;
}

Poly Poly::variable(int nvars, int i) {
    Poly p(nvars);
    p.terms_[MultiIndex::unit(static_cast<std::size_t>(nvars), static_cast<std::size_t>(i))] = 1;
    return p;
}

Poly Poly::monomial(int nvars, const MultiIndex& m, const Rat& c) {
    if (static_cast<int>(m.size()) != nvars) throw std::invalid_argument("monomial arity mismatch");
    Poly p(nvars);
    if (!radon::is_zero(c)) p.terms_[m] = c;
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first.is_zero();
}

Rat Poly::constant_term() const { return coeff(MultiIndex(static_cast<std::size_t>(nvars_))); }

int Poly::total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.order());
    return d;
}

Rat Poly::coeff(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

void Poly::set_coeff(const MultiIndex& m, const Rat& c) {
    if (radon::is_zero(c))
        terms_.erase(m);
    else
        terms_[m] = c;
}

void Poly::add_term(const MultiIndex& m, const Rat& c) {
    if (radon::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (radon::is_zero(it->second)) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly arity mismatch");
    Poly r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
}

Poly Poly::scaled(const Rat& c) const {
    Poly r(nvars_);
    if (radon::is_zero(c)) return r;
    for (const auto& [m, k] : terms_) r.terms_[m] = k * c;
    return r;
}

Poly Poly::mul(const Poly& o, int lx, bool* saturated) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly arity mismatch");
    Poly r(nvars_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            MultiIndex m = ma + mb;
            if (m.order() > lx) {
                if (saturated) *saturated = true;
                continue;
            }
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Poly Poly::mul_exact(const Poly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly arity mismatch");
    Poly r(nvars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(ma + mb, ca * cb);
    return r;
}

Poly Poly::truncated(int lx, bool* saturated) const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
        if (m.order() > lx) {
            if (saturated) *saturated = true;
            continue;
        }
        r.terms_[m] = c;
    }
    return r;
}

Poly Poly::derivative(int var) const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        MultiIndex d = m;
        d[var] -= 1;
        r.add_term(d, c * m[var]);
    }
    return r;
}

Rat Poly::eval(const std::vector<Rat>& x) const {
    if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("eval arity mismatch");
    Rat out = 0;
    for (const auto& [m, c] : terms_) {
        Rat t = c;
        for (int i = 0; i < nvars_; ++i)
            if (m[i]) t *= rat_pow(x[i], m[i]);
        out += t;
    }
    return out;
}

double Poly::eval_d(const std::vector<double>& x) const {
    double out = 0;
    for (const auto& [m, c] : terms_) {
        double t = to_double(c);
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < m[i]; ++k) t *= x[i];
        out += t;
    }
    return out;
}

Poly Poly::subst_exact(const std::vector<Poly>& args) const {
    if (static_cast<int>(args.size()) != nvars_) throw std::invalid_argument("subst arity mismatch");
    int out_vars = args.empty() ? 0 : args[0].nvars();
    Poly r(out_vars);
    for (const auto& [m, c] : terms_) {
        Poly t = Poly::constant(out_vars, c);
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < m[i]; ++k) t = t.mul_exact(args[i]);
        r = r + t;
    }
    return r;
}

std::string Poly::str(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat a = c;
        if (first) {
            if (sgn(a) < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (sgn(a) < 0 ? " - " : " + ");
            if (sgn(a) < 0) a = -a;
        }
        first = false;
        bool has_vars = !m.is_zero();
        if (!has_vars || a != 1) os << a.get_str();
        bool printed = !has_vars || a != 1;
        for (int i = 0; i < nvars_; ++i) {
            if (m[i] == 0) continue;
            if (printed) os << "*";
            if (static_cast<std::size_t>(i) < var_names.size())
                os << var_names[i];
            else
                os << "x" << (i + 1);
            if (m[i] > 1) os << "^" << m[i];
            printed = true;
        }
    }
    return os.str();
}

bool PolyVec::is_zero() const {
    for (const auto& p : comp)
        if (!p.is_zero()) return false;
    return true;
}

int PolyVec::total_degree() const {
    int d = -1;
    for (const auto& p : comp) d = std::max(d, p.total_degree());
    return d;
}

PolyVec PolyVec::operator+(const PolyVec& o) const {
    if (comp.size() != o.comp.size()) throw std::invalid_argument("polyvec arity mismatch");
    PolyVec r(*this);
    for (std::size_t i = 0; i < comp.size(); ++i) r.comp[i] = comp[i] + o.comp[i];
    return r;
}

PolyVec PolyVec::operator-(const PolyVec& o) const {
    if (comp.size() != o.comp.size()) throw std::invalid_argument("polyvec arity mismatch");
    PolyVec r(*this);
    for (std::size_t i = 0; i < comp.size(); ++i) r.comp[i] = comp[i] - o.comp[i];
    return r;
}

PolyVec PolyVec::scaled(const Rat& c) const {
    PolyVec r(*this);
    for (auto& p : r.comp) p = p.scaled(c);
    return r;
}

PolyVec PolyVec::truncated(int lx, bool* saturated) const {
    PolyVec r(*this);
    for (auto& p : r.comp) p = p.truncated(lx, saturated);
    return r;
}

std::vector<Rat> PolyVec::eval(const std::vector<Rat>& x) const {
    std::vector<Rat> out;
    out.reserve(comp.size());
    for (const auto& p : comp) out.push_back(p.eval(x));
    return out;
}

std::vector<double> PolyVec::eval_d(const std::vector<double>& x) const {
    std::vector<double> out;
    out.reserve(comp.size());
    for (const auto& p : comp) out.push_back(p.eval_d(x));
    return out;
}

PolyVec PolyVec::identity(int n) {
    PolyVec v;
    v.comp.reserve(n);
    for (int i = 0; i < n; ++i) v.comp.push_back(Poly::variable(n, i));
    return v;
}

std::string PolyVec::str(const std::vector<std::string>& var_names) const {
    std::string s = "(";
    for (std::size_t i = 0; i < comp.size(); ++i) {
        if (i) s += ", ";
        s += comp[i].str(var_names);
    }
    s += ")";
    return s;
}

}  // namespace radon

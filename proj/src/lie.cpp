#include "radon/lie.hpp"

#include <deque>
#include <map>
#include <stdexcept>
#include <string>

#include "radon/linalg.hpp"

namespace radon {

std::vector<int> ClosureSet::degree_slice(const MultiIndex& d0) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (elems[i].wf.d == d0) out.push_back(static_cast<int>(i));
    return out;
}

ClosureSet lie_closure(const std::vector<WeightedField>& seeds, int cutoff,
                       ClosureFlavor flavor, int lx) {
    ClosureSet cs;
    cs.cutoff = cutoff;
    cs.flavor = flavor;
    cs.n_seeds = static_cast<int>(seeds.size());

    std::map<std::string, int> seen;
    auto key = [](const WeightedField& w) { return w.d.str() + "|" + w.X.str(); };

    for (const auto& s : seeds) {
        if (s.d.is_zero()) throw std::invalid_argument("lie_closure: zero formal degree");
        if (s.d.order() > cutoff) throw std::invalid_argument("lie_closure: cutoff below seed degree");
        if (seen.emplace(key(s), static_cast<int>(cs.elems.size())).second)
            cs.elems.push_back({s, -1, -1});
    }
    cs.n_seeds = static_cast<int>(cs.elems.size());

    // worklist over newly added elements; degrees strictly grow, so this stops
    std::deque<int> work;
    for (int i = 0; i < cs.n_seeds; ++i) work.push_back(i);

    auto try_add = [&](const WeightedField& a, const WeightedField& b, int ia, int ib) {
        MultiIndex d = a.d + b.d;
        if (d.order() > cutoff) return;
        bool sat = false;
        PolyVec br = lie_bracket_fields(a.X, b.X, lx, &sat);
        if (sat) cs.x_saturated = true;
        if (br.is_zero()) return;
        WeightedField wf(std::move(br), std::move(d));
        auto [it, inserted] = seen.emplace(key(wf), static_cast<int>(cs.elems.size()));
        if (!inserted) return;
        cs.elems.push_back({std::move(wf), ia, ib});
        work.push_back(static_cast<int>(cs.elems.size()) - 1);
    };

    while (!work.empty()) {
        int i = work.front();
        work.pop_front();
        if (flavor == ClosureFlavor::Full) {
            std::size_t count = cs.elems.size();
            for (std::size_t j = 0; j < count; ++j) {
                int jj = static_cast<int>(j);
                if (jj == i) {
                    continue;  // [X, X] = 0
                }
                try_add(cs.elems[static_cast<std::size_t>(i)].wf, cs.elems[j].wf, i, jj);
                try_add(cs.elems[j].wf, cs.elems[static_cast<std::size_t>(i)].wf, jj, i);
            }
        } else {
            // left-normed: bracket seeds against the new element
            for (int s = 0; s < cs.n_seeds; ++s)
                try_add(cs.elems[static_cast<std::size_t>(s)].wf,
                        cs.elems[static_cast<std::size_t>(i)].wf, s, i);
        }
    }
    return cs;
}

SpanBasis span_at_degree_point(const ClosureSet& c, const MultiIndex& d0,
                               const std::vector<Rat>& x0) {
    SpanBasis sb;
    auto slice = c.degree_slice(d0);
    if (slice.empty()) return sb;
    int n = c.elems[static_cast<std::size_t>(slice[0])].wf.n();
    EchelonBasis eb(n);
    for (int idx : slice) {
        std::vector<Rat> v = c.elems[static_cast<std::size_t>(idx)].wf.X.eval(x0);
        if (eb.insert(std::move(v), idx)) sb.basis_elems.push_back(idx);
    }
    sb.rank = eb.rank();
    return sb;
}

SpanBasis span_at_degree_symbolic(const ClosureSet& c, const MultiIndex& d0, int lx) {
    SpanBasis sb;
    auto slice = c.degree_slice(d0);
    if (slice.empty()) return sb;
    int nx = c.elems[static_cast<std::size_t>(slice[0])].wf.X.nvars();
    auto monomials = enumerate_multiindices(static_cast<std::size_t>(nx), lx);
    int n = c.elems[static_cast<std::size_t>(slice[0])].wf.n();
    EchelonBasis eb(static_cast<int>(monomials.size()) * n);
    for (int idx : slice) {
        auto v = field_coeff_vector(c.elems[static_cast<std::size_t>(idx)].wf.X, monomials);
        if (eb.insert(std::move(v), idx)) sb.basis_elems.push_back(idx);
    }
    sb.rank = eb.rank();
    return sb;
}

HoermanderResult hoermander_check(const std::vector<WeightedField>& seeds,
                                  const std::vector<Rat>& x0, int cutoff, int lx) {
    HoermanderResult r;
    if (seeds.empty()) return r;
    int n = seeds[0].n();
    ClosureSet c = lie_closure(seeds, cutoff, ClosureFlavor::Full, lx);
    EchelonBasis eb(n);
    int id = 0;
    for (const auto& e : c.elems) eb.insert(e.wf.X.eval(x0), id++);
    r.rank = eb.rank();
    r.spans = (r.rank == n);
    return r;
}

namespace {
JetSeries jet_bracket(const JetSeries& a, const JetSeries& b) {
    return apply_field(a, b) - apply_field(b, a);
}
}  // namespace

JetSeries bch_log(const JetSeries& a, const JetSeries& b, int order) {
    if (order < 1) throw std::invalid_argument("bch_log: order must be >= 1");
    if (order > 4) throw std::invalid_argument("bch_log: orders above 4 are not supported");
    MultiIndex zero(static_cast<std::size_t>(a.nt()));
    if (!a.coeff(zero).is_zero() || !b.coeff(zero).is_zero())
        throw std::invalid_argument("bch_log: inputs must vanish at t = 0");

    JetSeries z = a + b;
    if (order >= 2) {
        JetSeries ab = jet_bracket(a, b);
        z = z + ab.scaled(Rat(1, 2));
        if (order >= 3) {
            JetSeries aab = jet_bracket(a, ab);
            JetSeries bba = jet_bracket(b, jet_bracket(b, a));
            z = z + aab.scaled(Rat(1, 12)) + bba.scaled(Rat(1, 12));
            if (order >= 4) {
                JetSeries baab = jet_bracket(b, aab);
                z = z - baab.scaled(Rat(1, 24));
            }
        }
    }
    return z;
}

JetSeries bch_log_fields(const PolyVec& a, const PolyVec& b, int order, int lx) {
    JetSeries ja = JetSeries::term(2, MultiIndex{1, 0}, a, order, lx);
    JetSeries jb = JetSeries::term(2, MultiIndex{0, 1}, b, order, lx);
    return bch_log(ja, jb, order);
}

}  // namespace radon

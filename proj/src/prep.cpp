#include "radon/prep.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace radon {

Rat OrderWeights::value(const MultiIndex& exp) const {
    if (exp.size() != lambda.size()) throw std::invalid_argument("OrderWeights: size mismatch");
    Rat v = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i)
        if (exp[i]) v += lambda[i] * exp[i];
    return v;
}

bool OrderWeights::injective_on(const std::vector<MultiIndex>& domain) const {
    std::vector<Rat> vals;
    vals.reserve(domain.size());
    for (const auto& m : domain) vals.push_back(value(m));
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] == vals[i - 1]) return false;
    return true;
}

OrderWeights draw_order_weights(const std::vector<MultiIndex>& domain, std::uint64_t seed) {
    if (domain.empty()) throw std::invalid_argument("draw_order_weights: empty domain");
    std::size_t nvars = domain[0].size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(1, 64), den(1, 64);
    for (int attempt = 0; attempt < 256; ++attempt) {
        OrderWeights w;
        w.lambda.reserve(nvars);
        for (std::size_t i = 0; i < nvars; ++i) w.lambda.push_back(rat(num(rng), den(rng)));
        if (w.injective_on(domain)) return w;
    }
    throw std::runtime_error("draw_order_weights: no injective draw found");
}

OrderWeights default_order_weights(std::size_t nvars, int max_entry_sum) {
    // lambda_i = 1 + 1/p_i with distinct primes p_i > 2*nvars*max_entry_sum:
    // a vanishing integer combination with entries bounded by max_entry_sum
    // forces every coefficient to zero
    static const int primes[] = {101,  103,  107,  109,  113,  127,  131,  137,  139,  149,
                                 151,  157,  163,  167,  173,  179,  181,  191,  193,  197,
                                 199,  211,  223,  227,  229,  233,  239,  241,  251,  257,
                                 263,  269,  271,  277,  281,  283,  293,  307,  311,  313,
                                 1009, 1013, 1019, 1021, 1031, 1033, 1039, 1049, 1051, 1061};
    int lower = 2 * static_cast<int>(nvars) * std::max(1, max_entry_sum);
    OrderWeights w;
    std::size_t k = 0;
    for (int p : primes) {
        if (p <= lower) continue;
        w.lambda.push_back(Rat(1) + rat(1, p));
        if (++k == nvars) break;
    }
    if (k < nvars) throw std::runtime_error("default_order_weights: prime table exhausted");
    return w;
}

GradedSpace::GradedSpace(int nt, int nx, int arity, int lt, int lx, const OrderWeights& order)
    : nt_(nt), nx_(nx), arity_(arity), lt_(lt), lx_(lx) {
    if (order.lambda.size() != static_cast<std::size_t>(nt + nx))
        throw std::invalid_argument("GradedSpace: order must weight nt + nx variables");
    auto texps = enumerate_multiindices(static_cast<std::size_t>(nt), lt);
    auto xexps = enumerate_multiindices(static_cast<std::size_t>(nx), lx);

    struct Entry {
        Rat l;
        GradedKey key;
    };
    std::vector<Entry> entries;
    entries.reserve(texps.size() * xexps.size() * static_cast<std::size_t>(arity));
    std::vector<Rat> collision_check;
    for (const auto& a : texps) {
        for (const auto& g : xexps) {
            Rat l = 0;
            for (int i = 0; i < nt; ++i)
                if (a[i]) l += order.lambda[static_cast<std::size_t>(i)] * a[i];
            for (int i = 0; i < nx; ++i)
                if (g[i]) l += order.lambda[static_cast<std::size_t>(nt + i)] * g[i];
            collision_check.push_back(l);
            for (int c = 0; c < arity; ++c) entries.push_back({l, GradedKey{a, g, c}});
        }
    }
    std::sort(collision_check.begin(), collision_check.end());
    for (std::size_t i = 1; i < collision_check.size(); ++i)
        if (collision_check[i] == collision_check[i - 1])
            throw OrderCollision("order weights collide on the truncation box; re-draw");

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.l != b.l) return a.l < b.l;
        return a.key.comp < b.key.comp;
    });
    keys_.reserve(entries.size());
    for (auto& e : entries) keys_.push_back(std::move(e.key));
    for (std::size_t i = 0; i < keys_.size(); ++i) index_[keys_[i]] = static_cast<int>(i);
}

int GradedSpace::col(const GradedKey& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) throw std::invalid_argument("GradedSpace: key outside truncation box");
    return it->second;
}

std::vector<Rat> GradedSpace::to_vector(const JetSeries& f) const {
    std::vector<Rat> v(keys_.size(), Rat(0));
    for (const auto& [a, p] : f.terms()) {
        for (int c = 0; c < arity_; ++c) {
            for (const auto& [g, coef] : p.comp[c].terms()) {
                v[static_cast<std::size_t>(col(GradedKey{a, g, c}))] = coef;
            }
        }
    }
    return v;
}

JetSeries GradedSpace::from_vector(const std::vector<Rat>& v) const {
    JetSeries f(nt_, nx_, arity_, lt_, lx_);
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        if (is_zero(v[i])) continue;
        const GradedKey& k = keys_[i];
        PolyVec p = f.coeff(k.texp);
        p.comp[k.comp].add_term(k.xexp, v[i]);
        f.set_coeff(k.texp, p);
    }
    return f;
}

NewtonData newton_diagram(const JetSeries& f, const GradedSpace& space) {
    NewtonData nd;
    std::vector<Rat> v = space.to_vector(f);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!is_zero(v[i])) nd.q.push_back(space.keys()[i]);
    if (!nd.q.empty()) nd.exp_least = nd.q.front();
    return nd;
}

namespace {

/// Multiply g by the monomial t^beta x^gamma if the product stays entirely
/// inside the truncation box; otherwise return nullopt. Keeping only such
/// multiples makes every returned identity exact as polynomials.
std::optional<JetSeries> monomial_multiple(const JetSeries& g, const MultiIndex& beta,
                                           const MultiIndex& gamma) {
    int lt = g.lt(), lx = g.lx();
    JetSeries out(g.nt(), g.nx(), g.arity(), lt, lx);
    for (const auto& [a, p] : g.terms()) {
        MultiIndex ab = a + beta;
        if (ab.order() > lt) return std::nullopt;
        PolyVec q(g.arity(), g.nx());
        for (int c = 0; c < g.arity(); ++c) {
            for (const auto& [m, coef] : p.comp[c].terms()) {
                MultiIndex mg = m + gamma;
                if (mg.order() > lx) return std::nullopt;
                q.comp[c].add_term(mg, coef);
            }
        }
        out.set_coeff(ab, q);
    }
    return out;
}

struct ModuleRows {
    // one entry per inserted multiple: (generator index, t-mult, x-mult)
    std::vector<std::tuple<int, MultiIndex, MultiIndex>> provenance;
};

/// Insert all admissible monomial multiples of generator k into the basis.
void insert_generator_multiples(EchelonBasis& basis, ModuleRows& rows, const GradedSpace& space,
                                const JetSeries& g, int k) {
    if (g.is_zero()) return;
    auto tmults = enumerate_multiindices(static_cast<std::size_t>(space.nt()), space.lt());
    auto xmults = enumerate_multiindices(static_cast<std::size_t>(space.nx()), space.lx());
    for (const auto& b : tmults) {
        for (const auto& gx : xmults) {
            auto mg = monomial_multiple(g, b, gx);
            if (!mg) continue;
            int id = static_cast<int>(rows.provenance.size());
            rows.provenance.emplace_back(k, b, gx);
            basis.insert(space.to_vector(*mg), id);
        }
    }
}

std::vector<JetSeries> combo_to_coeffs(const EchelonBasis::Reduction& red, const ModuleRows& rows,
                                       int ngens, const GradedSpace& space) {
    std::vector<JetSeries> coeffs(
        static_cast<std::size_t>(ngens),
        JetSeries(space.nt(), space.nx(), 1, space.lt(), space.lx()));
    for (const auto& [src, w] : red.combo) {
        const auto& [k, b, gx] = rows.provenance[static_cast<std::size_t>(src)];
        PolyVec p = coeffs[static_cast<std::size_t>(k)].coeff(b);
        p.comp[0].add_term(gx, w);
        coeffs[static_cast<std::size_t>(k)].set_coeff(b, p);
    }
    return coeffs;
}

}  // namespace

DivisionResult galligo_divide(const JetSeries& f, const std::vector<JetSeries>& generators,
                              const OrderWeights& order) {
    GradedSpace space(f.nt(), f.nx(), f.arity(), f.lt(), f.lx(), order);
    EchelonBasis basis(space.ncols());
    ModuleRows rows;
    for (std::size_t k = 0; k < generators.size(); ++k) {
        const JetSeries& g = generators[k];
        if (g.nt() != f.nt() || g.nx() != f.nx() || g.arity() != f.arity() || g.lt() != f.lt() ||
            g.lx() != f.lx())
            throw std::invalid_argument("galligo_divide: generator shape mismatch");
        insert_generator_multiples(basis, rows, space, g, static_cast<int>(k));
    }

    auto red = basis.reduce(space.to_vector(f));
    DivisionResult out;
    out.remainder = space.from_vector(red.remainder);
    out.coeffs = combo_to_coeffs(red, rows, static_cast<int>(generators.size()), space);
    for (int lead : basis.lead_cols()) out.module_el.push_back(space.keys()[static_cast<std::size_t>(lead)]);
    out.x_saturated = f.x_saturated();
    for (const auto& g : generators) out.x_saturated = out.x_saturated || g.x_saturated();
    return out;
}

JetSeries PrepResult::reconstruct(int nt, int nx, int arity, int lt, int lx) const {
    JetSeries acc(nt, nx, arity, lt, lx);
    for (const auto& term : terms) {
        JetSeries gen = JetSeries::term(nt, term.alpha, term.f_alpha, lt, lx);
        acc = acc + term.c.mul(gen);
    }
    return acc;
}

PrepResult taylor_prepare(const JetSeries& f, const OrderWeights& order) {
    GradedSpace space(f.nt(), f.nx(), f.arity(), f.lt(), f.lx(), order);

    // candidate multi-indices sorted by L-value of the t-part
    std::vector<MultiIndex> alphas;
    for (const auto& [a, p] : f.terms()) alphas.push_back(a);
    std::sort(alphas.begin(), alphas.end(), [&](const MultiIndex& a, const MultiIndex& b) {
        Rat la = 0, lb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i]) la += order.lambda[i] * a[i];
            if (b[i]) lb += order.lambda[i] * b[i];
        }
        if (la != lb) return la < lb;
        return a < b;
    });

    EchelonBasis basis(space.ncols());
    ModuleRows rows;
    PrepResult out;
    out.x_saturated = f.x_saturated();

    std::vector<MultiIndex> selected;
    std::vector<JetSeries> selected_gens;
    for (const auto& a : alphas) {
        JetSeries g = JetSeries::term(f.nt(), a, f.coeff(a), f.lt(), f.lx());
        auto red = basis.reduce(space.to_vector(g));
        if (red.is_zero) continue;
        insert_generator_multiples(basis, rows, space, g, static_cast<int>(selected.size()));
        selected.push_back(a);
        selected_gens.push_back(std::move(g));
    }

    // f itself is the sum of the candidate generators, so it reduces to zero
    auto red = basis.reduce(space.to_vector(f));
    if (!red.is_zero) throw std::runtime_error("taylor_prepare: reduction failed");
    std::vector<JetSeries> coeffs =
        combo_to_coeffs(red, rows, static_cast<int>(selected.size()), space);

    // renormalize: c_k <- c_k + 1 - sum_{j : alpha_k <= alpha_j} t^{alpha_j - alpha_k}
    //                                 <t^{alpha_j - alpha_k}>(c_k)
    for (std::size_t k = 0; k < selected.size(); ++k) {
        JetSeries c = coeffs[k];
        JetSeries adj = c;
        PolyVec one(1, f.nx());
        one.comp[0] = Poly::constant(f.nx(), 1);
        adj.add_coeff(MultiIndex(static_cast<std::size_t>(f.nt())), one);
        for (std::size_t j = 0; j < selected.size(); ++j) {
            if (!selected[k].leq(selected[j])) continue;
            MultiIndex delta = selected[j] - selected[k];
            PolyVec coef = c.coeff(delta);
            if (coef.is_zero()) continue;
            adj.add_coeff(delta, coef.scaled(-1));
        }
        out.terms.push_back(PrepTerm{selected[k], std::move(adj), f.coeff(selected[k])});
    }
    return out;
}

PrepResult taylor_prepare(const JetSeries& f) {
    OrderWeights w = default_order_weights(static_cast<std::size_t>(f.nt() + f.nx()),
                                           std::max(f.lt(), f.lx()));
    return taylor_prepare(f, w);
}

GenerateResult finite_generate(const std::vector<std::pair<PolyVec, MultiIndex>>& s, int lx) {
    GenerateResult out;
    if (s.empty()) return out;
    int nx = s[0].first.nvars();
    int arity = s[0].first.arity();
    auto monomials = enumerate_multiindices(static_cast<std::size_t>(nx), lx);

    std::vector<std::size_t> scan(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) scan[i] = i;
    std::stable_sort(scan.begin(), scan.end(), [&](std::size_t a, std::size_t b) {
        int oa = s[a].second.order(), ob = s[b].second.order();
        if (oa != ob) return oa < ob;
        return s[a].second < s[b].second;
    });

    for (std::size_t idx : scan) {
        const auto& [g, e] = s[idx];
        // unknowns: (kept generator with d <= e) x (monomial m with m * f inside lx)
        std::vector<std::pair<int, MultiIndex>> unknowns;
        for (int kept : out.kept) {
            const auto& [fgen, d] = s[static_cast<std::size_t>(kept)];
            if (!d.leq(e)) continue;
            int fdeg = std::max(fgen.total_degree(), 0);
            for (const auto& m : monomials)
                if (m.order() + fdeg <= lx) unknowns.emplace_back(kept, m);
        }
        bool solved = false;
        if (!unknowns.empty() || g.is_zero()) {
            // rows: one per (component, monomial)
            std::size_t nrows = static_cast<std::size_t>(arity) * monomials.size();
            std::vector<std::vector<Rat>> a(nrows, std::vector<Rat>(unknowns.size(), Rat(0)));
            std::vector<Rat> b(nrows, Rat(0));
            std::map<MultiIndex, std::size_t> mono_index;
            for (std::size_t m = 0; m < monomials.size(); ++m) mono_index[monomials[m]] = m;
            for (int c = 0; c < arity; ++c)
                for (const auto& [m, coef] : g.comp[c].terms())
                    b[static_cast<std::size_t>(c) * monomials.size() + mono_index[m]] = coef;
            for (std::size_t u = 0; u < unknowns.size(); ++u) {
                const auto& [kept, m] = unknowns[u];
                const auto& fgen = s[static_cast<std::size_t>(kept)].first;
                for (int c = 0; c < arity; ++c)
                    for (const auto& [mg, coef] : fgen.comp[c].terms())
                        a[static_cast<std::size_t>(c) * monomials.size() + mono_index[m + mg]][u] =
                            coef;
            }
            auto sol = solve_exact(std::move(a), std::move(b));
            if (sol) {
                GenerateCertificate cert;
                cert.element = static_cast<int>(idx);
                std::map<int, Poly> combine;
                for (std::size_t u = 0; u < unknowns.size(); ++u) {
                    if (is_zero((*sol)[u])) continue;
                    const auto& [kept, m] = unknowns[u];
                    combine.try_emplace(kept, Poly(nx)).first->second.add_term(m, (*sol)[u]);
                }
                for (auto& [kept, poly] : combine) cert.combo.emplace_back(kept, std::move(poly));
                out.certs.push_back(std::move(cert));
                solved = true;
            }
        }
        if (!solved) {
            if (!unknowns.empty()) ++out.unresolved;
            out.kept.push_back(static_cast<int>(idx));
            GenerateCertificate cert;
            cert.element = static_cast<int>(idx);
            cert.combo.emplace_back(static_cast<int>(idx), Poly::constant(nx, 1));
            out.certs.push_back(std::move(cert));
        }
    }
    std::sort(out.certs.begin(), out.certs.end(),
              [](const GenerateCertificate& a, const GenerateCertificate& b) {
                  return a.element < b.element;
              });
    return out;
}

}  // namespace radon

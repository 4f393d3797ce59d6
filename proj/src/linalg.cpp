#include "radon/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace radon {

namespace {
int first_nonzero(const std::vector<Rat>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!is_zero(v[i])) return static_cast<int>(i);
    return -1;
}
}  // namespace

EchelonBasis::Reduction EchelonBasis::reduce(std::vector<Rat> v) const {
    // rows are kept fully reduced (zeros at every other pivot), so one pass
    // in any order clears all pivot columns
    Reduction out;
    for (const auto& row : rows_) {
        const Rat c = v[static_cast<std::size_t>(row.lead)];
        if (is_zero(c)) continue;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!is_zero(row.v[i])) v[i] -= c * row.v[i];
        }
        for (const auto& [src, w] : row.combo) {
            out.combo[src] += c * w;
            if (is_zero(out.combo[src])) out.combo.erase(src);
        }
    }
    out.is_zero = first_nonzero(v) < 0;
    out.remainder = std::move(v);
    return out;
}

bool EchelonBasis::insert(std::vector<Rat> v, int source_id) {
    if (static_cast<int>(v.size()) != ncols_) throw std::invalid_argument("EchelonBasis: row size");
    Reduction red = reduce(std::move(v));
    if (red.is_zero) return false;
    Row row;
    row.lead = first_nonzero(red.remainder);
    Rat pivot = red.remainder[static_cast<std::size_t>(row.lead)];
    row.v = std::move(red.remainder);
    for (auto& c : row.v) c /= pivot;
    // remainder = source - sum combo[s] * source_s, then normalized by pivot
    row.combo[source_id] += Rat(1) / pivot;
    for (const auto& [src, w] : red.combo) {
        row.combo[src] -= w / pivot;
        if (is_zero(row.combo[src])) row.combo.erase(src);
    }
    // back-eliminate the new pivot column from every existing row
    for (auto& r : rows_) {
        const Rat c = r.v[static_cast<std::size_t>(row.lead)];
        if (is_zero(c)) continue;
        for (std::size_t i = 0; i < r.v.size(); ++i)
            if (!is_zero(row.v[i])) r.v[i] -= c * row.v[i];
        for (const auto& [src, w] : row.combo) {
            r.combo[src] -= c * w;
            if (is_zero(r.combo[src])) r.combo.erase(src);
        }
    }
    auto pos = std::lower_bound(rows_.begin(), rows_.end(), row.lead,
                                [](const Row& r, int lead) { return r.lead < lead; });
    rows_.insert(pos, std::move(row));
    return true;
}

std::vector<int> EchelonBasis::lead_cols() const {
    std::vector<int> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.lead);
    return out;
}

std::vector<std::vector<Rat>> EchelonBasis::basis() const {
    std::vector<std::vector<Rat>> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.v);
    return out;
}

std::optional<std::vector<Rat>> solve_exact(std::vector<std::vector<Rat>> a,
                                            std::vector<Rat> b) {
    std::size_t rows = a.size();
    if (rows == 0) {
        if (first_nonzero(b) >= 0) return std::nullopt;
        return std::vector<Rat>{};
    }
    std::size_t cols = a[0].size();
    if (b.size() != rows) throw std::invalid_argument("solve_exact: size mismatch");

    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pr = r;
        while (pr < rows && is_zero(a[pr][c])) ++pr;
        if (pr == rows) continue;
        std::swap(a[pr], a[r]);
        std::swap(b[pr], b[r]);
        Rat inv = Rat(1) / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || is_zero(a[i][c])) continue;
            Rat f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (!is_zero(b[i])) return std::nullopt;

    std::vector<Rat> x(cols, Rat(0));
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
        x[static_cast<std::size_t>(pivot_col[k])] = b[k];
    return x;
}

int rational_rank(const std::vector<std::vector<Rat>>& vectors) {
    if (vectors.empty()) return 0;
    EchelonBasis eb(static_cast<int>(vectors[0].size()));
    int id = 0;
    for (const auto& v : vectors) eb.insert(v, id++);
    return eb.rank();
}

bool in_span(const std::vector<std::vector<Rat>>& vectors, const std::vector<Rat>& v) {
    if (first_nonzero(v) < 0) return true;
    if (vectors.empty()) return false;
    EchelonBasis eb(static_cast<int>(v.size()));
    int id = 0;
    for (const auto& w : vectors) eb.insert(w, id++);
    return eb.reduce(v).is_zero;
}

}  // namespace radon

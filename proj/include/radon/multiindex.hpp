#pragma once

#include <compare>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "radon/rational.hpp"

namespace radon {

/// Multi-index in N^k: t-exponents, x-exponents and formal degrees.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t k) : e_(k, 0) {}
    MultiIndex(std::initializer_list<int> v) : e_(v) { validate(); }
    explicit MultiIndex(std::vector<int> v) : e_(std::move(v)) { validate(); }

    std::size_t size() const { return e_.size(); }
    int operator[](std::size_t i) const { return e_[i]; }
    int& operator[](std::size_t i) { return e_[i]; }
    const std::vector<int>& entries() const { return e_; }

    /// |alpha|_1
    int order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

    bool is_zero() const {
        for (int v : e_)
            if (v != 0) return false;
        return true;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        require_same_size(o);
        MultiIndex r(*this);
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
        return r;
    }

    /// Componentwise <=.
    bool leq(const MultiIndex& o) const {
        require_same_size(o);
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (e_[i] > o.e_[i]) return false;
        return true;
    }

    /// Componentwise difference; requires o.leq(*this).
    MultiIndex operator-(const MultiIndex& o) const {
        require_same_size(o);
        MultiIndex r(*this);
        for (std::size_t i = 0; i < e_.size(); ++i) {
            r.e_[i] -= o.e_[i];
            if (r.e_[i] < 0) throw std::invalid_argument("multi-index subtraction underflow");
        }
        return r;
    }

    bool operator==(const MultiIndex&) const = default;
    auto operator<=>(const MultiIndex&) const = default;

    /// alpha! as an exact rational.
    Rat fact() const {
        Rat f = 1;
        for (int v : e_) f *= factorial(v);
        return f;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < e_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(e_[i]);
        }
        s += ")";
        return s;
    }

    /// Unit multi-index e_i of length k.
    static MultiIndex unit(std::size_t k, std::size_t i) {
        MultiIndex m(k);
        m[i] = 1;
        return m;
    }

private:
    void validate() const {
        for (int v : e_)
            if (v < 0) throw std::invalid_argument("negative multi-index entry");
    }
    void require_same_size(const MultiIndex& o) const {
        if (e_.size() != o.e_.size()) throw std::invalid_argument("multi-index dimension mismatch");
    }

    std::vector<int> e_;
};

/// Anisotropic dilation data: nonzero exponent e_j in N^nu for each of the N t-variables.
struct DilationSpec {
    int N = 1;
    int nu = 1;
    std::vector<MultiIndex> e;

    DilationSpec() = default;
    DilationSpec(int N_, int nu_, std::vector<MultiIndex> e_) : N(N_), nu(nu_), e(std::move(e_)) {
        validate();
    }

    /// Single-parameter dilations (every e_j = 1).
    static DilationSpec isotropic(int N_) {
        std::vector<MultiIndex> ee(N_, MultiIndex{1});
        return DilationSpec(N_, 1, std::move(ee));
    }

    /// nu = N, e_j = j-th unit vector: every t-coordinate scales independently.
    static DilationSpec coordinatewise(int N_) {
        std::vector<MultiIndex> ee;
        ee.reserve(N_);
        for (int j = 0; j < N_; ++j) ee.push_back(MultiIndex::unit(N_, j));
        return DilationSpec(N_, N_, std::move(ee));
    }

    void validate() const {
        if (N < 1 || nu < 1) throw std::invalid_argument("DilationSpec: need N >= 1, nu >= 1");
        if (static_cast<int>(e.size()) != N) throw std::invalid_argument("DilationSpec: e must have N entries");
        for (const auto& ej : e) {
            if (static_cast<int>(ej.size()) != nu)
                throw std::invalid_argument("DilationSpec: each e_j must lie in N^nu");
            if (ej.is_zero()) throw std::invalid_argument("DilationSpec: e_j must be nonzero");
        }
    }
};

/// deg(alpha) = sum_j alpha_j e_j in N^nu.
inline MultiIndex deg(const MultiIndex& alpha, const DilationSpec& d) {
    if (static_cast<int>(alpha.size()) != d.N)
        throw std::invalid_argument("deg: alpha must have N entries");
    MultiIndex out(static_cast<std::size_t>(d.nu));
    for (int j = 0; j < d.N; ++j)
        for (int mu = 0; mu < d.nu; ++mu) out[mu] += alpha[j] * d.e[j][mu];
    return out;
}

enum class PowerClass { Zero, Pure, NonPure };

struct PowerKind {
    PowerClass cls = PowerClass::Zero;
    int component = -1;  // the single nonzero component of deg(alpha) when Pure
};

/// Pure iff deg(alpha) is nonzero in exactly one component.
inline PowerKind classify_power(const MultiIndex& alpha, const DilationSpec& d) {
    MultiIndex dg = deg(alpha, d);
    int nonzero = -1;
    int count = 0;
    for (int mu = 0; mu < d.nu; ++mu) {
        if (dg[mu] != 0) {
            ++count;
            nonzero = mu;
        }
    }
    if (count == 0) return {PowerClass::Zero, -1};
    if (count == 1) return {PowerClass::Pure, nonzero};
    return {PowerClass::NonPure, -1};
}

/// All multi-indices of length k with |alpha|_1 <= max_order, in graded lex order.
std::vector<MultiIndex> enumerate_multiindices(std::size_t k, int max_order);

/// Truncation orders shared by the symbolic layer plus the numeric tolerance.
struct TruncationPolicy {
    int lt = 3;
    int lx = 3;
    double tolerance = 1e-9;

    void validate() const {
        if (lt < 1 || lx < 0 || tolerance <= 0) throw std::invalid_argument("bad TruncationPolicy");
    }
};

}  // namespace radon

#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "radon/rational.hpp"

namespace radon {

/// Incremental row-echelon basis over Q. Columns are assumed to be already
/// arranged in the caller's grading: the leading entry of a row is its first
/// nonzero column. Every basis row remembers how it combines the inserted
/// source rows, so reductions yield replayable certificates.
class EchelonBasis {
public:
    explicit EchelonBasis(int ncols) : ncols_(ncols) {}

    struct Reduction {
        std::vector<Rat> remainder;
        std::map<int, Rat> combo;  // remainder = input - sum combo[src] * source_src
        bool is_zero = false;
    };

    /// Reduce v against the basis (single pass in increasing lead order).
    Reduction reduce(std::vector<Rat> v) const;

    /// Insert a source row with the given id; returns true if rank grew.
    bool insert(std::vector<Rat> v, int source_id);

    int rank() const { return static_cast<int>(rows_.size()); }
    int ncols() const { return ncols_; }
    std::vector<int> lead_cols() const;

    /// Basis rows (normalized, fully reduced, sorted by leading column).
    std::vector<std::vector<Rat>> basis() const;

private:
    int ncols_;
    struct Row {
        std::vector<Rat> v;
        int lead;
        std::map<int, Rat> combo;  // v = sum combo[src] * source_src
    };
    std::vector<Row> rows_;  // sorted by lead
};

/// Exact solve of A x = b (dense, rows x cols). Returns any solution or nullopt.
std::optional<std::vector<Rat>> solve_exact(std::vector<std::vector<Rat>> a,
                                            std::vector<Rat> b);

/// Rank over Q of a set of dense rational vectors.
int rational_rank(const std::vector<std::vector<Rat>>& vectors);

/// True iff v lies in the Q-span of the given vectors.
bool in_span(const std::vector<std::vector<Rat>>& vectors, const std::vector<Rat>& v);

}  // namespace radon

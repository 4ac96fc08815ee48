#pragma once

#include <cstddef>
#include <vector>

namespace polyserendip {

/// Unordered, possibly repeated vertex pair {a, b}; stored with a <= b, 0-based.
struct IndexPair {
    int a = 0;
    int b = 0;

    friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Partition of all vertex pairs of an n-gon into vertices V = {a,a}, boundary
/// edges E = {a,a+1} and strict diagonals D. The canonical pairwise-product
/// ordering is V (by a), then E (edge a -> a+1, by a), then D lexicographically.
struct IndexSets {
    int n = 0;
    std::vector<IndexPair> V;
    std::vector<IndexPair> E;
    std::vector<IndexPair> D;
    /// n*n table: position[a*n + b] is the canonical column of {a, b}.
    std::vector<std::size_t> position;

    [[nodiscard]] std::size_t total() const { return V.size() + E.size() + D.size(); }
    /// V, E, D concatenated.
    [[nodiscard]] std::vector<IndexPair> ordered() const;
    /// Position of {a, b} in the canonical ordering.
    [[nodiscard]] std::size_t column(int a, int b) const;
};

/// Throws InvalidInput for n < 3.
IndexSets index_sets(int n);

} // namespace polyserendip

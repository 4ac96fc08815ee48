#pragma once

#include "polyserendip/error.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace polyserendip {

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Square CSR matrix with sorted, deduplicated column indices per row.
class SparseMatrix {
public:
    SparseMatrix() = default;

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }
    [[nodiscard]] std::span<const std::size_t> row_offsets() const { return row_offsets_; }
    [[nodiscard]] std::span<const std::size_t> col_indices() const { return col_indices_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

    /// Entry (i, j); zero when not stored.
    [[nodiscard]] double coeff(std::size_t i, std::size_t j) const;
    [[nodiscard]] std::vector<double> diagonal() const;

    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    /// max |a_ij - a_ji| / max |a_ij|.
    [[nodiscard]] double symmetry_defect() const;

    /// Rows and columns listed in `keep` (ascending), renumbered 0..keep.size()-1.
    [[nodiscard]] SparseMatrix submatrix(std::span<const std::size_t> keep) const;

    friend SparseMatrix from_triplets(std::size_t dim, std::span<const Triplet> triplets);

private:
    std::size_t dim_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

/// Duplicates are summed; out-of-range indices throw InvalidInput.
SparseMatrix from_triplets(std::size_t dim, std::span<const Triplet> triplets);

struct SolveReport {
    std::vector<double> solution;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, SolveReport report) : Error(what), report_(std::move(report)) {}
    [[nodiscard]] const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

/// Jacobi-preconditioned conjugate gradients for SPD matrices. Stops when
/// ||b - Ax|| / ||b|| <= tol. max_iter = 0 means 10 * dim.
SolveReport cg_solve(const SparseMatrix& matrix, std::span<const double> rhs, double tol = 1e-12,
    std::size_t max_iter = 0);

} // namespace polyserendip

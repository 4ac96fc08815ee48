#include "polyserendip/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace polyserendip {

SparseMatrix from_triplets(std::size_t dim, std::span<const Triplet> triplets)
{
    for (const auto& t : triplets) {
        if (t.row >= dim || t.col >= dim) {
            std::ostringstream msg;
            msg << "triplet (" << t.row << ", " << t.col << ") out of range for dimension " << dim;
            throw InvalidInput(msg.str());
        }
    }
    SparseMatrix m;
    m.dim_ = dim;

    // Bucket by row, then sort each row by column and merge duplicates.
    std::vector<std::size_t> counts(dim + 1, 0);
    for (const auto& t : triplets) {
        ++counts[t.row + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    std::vector<std::size_t> cols(triplets.size());
    std::vector<double> vals(triplets.size());
    std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
    for (const auto& t : triplets) {
        const std::size_t k = fill[t.row]++;
        cols[k] = t.col;
        vals[k] = t.value;
    }

    m.row_offsets_.assign(dim + 1, 0);
    m.col_indices_.clear();
    m.values_.clear();
    m.col_indices_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    std::vector<std::size_t> order;
    for (std::size_t r = 0; r < dim; ++r) {
        const std::size_t begin = counts[r];
        const std::size_t end = counts[r + 1];
        order.resize(end - begin);
        std::iota(order.begin(), order.end(), begin);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cols[x] < cols[y]; });
        for (std::size_t k : order) {
            if (!m.col_indices_.empty() && m.col_indices_.size() > m.row_offsets_[r] && m.col_indices_.back() == cols[k]) {
                m.values_.back() += vals[k];
            } else {
                m.col_indices_.push_back(cols[k]);
                m.values_.push_back(vals[k]);
            }
        }
        m.row_offsets_[r + 1] = m.col_indices_.size();
    }
    return m;
}

double SparseMatrix::coeff(std::size_t i, std::size_t j) const
{
    const auto begin = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto end = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

std::vector<double> SparseMatrix::diagonal() const
{
    std::vector<double> d(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        d[i] = coeff(i, i);
    }
    return d;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    for (std::size_t r = 0; r < dim_; ++r) {
        double acc = 0.0;
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            acc += values_[k] * x[col_indices_[k]];
        }
        y[r] = acc;
    }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(dim_);
    multiply(x, y);
    return y;
}

double SparseMatrix::symmetry_defect() const
{
    double scale = 0.0;
    double defect = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            scale = std::max(scale, std::abs(values_[k]));
            defect = std::max(defect, std::abs(values_[k] - coeff(col_indices_[k], r)));
        }
    }
    return scale > 0.0 ? defect / scale : 0.0;
}

SparseMatrix SparseMatrix::submatrix(std::span<const std::size_t> keep) const
{
    constexpr std::size_t absent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> renumber(dim_, absent);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        renumber[keep[i]] = i;
    }
    SparseMatrix out;
    out.dim_ = keep.size();
    out.row_offsets_.assign(keep.size() + 1, 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const std::size_t r = keep[i];
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            const std::size_t c = renumber[col_indices_[k]];
            if (c != absent) {
                out.col_indices_.push_back(c);
                out.values_.push_back(values_[k]);
            }
        }
        out.row_offsets_[i + 1] = out.col_indices_.size();
    }
    return out;
}

SolveReport cg_solve(const SparseMatrix& matrix, std::span<const double> rhs, double tol, std::size_t max_iter)
{
    const std::size_t n = matrix.dim();
    if (rhs.size() != n) {
        throw InvalidInput("right-hand side size does not match the matrix");
    }
    if (max_iter == 0) {
        max_iter = 10 * std::max<std::size_t>(n, 1);
    }
    std::vector<double> inv_diag = matrix.diagonal();
    for (double& d : inv_diag) {
        if (!(d > 0.0)) {
            throw SolverError("Jacobi preconditioner needs a positive diagonal", SolveReport{});
        }
        d = 1.0 / d;
    }

    auto dot = [](std::span<const double> a, std::span<const double> b) {
        return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
    };

    SolveReport report;
    report.solution.assign(n, 0.0);
    const double b_norm = std::sqrt(dot(rhs, rhs));
    if (b_norm == 0.0) {
        report.converged = true;
        return report;
    }

    std::vector<double> r(rhs.begin(), rhs.end());
    std::vector<double> z(n);
    std::vector<double> p(n);
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = inv_diag[i] * r[i];
    }
    p = z;
    double rz = dot(r, z);
    auto& x = report.solution;

    report.relative_residual = 1.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        matrix.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) {
            report.iterations = it;
            throw SolverError("matrix is not positive definite", report);
        }
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        report.iterations = it;
        report.relative_residual = std::sqrt(dot(r, r)) / b_norm;
        if (report.relative_residual <= tol) {
            // Confirm against the true residual; recurrence drift can undershoot it.
            const std::vector<double> ax = matrix.multiply(x);
            double rr = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                rr += (rhs[i] - ax[i]) * (rhs[i] - ax[i]);
            }
            report.relative_residual = std::sqrt(rr) / b_norm;
            if (report.relative_residual <= tol) {
                report.converged = true;
                return report;
            }
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = rhs[i] - ax[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = inv_diag[i] * r[i];
        }
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    std::ostringstream msg;
    msg << "conjugate gradients did not converge in " << max_iter << " iterations (relative residual "
        << report.relative_residual << ")";
    throw SolverError(msg.str(), report);
}

} // namespace polyserendip

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace nslp {

using Point = std::vector<double>;

/** Dense row-major matrix. */
class DenseMatrix
{
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    /** Builds from a list of rows; all rows must have the same length. */
    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

namespace vec {

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);
Point add(std::span<const double> a, std::span<const double> b);
Point sub(std::span<const double> a, std::span<const double> b);
Point scaled(std::span<const double> a, double factor);
bool all_finite(std::span<const double> a);

} // namespace vec

/**
 * One frozen snapshot of  max <c, x>  s.t.  A x <= b,  x >= 0.
 *
 * When nonneg_augmented is set, the sign constraints are stored as the last n
 * rows of A (-x_j <= 0) and are no longer checked separately.
 * Squared row norms are cached at construction.
 */
class LpInstance
{
public:
    LpInstance(DenseMatrix A, std::vector<double> b, std::vector<double> c, bool nonneg_augmented = false);

    const DenseMatrix& A() const noexcept { return A_; }
    const std::vector<double>& b() const noexcept { return b_; }
    const std::vector<double>& c() const noexcept { return c_; }
    bool nonneg_augmented() const noexcept { return nonneg_augmented_; }

    std::size_t m() const noexcept { return A_.rows(); }
    std::size_t n() const noexcept { return A_.cols(); }

    std::span<const double> row(std::size_t i) const { return A_.row(i); }
    double row_norm_sq(std::size_t i) const { return row_norm_sq_[i]; }

    /** Same A and c, different right-hand side. */
    LpInstance with_b(std::vector<double> b) const;

    double objective(std::span<const double> x) const;

    bool operator==(const LpInstance& other) const;

private:
    DenseMatrix A_;
    std::vector<double> b_;
    std::vector<double> c_;
    bool nonneg_augmented_;
    std::vector<double> row_norm_sq_;
};

struct Tolerances
{
    double feas_tol = 1e-9;
    double conv_tol = 1e-10;
    double epsilon = 1e-3;

    /** Throws ParameterError unless all are positive and conv_tol <= epsilon. */
    void validate() const;
};

/** max{<a_i, x> - b_i, 0} */
double residual(const LpInstance& inst, std::size_t i, std::span<const double> x);

bool is_feasible(const LpInstance& inst, std::span<const double> x, double feas_tol);

/** Appends the rows -x_j <= 0, j = 0..n-1. */
LpInstance augment_nonnegativity(const LpInstance& inst);

/** Returns inst unchanged if already augmented. */
LpInstance ensure_augmented(const LpInstance& inst);

/**
 * Instance JSON: {"A": [[...], ...], "b": [...], "c": [...], "nonneg_augmented": false}.
 * Throws FormatError naming the offending field.
 */
LpInstance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const LpInstance& inst);

} // namespace nslp

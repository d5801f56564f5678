#include "nslp/lp_core.hpp"

#include <algorithm>
#include <cmath>

#include "nslp/errors.hpp"

namespace nslp {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    DenseMatrix out(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw ContractViolation("DenseMatrix::from_rows: row " + std::to_string(i) + " has length " +
                                    std::to_string(rows[i].size()) + ", expected " + std::to_string(cols));
        std::copy(rows[i].begin(), rows[i].end(), out.data_.begin() + static_cast<std::ptrdiff_t>(i * cols));
    }
    return out;
}

namespace vec {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
        s += a[j] * b[j];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return std::sqrt(s);
}

Point add(std::span<const double> a, std::span<const double> b)
{
    Point out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        out[j] = a[j] + b[j];
    return out;
}

Point sub(std::span<const double> a, std::span<const double> b)
{
    Point out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        out[j] = a[j] - b[j];
    return out;
}

Point scaled(std::span<const double> a, double factor)
{
    Point out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        out[j] = a[j] * factor;
    return out;
}

bool all_finite(std::span<const double> a)
{
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

} // namespace vec

LpInstance::LpInstance(DenseMatrix A, std::vector<double> b, std::vector<double> c, bool nonneg_augmented)
    : A_(std::move(A)), b_(std::move(b)), c_(std::move(c)), nonneg_augmented_(nonneg_augmented)
{
    const std::size_t m = A_.rows();
    const std::size_t n = A_.cols();
    if (m < 1)
        throw ContractViolation("LpInstance: need at least one constraint row");
    if (n < 2)
        throw ContractViolation("LpInstance: dimension n must be >= 2, got " + std::to_string(n));
    if (b_.size() != m)
        throw ContractViolation("LpInstance: b has length " + std::to_string(b_.size()) + ", expected " +
                                std::to_string(m));
    if (c_.size() != n)
        throw ContractViolation("LpInstance: c has length " + std::to_string(c_.size()) + ", expected " +
                                std::to_string(n));
    if (!vec::all_finite(b_) || !vec::all_finite(c_))
        throw ContractViolation("LpInstance: non-finite entry in b or c");

    row_norm_sq_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto r = A_.row(i);
        if (!vec::all_finite(r))
            throw ContractViolation("LpInstance: non-finite entry in row " + std::to_string(i));
        row_norm_sq_[i] = vec::dot(r, r);
        if (!(row_norm_sq_[i] > 0.0))
            throw ContractViolation("LpInstance: row " + std::to_string(i) + " is zero");
    }

    if (nonneg_augmented_) {
        if (m < n)
            throw ContractViolation("LpInstance: augmented instance has fewer than n rows");
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t i = m - n + j;
            for (std::size_t col = 0; col < n; ++col) {
                const double expected = col == j ? -1.0 : 0.0;
                if (A_(i, col) != expected)
                    throw ContractViolation("LpInstance: augmented row " + std::to_string(i) +
                                            " is not the negated identity pattern");
            }
        }
    }
}

LpInstance LpInstance::with_b(std::vector<double> b) const
{
    return LpInstance(A_, std::move(b), c_, nonneg_augmented_);
}

double LpInstance::objective(std::span<const double> x) const
{
    if (x.size() != n())
        throw ContractViolation("objective: point has length " + std::to_string(x.size()) + ", expected " +
                                std::to_string(n()));
    return vec::dot(c_, x);
}

bool LpInstance::operator==(const LpInstance& other) const
{
    return A_ == other.A_ && b_ == other.b_ && c_ == other.c_ && nonneg_augmented_ == other.nonneg_augmented_;
}

void Tolerances::validate() const
{
    if (!(feas_tol > 0.0) || !(conv_tol > 0.0) || !(epsilon > 0.0))
        throw ParameterError("Tolerances: feas_tol, conv_tol and epsilon must be strictly positive");
    if (conv_tol > epsilon)
        throw ParameterError("Tolerances: conv_tol must not exceed epsilon");
}

namespace {

void require_dimension(const LpInstance& inst, std::span<const double> x, const char* op)
{
    if (x.size() != inst.n())
        throw ContractViolation(std::string(op) + ": point has length " + std::to_string(x.size()) +
                                ", instance dimension is " + std::to_string(inst.n()));
}

} // namespace

double residual(const LpInstance& inst, std::size_t i, std::span<const double> x)
{
    require_dimension(inst, x, "residual");
    if (i >= inst.m())
        throw ContractViolation("residual: row index " + std::to_string(i) + " out of range");
    return std::max(vec::dot(inst.row(i), x) - inst.b()[i], 0.0);
}

bool is_feasible(const LpInstance& inst, std::span<const double> x, double feas_tol)
{
    require_dimension(inst, x, "is_feasible");
    for (std::size_t i = 0; i < inst.m(); ++i)
        if (vec::dot(inst.row(i), x) > inst.b()[i] + feas_tol)
            return false;
    if (!inst.nonneg_augmented())
        for (double xj : x)
            if (xj < -feas_tol)
                return false;
    return true;
}

LpInstance augment_nonnegativity(const LpInstance& inst)
{
    if (inst.nonneg_augmented())
        throw ContractViolation("augment_nonnegativity: instance is already augmented");
    const std::size_t m = inst.m();
    const std::size_t n = inst.n();
    DenseMatrix A(m + n, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            A(i, j) = inst.A()(i, j);
    for (std::size_t j = 0; j < n; ++j)
        A(m + j, j) = -1.0;
    std::vector<double> b = inst.b();
    b.resize(m + n, 0.0);
    return LpInstance(std::move(A), std::move(b), inst.c(), true);
}

LpInstance ensure_augmented(const LpInstance& inst)
{
    return inst.nonneg_augmented() ? inst : augment_nonnegativity(inst);
}

namespace {

std::vector<double> read_vector(const nlohmann::json& doc, const std::string& field)
{
    if (!doc.contains(field))
        throw FormatError("missing field \"" + field + "\"");
    const auto& node = doc.at(field);
    if (!node.is_array())
        throw FormatError("field \"" + field + "\" must be an array of numbers");
    std::vector<double> out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number())
            throw FormatError("field \"" + field + "\"[" + std::to_string(i) + "] is not a number");
        out.push_back(node[i].get<double>());
    }
    return out;
}

} // namespace

LpInstance instance_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw FormatError("instance must be a JSON object");
    if (!doc.contains("A"))
        throw FormatError("missing field \"A\"");
    const auto& rows = doc.at("A");
    if (!rows.is_array() || rows.empty())
        throw FormatError("field \"A\" must be a non-empty array of rows");
    std::vector<std::vector<double>> A;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!r.is_array())
            throw FormatError("field \"A\"[" + std::to_string(i) + "] is not an array");
        std::vector<double> row;
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (!r[j].is_number())
                throw FormatError("field \"A\"[" + std::to_string(i) + "][" + std::to_string(j) + "] is not a number");
            row.push_back(r[j].get<double>());
        }
        if (!A.empty() && row.size() != A.front().size())
            throw FormatError("field \"A\"[" + std::to_string(i) + "] has inconsistent length");
        A.push_back(std::move(row));
    }
    auto b = read_vector(doc, "b");
    auto c = read_vector(doc, "c");
    bool augmented = false;
    if (doc.contains("nonneg_augmented")) {
        if (!doc.at("nonneg_augmented").is_boolean())
            throw FormatError("field \"nonneg_augmented\" must be a boolean");
        augmented = doc.at("nonneg_augmented").get<bool>();
    }
    try {
        return LpInstance(DenseMatrix::from_rows(A), std::move(b), std::move(c), augmented);
    } catch (const ContractViolation& e) {
        throw FormatError(std::string("invalid instance: ") + e.what());
    }
}

nlohmann::json instance_to_json(const LpInstance& inst)
{
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const auto r = inst.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return {{"A", rows}, {"b", inst.b()}, {"c", inst.c()}, {"nonneg_augmented", inst.nonneg_augmented()}};
}

} // namespace nslp

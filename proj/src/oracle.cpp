#include "nslp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "nslp/errors.hpp"

namespace nslp::oracle {

namespace {

constexpr double kVertexTol = 1e-9;
constexpr double kDedupTol = 1e-9;

bool satisfies(const LpInstance& inst, std::span<const double> x, double tol)
{
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const auto a = inst.row(i);
        const double scale = 1.0 + std::abs(inst.b()[i]) + std::sqrt(inst.row_norm_sq(i)) * vec::norm(x);
        if (vec::dot(a, x) - inst.b()[i] > tol * scale)
            return false;
    }
    return true;
}

// Calls visit(indices) for each k-subset of {0..m-1} in lexicographic order.
void for_each_subset(std::size_t m, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& visit)
{
    if (k > m)
        return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    while (true) {
        visit(idx);
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == m - k + pos - 1)
            --pos;
        if (pos == 0)
            return;
        ++idx[pos - 1];
        for (std::size_t j = pos; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

std::optional<Point> intersect(const LpInstance& inst, const std::vector<std::size_t>& rows)
{
    const std::size_t n = inst.n();
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd rhs(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < n; ++j)
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = inst.A()(rows[r], j);
        rhs(static_cast<Eigen::Index>(r)) = inst.b()[rows[r]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-12);
    if (lu.rank() < static_cast<Eigen::Index>(n))
        return std::nullopt;
    const Eigen::VectorXd sol = lu.solve(rhs);
    return Point(sol.data(), sol.data() + n);
}

void require_small(const LpInstance& inst, const char* op)
{
    if (inst.n() > 3)
        throw UnsupportedError(std::string(op) + ": vertex enumeration supports n <= 3, got n = " +
                               std::to_string(inst.n()));
}

struct Enumeration
{
    std::vector<Point> vertices;
    std::int64_t subsets = 0;
};

Enumeration enumerate(const LpInstance& aug)
{
    Enumeration out;
    for_each_subset(aug.m(), aug.n(), [&](const std::vector<std::size_t>& rows) {
        ++out.subsets;
        auto p = intersect(aug, rows);
        if (!p || !satisfies(aug, *p, kVertexTol))
            return;
        const bool dup = std::any_of(out.vertices.begin(), out.vertices.end(),
                                     [&](const Point& v) { return vec::distance(v, *p) <= kDedupTol; });
        if (!dup)
            out.vertices.push_back(std::move(*p));
    });
    return out;
}

// Null-space direction of n-1 rows (n = 2 or 3), or nullopt when they are dependent.
std::optional<Point> edge_direction(const LpInstance& inst, const std::vector<std::size_t>& rows)
{
    if (inst.n() == 2) {
        const auto a = inst.row(rows[0]);
        return Point{-a[1], a[0]};
    }
    const auto a = inst.row(rows[0]);
    const auto b = inst.row(rows[1]);
    Point r{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    const double scale = vec::norm(a) * vec::norm(b);
    if (vec::norm(r) <= 1e-12 * scale)
        return std::nullopt;
    return r;
}

bool improving_ray_exists(const LpInstance& aug)
{
    bool found = false;
    for_each_subset(aug.m(), aug.n() - 1, [&](const std::vector<std::size_t>& rows) {
        if (found)
            return;
        auto dir = edge_direction(aug, rows);
        if (!dir)
            return;
        const double len = vec::norm(*dir);
        for (double sign : {1.0, -1.0}) {
            const Point r = vec::scaled(*dir, sign / len);
            bool recession = true;
            for (std::size_t i = 0; i < aug.m() && recession; ++i)
                recession = vec::dot(aug.row(i), r) <= 1e-12 * std::sqrt(aug.row_norm_sq(i));
            if (recession && vec::dot(aug.c(), r) > 1e-12 * (1.0 + vec::norm(aug.c()))) {
                found = true;
                return;
            }
        }
    });
    return found;
}

} // namespace

std::vector<Point> enumerate_vertices(const LpInstance& inst)
{
    require_small(inst, "enumerate_vertices");
    return enumerate(ensure_augmented(inst)).vertices;
}

VertexSolution exact_lp_solve(const LpInstance& inst)
{
    require_small(inst, "exact_lp_solve");
    const LpInstance aug = ensure_augmented(inst);
    const Enumeration e = enumerate(aug);

    VertexSolution sol;
    sol.vertices_checked = e.subsets;
    sol.feasible = !e.vertices.empty();
    if (!sol.feasible)
        return sol;
    sol.value = -std::numeric_limits<double>::infinity();
    for (const auto& v : e.vertices) {
        const double val = vec::dot(aug.c(), v);
        if (val > sol.value) {
            sol.value = val;
            sol.optimum = v;
        }
    }
    sol.bounded = !improving_ray_exists(aug);
    return sol;
}

bool is_axis_aligned_box(const LpInstance& inst)
{
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const auto a = inst.row(i);
        if (std::count_if(a.begin(), a.end(), [](double v) { return v != 0.0; }) != 1)
            return false;
    }
    return true;
}

bool supports_exact_distance(const LpInstance& inst)
{
    return inst.n() == 2 || is_axis_aligned_box(inst);
}

namespace {

Point box_projection(const LpInstance& aug, std::span<const double> x)
{
    const std::size_t n = aug.n();
    std::vector<double> lo(n, -std::numeric_limits<double>::infinity());
    std::vector<double> hi(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < aug.m(); ++i) {
        const auto a = aug.row(i);
        const auto j = static_cast<std::size_t>(std::find_if(a.begin(), a.end(), [](double v) { return v != 0.0; }) -
                                                a.begin());
        const double bound = aug.b()[i] / a[j];
        if (a[j] > 0.0)
            hi[j] = std::min(hi[j], bound);
        else
            lo[j] = std::max(lo[j], bound);
    }
    Point p(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (lo[j] > hi[j])
            throw EmptyRegionError("exact_distance: box is empty along axis " + std::to_string(j));
        p[j] = std::clamp(x[j], lo[j], hi[j]);
    }
    return p;
}

Point polygon_projection(const LpInstance& aug, std::span<const double> x)
{
    std::optional<Point> best;
    double best_dist = std::numeric_limits<double>::infinity();
    auto consider = [&](Point p) {
        if (!satisfies(aug, p, kVertexTol))
            return;
        const double dist = vec::distance(p, x);
        if (dist < best_dist) {
            best_dist = dist;
            best = std::move(p);
        }
    };
    for (std::size_t i = 0; i < aug.m(); ++i) {
        const auto a = aug.row(i);
        const double excess = vec::dot(a, x) - aug.b()[i];
        Point p(x.begin(), x.end());
        for (std::size_t j = 0; j < p.size(); ++j)
            p[j] -= excess / aug.row_norm_sq(i) * a[j];
        consider(std::move(p));
    }
    for (auto& v : enumerate(aug).vertices)
        consider(std::move(v));
    if (!best)
        throw EmptyRegionError("exact_distance: feasible region is empty");
    return *best;
}

} // namespace

Point exact_projection(const LpInstance& inst, std::span<const double> x)
{
    if (x.size() != inst.n())
        throw ContractViolation("exact_projection: dimension mismatch");
    const LpInstance aug = ensure_augmented(inst);
    if (is_axis_aligned_box(aug))
        return box_projection(aug, x);
    if (aug.n() != 2)
        throw UnsupportedError("exact_distance: only planar polygons and axis-aligned boxes are supported");
    if (is_feasible(aug, x, 0.0))
        return Point(x.begin(), x.end());
    return polygon_projection(aug, x);
}

double exact_distance(const LpInstance& inst, std::span<const double> x)
{
    if (x.size() != inst.n())
        throw ContractViolation("exact_distance: dimension mismatch");
    const LpInstance aug = ensure_augmented(inst);
    if (!is_axis_aligned_box(aug) && aug.n() != 2)
        throw UnsupportedError("exact_distance: only planar polygons and axis-aligned boxes are supported");
    if (is_feasible(aug, x, 0.0))
        return 0.0;
    return vec::distance(exact_projection(aug, x), x);
}

} // namespace nslp::oracle

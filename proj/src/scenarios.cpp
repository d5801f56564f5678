#include "nslp/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nslp/errors.hpp"
#include "nslp/fejer.hpp"

namespace nslp {

std::string to_string(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::Static: return "static";
    case ScenarioKind::Translation: return "translation";
    case ScenarioKind::Piecewise: return "piecewise";
    }
    return "unknown";
}

namespace {

LpInstance maybe_augment(LpInstance inst, bool augment)
{
    return augment ? ensure_augmented(inst) : inst;
}

} // namespace

Scenario::Scenario(ScenarioKind kind, LpInstance base, std::vector<double> d, std::vector<ScheduleEntry> schedule)
    : kind_(kind), base_(std::move(base)), d_(std::move(d)), schedule_(std::move(schedule))
{
}

Scenario Scenario::make_static(LpInstance base, bool augment)
{
    const std::size_t n = base.n();
    return Scenario(ScenarioKind::Static, maybe_augment(std::move(base), augment), std::vector<double>(n, 0.0), {});
}

Scenario Scenario::make_translation(LpInstance base, std::vector<double> d, bool augment)
{
    if (d.size() != base.n())
        throw ContractViolation("translation scenario: d has length " + std::to_string(d.size()) +
                                ", expected " + std::to_string(base.n()));
    if (!vec::all_finite(d))
        throw ContractViolation("translation scenario: d has non-finite entries");
    return Scenario(ScenarioKind::Translation, maybe_augment(std::move(base), augment), std::move(d), {});
}

Scenario Scenario::make_piecewise(LpInstance base, std::vector<ScheduleEntry> schedule, bool augment)
{
    const std::size_t n = base.n();
    double prev = 0.0;
    std::vector<ScheduleEntry> entries;
    entries.reserve(schedule.size());
    for (auto& e : schedule) {
        if (!(e.threshold > prev))
            throw ContractViolation("piecewise scenario: thresholds must be positive and strictly increasing");
        if (e.instance.n() != n)
            throw ContractViolation("piecewise scenario: schedule instance dimension differs from base");
        prev = e.threshold;
        entries.push_back({e.threshold, maybe_augment(std::move(e.instance), augment)});
    }
    return Scenario(ScenarioKind::Piecewise, maybe_augment(std::move(base), augment), std::vector<double>(n, 0.0),
                    std::move(entries));
}

LpInstance Scenario::instance_at(double t) const
{
    if (!(t >= 0.0))
        throw ContractViolation("instance_at: time must be non-negative");
    switch (kind_) {
    case ScenarioKind::Static:
        return base_;
    case ScenarioKind::Translation: {
        if (t == 0.0)
            return base_;
        const Point shift = vec::scaled(d_, t);
        std::vector<double> b = base_.b();
        for (std::size_t i = 0; i < b.size(); ++i)
            b[i] += vec::dot(base_.row(i), shift);
        return base_.with_b(std::move(b));
    }
    case ScenarioKind::Piecewise: {
        const LpInstance* current = &base_;
        for (const auto& e : schedule_) {
            if (e.threshold <= t)
                current = &e.instance;
            else
                break;
        }
        return *current;
    }
    }
    return base_;
}

Point fejer_map_translated(const Scenario& scn, std::int64_t k, std::int64_t L, double lambda,
                           std::span<const double> x)
{
    if (scn.kind() != ScenarioKind::Translation)
        throw ContractViolation("fejer_map_translated: scenario is not a translation");
    require_relaxation(lambda);
    const LpInstance& base = scn.base();
    if (x.size() != base.n())
        throw ContractViolation("fejer_map_translated: dimension mismatch");

    const Point offset = vec::scaled(scn.d(), static_cast<double>(k) * static_cast<double>(L));
    const Point shifted = vec::sub(x, offset);
    Point corr(base.n());
    Point out(x.begin(), x.end());
    if (accumulate_corrections(base, shifted, corr)) {
        const double factor = lambda / static_cast<double>(base.m());
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] -= factor * corr[j];
    }
    return out;
}

namespace {

// Uniform [0, 1) from the raw 64-bit engine output; std distributions are
// implementation-defined and would break cross-platform snapshots.
double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (hi - lo) * unit_uniform(rng);
}

} // namespace

GeneratedInstance random_feasible_instance(std::size_t n, std::size_t m, std::uint64_t seed, bool augment)
{
    if (n < 2)
        throw ContractViolation("random_feasible_instance: n must be >= 2");
    if (m < n)
        throw ContractViolation("random_feasible_instance: m must be >= n");

    std::mt19937_64 rng(seed);
    Point x0(n);
    for (auto& v : x0)
        v = uniform(rng, 0.5, 1.5);

    DenseMatrix A(m, n);
    std::vector<double> b(m);
    double margin = *std::min_element(x0.begin(), x0.end());
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> row(n);
        do {
            for (auto& v : row)
                v = i == 0 ? uniform(rng, 0.5, 1.5) : uniform(rng, -1.0, 1.0);
        } while (vec::norm(row) < 0.1);
        for (std::size_t j = 0; j < n; ++j)
            A(i, j) = row[j];
        const double slack = uniform(rng, 0.25, 1.0);
        b[i] = vec::dot(row, x0) + slack;
        margin = std::min(margin, slack);
    }
    std::vector<double> c(n);
    for (auto& v : c)
        v = uniform(rng, -1.0, 1.0);

    LpInstance inst(std::move(A), std::move(b), std::move(c), false);
    return {augment ? augment_nonnegativity(inst) : std::move(inst), std::move(x0), margin};
}

namespace {

std::vector<double> read_numbers(const nlohmann::json& node, const std::string& field)
{
    if (!node.is_array())
        throw FormatError("field \"" + field + "\" must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number())
            throw FormatError("field \"" + field + "\"[" + std::to_string(i) + "] is not a number");
        out.push_back(node[i].get<double>());
    }
    return out;
}

LpInstance read_base(const nlohmann::json& node, std::uint64_t seed)
{
    if (node.is_object() && node.contains("generate")) {
        const auto& gen = node.at("generate");
        if (!gen.is_object() || !gen.contains("n") || !gen.contains("m") || !gen.at("n").is_number_unsigned() ||
            !gen.at("m").is_number_unsigned())
            throw FormatError("field \"base.generate\" must hold unsigned integers \"n\" and \"m\"");
        try {
            return random_feasible_instance(gen.at("n").get<std::size_t>(), gen.at("m").get<std::size_t>(), seed,
                                            false)
                .instance;
        } catch (const ContractViolation& e) {
            throw FormatError(std::string("field \"base.generate\": ") + e.what());
        }
    }
    try {
        return instance_from_json(node);
    } catch (const FormatError& e) {
        throw FormatError(std::string("field \"base\": ") + e.what());
    }
}

} // namespace

ScenarioDocument scenario_from_json(const nlohmann::json& doc, std::uint64_t seed)
{
    if (!doc.is_object())
        throw FormatError("scenario must be a JSON object");
    if (!doc.contains("kind") || !doc.at("kind").is_string())
        throw FormatError("missing or non-string field \"kind\"");
    if (!doc.contains("base"))
        throw FormatError("missing field \"base\"");

    const std::string kind = doc.at("kind").get<std::string>();
    LpInstance base = read_base(doc.at("base"), seed);

    bool augment = true;
    if (doc.contains("augment_nonnegativity")) {
        if (!doc.at("augment_nonnegativity").is_boolean())
            throw FormatError("field \"augment_nonnegativity\" must be a boolean");
        augment = doc.at("augment_nonnegativity").get<bool>();
    }

    std::optional<std::int64_t> L;
    if (doc.contains("L")) {
        const auto& node = doc.at("L");
        if (!node.is_number_integer() || node.get<std::int64_t>() < 1)
            throw FormatError("field \"L\" must be a positive integer");
        L = node.get<std::int64_t>();
    }

    std::optional<double> s;
    if (doc.contains("s")) {
        const auto& node = doc.at("s");
        if (!node.is_number() || !(node.get<double>() > 0.0) || !std::isfinite(node.get<double>()))
            throw FormatError("field \"s\" must be a positive number");
        s = node.get<double>();
    }

    std::optional<Point> z0;
    if (doc.contains("z0")) {
        z0 = read_numbers(doc.at("z0"), "z0");
        if (z0->size() != base.n())
            throw FormatError("field \"z0\" has length " + std::to_string(z0->size()) + ", expected " +
                              std::to_string(base.n()));
    }

    auto build = [&]() -> Scenario {
        if (kind == "static")
            return Scenario::make_static(base, augment);
        if (kind == "translation") {
            if (!doc.contains("d"))
                throw FormatError("missing field \"d\" for translation scenario");
            auto d = read_numbers(doc.at("d"), "d");
            if (d.size() != base.n())
                throw FormatError("field \"d\" has length " + std::to_string(d.size()) + ", expected " +
                                  std::to_string(base.n()));
            return Scenario::make_translation(base, std::move(d), augment);
        }
        if (kind == "piecewise") {
            if (!doc.contains("schedule") || !doc.at("schedule").is_array())
                throw FormatError("missing or non-array field \"schedule\" for piecewise scenario");
            std::vector<ScheduleEntry> schedule;
            const auto& sched = doc.at("schedule");
            for (std::size_t i = 0; i < sched.size(); ++i) {
                const std::string where = "schedule[" + std::to_string(i) + "]";
                const auto& e = sched[i];
                if (!e.is_object() || !e.contains("t") || !e.at("t").is_number())
                    throw FormatError("field \"" + where + ".t\" must be a number");
                if (!e.contains("instance"))
                    throw FormatError("missing field \"" + where + ".instance\"");
                try {
                    schedule.push_back({e.at("t").get<double>(), instance_from_json(e.at("instance"))});
                } catch (const FormatError& err) {
                    throw FormatError("field \"" + where + ".instance\": " + err.what());
                }
            }
            try {
                return Scenario::make_piecewise(base, std::move(schedule), augment);
            } catch (const ContractViolation& err) {
                throw FormatError(std::string("field \"schedule\": ") + err.what());
            }
        }
        throw FormatError("field \"kind\" must be one of static, translation, piecewise; got \"" + kind + "\"");
    };

    return {build(), L, s, std::move(z0)};
}

} // namespace nslp

#pragma once

// Experiment runner: executes a method over a grid schedule (two-grid) or an
// adaptive loop, compares against the reference solution and renders CSV.

#include "../adaptive.hpp"
#include "../marking.hpp"
#include "../mesh_io.hpp"
#include "../two_grid.hpp"
#include "reference.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppreig::harness {

enum class Method { A1, A2, TG, A3, A4 };

inline Method parse_method(const std::string& s)
{
    if (s == "A1") return Method::A1;
    if (s == "A2") return Method::A2;
    if (s == "TG") return Method::TG;
    if (s == "A3") return Method::A3;
    if (s == "A4") return Method::A4;
    throw std::invalid_argument("unknown method '" + s + "' (expected A1, A2, TG, A3 or A4)");
}

inline std::string to_string(Method m)
{
    constexpr const char* names[] = {"A1", "A2", "TG", "A3", "A4"};
    return names[static_cast<int>(m)];
}

inline bool is_adaptive(Method m) { return m == Method::A3 || m == Method::A4; }

/// One two-grid step. On structured meshes these are cell counts per unit
/// length (H = 1/coarse); with a base mesh they are regular-refinement levels.
struct GridStep {
    int coarse = 0;
    int fine = 0;
    bool operator==(const GridStep&) const = default;
};

struct ExperimentConfig {
    Problem problem = Problem::square_laplace;
    Method method = Method::A1;
    std::vector<GridStep> schedule;
    std::vector<int> indices{1};
    double theta = 0.4;
    double eps = 1e-10;
    int max_levels = 25;
    /// Generator parameter of the adaptive start mesh (see initial_mesh).
    int initial_n = 8;
    /// Optional node/ele prefix replacing the structured meshes.
    std::string base_mesh;
    /// In-memory base mesh, takes precedence over base_mesh.
    MeshPtr base;
    std::string output;

    void validate() const
    {
        if (is_adaptive(method)) {
            if (!(theta >= 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in [0, 1)");
            if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
            if (max_levels < 1) throw std::invalid_argument("max-levels must be >= 1");
            if (indices != std::vector<int>{1})
                throw std::invalid_argument("adaptive methods approximate the first eigenpair only");
            if (!base && base_mesh.empty() && initial_n < 1) throw std::invalid_argument("initial mesh size must be >= 1");
            return;
        }
        if (schedule.empty()) throw std::invalid_argument("schedule must not be empty");
        if (indices.empty()) throw std::invalid_argument("index list must not be empty");
        for (int i : indices)
            if (i < 1) throw std::invalid_argument("eigenvalue indices are 1-based");
        const bool levels = base || !base_mesh.empty();
        for (const auto& s : schedule) {
            if (levels ? (s.coarse < 0 || s.fine < s.coarse) : (s.coarse < 1 || s.fine < s.coarse))
                throw std::invalid_argument("schedule step " + std::to_string(s.coarse) + ":" +
                                            std::to_string(s.fine) + " is not coarse-to-fine");
            if (!levels && s.fine % s.coarse != 0)
                throw std::invalid_argument("fine grid must nest in the coarse grid");
            if (!levels) {
                int r = s.fine / s.coarse;
                while (r % 2 == 0) r /= 2;
                if (r != 1) throw std::invalid_argument("fine/coarse ratio must be a power of two");
            }
        }
    }
};

/**
 * Parses "1/4:1/16,1/8:1/64" (mesh widths) or "0:2,1:4" (refinement levels,
 * when levels is set).
 */
inline std::vector<GridStep> parse_schedule(const std::string& text, bool levels = false)
{
    auto parse_width = [levels](const std::string& tok) {
        try {
            if (levels) {
                std::size_t used = 0;
                const int v = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                return v;
            }
            const auto slash = tok.find('/');
            if (slash == std::string::npos || tok.substr(0, slash) != "1")
                throw std::invalid_argument(tok);
            std::size_t used = 0;
            const int v = std::stoi(tok.substr(slash + 1), &used);
            if (used != tok.size() - slash - 1 || v < 1) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("bad schedule entry '" + tok + "'" +
                                        (levels ? " (expected an integer level)" : " (expected 1/n)"));
        }
    };
    std::vector<GridStep> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("bad schedule step '" + item + "' (expected H:h)");
        out.push_back({parse_width(item.substr(0, colon)), parse_width(item.substr(colon + 1))});
    }
    if (out.empty()) throw std::invalid_argument("empty schedule");
    return out;
}

/// Adaptive start mesh: unit square n x n, L-shape with n cells per unit,
/// oscillator box with n x n cells.
inline Mesh initial_mesh(Problem p, int n)
{
    switch (p) {
    case Problem::square_laplace: return generate_uniform_square(n);
    case Problem::lshape_laplace: return generate_lshape(n);
    case Problem::harmonic_oscillator: return generate_uniform_rectangle(-5.0, 5.0, -5.0, 5.0, n, n);
    }
    throw std::invalid_argument("initial_mesh: unknown problem");
}

struct TwoGridRow {
    int index = 1;
    double coarse_h = 0.0;
    double fine_h = 0.0;
    int coarse_vertices = 0;
    int fine_vertices = 0;
    double lambda = 0.0;
    double error = 0.0;
    std::optional<double> order;
    std::optional<double> eigenfunction_error;
    std::optional<double> eigenfunction_order;
    /// Empty when the row completed.
    std::string diagnostic;
};

struct AdaptiveRow {
    int level = 0;
    int vertices = 0;
    double rayleigh = 0.0;
    double enhanced = 0.0;
    double eta2 = 0.0;
    double kappa = 0.0;
    double rayleigh_error = 0.0;
    double enhanced_error = 0.0;
    std::optional<double> gradient_error;
    std::optional<double> recovered_error;
};

struct RunResult {
    ExperimentConfig config;
    double reference_value = 0.0;
    std::vector<TwoGridRow> two_grid_rows;
    std::vector<AdaptiveRow> adaptive_rows;
    std::optional<AdaptiveTrace> trace;
    std::vector<std::string> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

namespace detail {

inline std::string fixed12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

inline std::string sci(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

inline std::string general(double v, int digits = 10)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline std::string opt(const std::optional<double>& v, std::string (*fmt)(double))
{
    return v ? fmt(*v) : std::string();
}

inline std::string order_text(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string csv_safe(std::string s)
{
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

/// Scales u (sign and magnitude) to unit L2 norm, aligned with the reference.
inline double l2_alignment(const FeFunction& u, const ExactFunction& ref, const Coefficients& coeff)
{
    const double l2 = norms(u, coeff).l2;
    const double sign = inner_product(u, ref.value) < 0.0 ? -1.0 : 1.0;
    return sign / l2;
}

inline std::pair<MeshPtr, MeshPtr> two_grid_meshes(const ExperimentConfig& config, const MeshPtr& base,
                                                   const GridStep& step)
{
    if (base) {
        auto coarse = std::make_shared<const Mesh>(regular_refine(*base, step.coarse));
        auto fine = std::make_shared<const Mesh>(regular_refine(*coarse, step.fine - step.coarse));
        return {coarse, fine};
    }
    auto coarse = std::make_shared<const Mesh>(structured_mesh(config.problem, step.coarse));
    int times = 0;
    for (int r = step.fine / step.coarse; r > 1; r /= 2) ++times;
    auto fine = std::make_shared<const Mesh>(regular_refine(*coarse, times));
    return {coarse, fine};
}

inline TwoGridMethod two_grid_method(Method m)
{
    switch (m) {
    case Method::A1: return TwoGridMethod::recovery_enhanced;
    case Method::A2: return TwoGridMethod::quadratic_fine;
    case Method::TG: return TwoGridMethod::baseline;
    default: throw std::invalid_argument("not a two-grid method");
    }
}

inline void fill_orders(std::vector<TwoGridRow>& rows)
{
    // Successive completed rows of the same index.
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!rows[k].diagnostic.empty()) continue;
        for (std::size_t j = k; j-- > 0;) {
            if (rows[j].index != rows[k].index) continue;
            if (!rows[j].diagnostic.empty()) break;
            const double scale_ratio = std::log(rows[j].fine_h / rows[k].fine_h);
            if (scale_ratio == 0.0) break;
            if (rows[j].error != 0.0 && rows[k].error != 0.0)
                rows[k].order = convergence_order(std::vector<double>{rows[j].error, rows[k].error},
                                                  std::vector<double>{rows[j].fine_h, rows[k].fine_h})[0];
            if (rows[j].eigenfunction_error && rows[k].eigenfunction_error && *rows[j].eigenfunction_error != 0.0 &&
                *rows[k].eigenfunction_error != 0.0)
                rows[k].eigenfunction_order =
                    std::log(*rows[j].eigenfunction_error / *rows[k].eigenfunction_error) / scale_ratio;
            break;
        }
    }
}

inline void run_two_grid_schedule(RunResult& result, const MeshPtr& base)
{
    const ExperimentConfig& config = result.config;
    const Coefficients coeff = coefficients(config.problem);
    for (int index : config.indices) {
        std::optional<ReferenceSolution> ref;
        try {
            ref = reference(config.problem, index);
        } catch (const std::exception& e) {
            result.diagnostics.push_back("i=" + std::to_string(index) + ": " + e.what());
        }
        for (const auto& step : config.schedule) {
            TwoGridRow row;
            row.index = index;
            try {
                if (!ref) throw std::runtime_error("no reference eigenvalue");
                const auto [coarse, fine] = two_grid_meshes(config, base, step);
                row.coarse_vertices = coarse->num_vertices();
                row.fine_vertices = fine->num_vertices();
                if (base) {
                    row.coarse_h = 1.0 / std::sqrt(static_cast<double>(row.coarse_vertices));
                    row.fine_h = 1.0 / std::sqrt(static_cast<double>(row.fine_vertices));
                } else {
                    row.coarse_h = 1.0 / step.coarse;
                    row.fine_h = 1.0 / step.fine;
                }
                const auto r = run_two_grid(two_grid_method(config.method), coarse, fine, coeff, index);
                row.lambda = r.enhanced_value;
                row.error = row.lambda - ref->eigenvalue;
                if (ref->multiplicity == 1 && ref->eigenfunction) {
                    // Both functions at unit L2 norm.
                    const ExactFunction exact = ref->eigenfunction->scaled(std::sqrt(ref->eigenvalue));
                    const double s = l2_alignment(r.fine_function, exact, coeff);
                    if (r.recovered) {
                        RecoveredGradient g = *r.recovered;
                        g.gx *= s;
                        g.gy *= s;
                        row.eigenfunction_error = recovered_gradient_error(g, exact.gradient, coeff);
                    } else {
                        const FeFunction u(r.fine_function.space, s * r.fine_function.values);
                        row.eigenfunction_error = norms(u, exact, coeff).gradient;
                    }
                }
            } catch (const std::exception& e) {
                row.diagnostic = e.what();
                result.diagnostics.push_back("i=" + std::to_string(index) + " H:h=" + std::to_string(step.coarse) +
                                             ":" + std::to_string(step.fine) + ": " + e.what());
            }
            result.two_grid_rows.push_back(std::move(row));
        }
    }
    fill_orders(result.two_grid_rows);
}

inline void run_adaptive(RunResult& result, const MeshPtr& base)
{
    const ExperimentConfig& config = result.config;
    const Coefficients coeff = coefficients(config.problem);
    try {
        const ReferenceSolution ref = reference(config.problem, 1);
        result.reference_value = ref.eigenvalue;
        const MeshPtr initial = base ? base : std::make_shared<const Mesh>(initial_mesh(config.problem, config.initial_n));
        AdaptiveOptions options;
        options.theta = config.theta;
        options.tolerance = config.eps;
        options.max_levels = config.max_levels;
        options.variant =
            config.method == Method::A3 ? AdaptiveVariant::inverse_step : AdaptiveVariant::shifted_inverse_step;
        AdaptiveTrace trace = adaptive_loop(initial, coeff, options);
        std::optional<ExactFunction> exact;
        if (ref.eigenfunction) exact = ref.eigenfunction->scaled(std::sqrt(ref.eigenvalue));
        for (const auto& s : trace.states) {
            AdaptiveRow row;
            row.level = s.level;
            row.vertices = s.dofs;
            row.rayleigh = s.rayleigh;
            row.enhanced = s.enhanced;
            row.eta2 = s.estimator.global_squared();
            row.rayleigh_error = s.rayleigh - ref.eigenvalue;
            row.enhanced_error = s.enhanced - ref.eigenvalue;
            row.kappa = row.rayleigh_error != 0.0 ? effectivity_index(s.estimator.global, ref.eigenvalue, s.rayleigh)
                                                  : std::nan("");
            if (exact) {
                const double sign = inner_product(s.u, exact->value) < 0.0 ? -1.0 : 1.0;
                RecoveredGradient g = s.recovered;
                g.gx *= sign;
                g.gy *= sign;
                row.recovered_error = recovered_gradient_error(g, exact->gradient, coeff);
                row.gradient_error = norms(FeFunction(s.u.space, sign * s.u.values), *exact, coeff).gradient;
            }
            result.adaptive_rows.push_back(row);
        }
        result.trace = std::move(trace);
    } catch (const std::exception& e) {
        result.diagnostics.push_back(std::string("adaptive run aborted: ") + e.what());
    }
}

} // namespace detail

/// Runs the experiment. Failing rows carry a diagnostic; the others still run.
inline RunResult run(const ExperimentConfig& config)
{
    config.validate();
    RunResult result;
    result.config = config;
    MeshPtr base = config.base;
    if (!base && !config.base_mesh.empty()) base = std::make_shared<const Mesh>(load_mesh(config.base_mesh));
    if (is_adaptive(config.method))
        detail::run_adaptive(result, base);
    else
        detail::run_two_grid_schedule(result, base);
    return result;
}

inline std::string to_csv(const RunResult& result)
{
    using namespace detail;
    std::ostringstream os;
    if (is_adaptive(result.config.method)) {
        os << "level,N,lambda_bar,lambda,eta2,kappa,lambda_bar_error,lambda_error,gradient_error,"
              "recovered_gradient_error\n";
        for (const auto& r : result.adaptive_rows)
            os << r.level << ',' << r.vertices << ',' << fixed12(r.rayleigh) << ',' << fixed12(r.enhanced) << ','
               << sci(r.eta2) << ',' << general(r.kappa, 6) << ',' << sci(r.rayleigh_error) << ','
               << sci(r.enhanced_error) << ',' << opt(r.gradient_error, sci) << ',' << opt(r.recovered_error, sci)
               << '\n';
        for (const auto& d : result.diagnostics) os << "# aborted: " << csv_safe(d) << '\n';
        return os.str();
    }
    os << "i,H,h,N_H,N_h,lambda,error,order,eigenfunction_error,eigenfunction_order,status\n";
    for (const auto& r : result.two_grid_rows) {
        os << r.index << ',' << general(r.coarse_h) << ',' << general(r.fine_h) << ',' << r.coarse_vertices << ','
           << r.fine_vertices << ',';
        if (r.diagnostic.empty())
            os << fixed12(r.lambda) << ',' << sci(r.error) << ',' << opt(r.order, order_text) << ','
               << opt(r.eigenfunction_error, sci) << ',' << opt(r.eigenfunction_order, order_text) << ",ok\n";
        else
            os << ",,,,,aborted: " << csv_safe(r.diagnostic) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Presets

inline std::vector<std::string> preset_names()
{
    return {"table1", "table2", "table3", "table4", "lshape", "oscillator", "unstructured"};
}

/**
 * Named experiment. Tables 1-3 use H = sqrt(h) up to h = 1/256 (extended
 * adds 1/32:1/1024); table4 uses H = h^(1/4).
 */
inline ExperimentConfig preset(const std::string& name, bool extended = false)
{
    ExperimentConfig c;
    const std::vector<GridStep> sqrt_schedule{{4, 16}, {8, 64}, {16, 256}};
    if (name == "table1" || name == "table2" || name == "table3") {
        c.problem = Problem::square_laplace;
        c.method = name == "table1" ? Method::A1 : name == "table2" ? Method::A2 : Method::TG;
        c.schedule = sqrt_schedule;
        if (extended) c.schedule.push_back({32, 1024});
        c.indices = {1, 2, 3};
    } else if (name == "table4") {
        c.problem = Problem::square_laplace;
        c.method = Method::A1;
        c.schedule = {{2, 16}, {4, 256}};
        if (extended) c.schedule.push_back({8, 4096});
    } else if (name == "lshape") {
        c.problem = Problem::lshape_laplace;
        c.method = Method::A3;
        c.initial_n = 8;
    } else if (name == "oscillator") {
        c.problem = Problem::harmonic_oscillator;
        c.method = Method::A3;
        c.initial_n = 16;
    } else if (name == "unstructured") {
        c.problem = Problem::square_laplace;
        c.method = Method::A1;
        c.base = std::make_shared<const Mesh>(generate_perturbed_square(4, 0.2, 2014));
        c.schedule = {{0, 2}, {1, 4}, {2, 6}};
        c.indices = {1, 2, 3};
    } else {
        throw std::invalid_argument("unknown preset '" + name + "'");
    }
    return c;
}

} // namespace ppreig::harness

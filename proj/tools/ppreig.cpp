// ppreig: command-line front end for the experiment harness.
//
//   ppreig run   --preset table1 --out table1.csv
//   ppreig run   --problem lshape_laplace --method A3 --theta 0.4 --plot lshape.dat
//   ppreig mesh  generate --kind lshape --n 4 --out lshape4
//   ppreig table table1.csv

#include <ppreig/harness/experiment.hpp>
#include <ppreig/harness/plot.hpp>
#include <ppreig/mesh_io.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace ppreig;

namespace {

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << text;
}

std::vector<int> parse_indices(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad index '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string format_table(std::istream& in)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#')
            comments.push_back(line);
        else
            rows.push_back(split(line, ','));
    }
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        if (width.size() < r.size()) width.resize(r.size(), 0);
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::ostringstream os;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        std::string out;
        for (std::size_t c = 0; c < rows[k].size(); ++c) {
            if (c) out += "  ";
            out += std::string(width[c] - rows[k][c].size(), ' ') + rows[k][c];
        }
        os << out << '\n';
        if (k == 0) {
            const std::size_t total = std::accumulate(width.begin(), width.end(), std::size_t{0}) +
                                      2 * (width.empty() ? 0 : width.size() - 1);
            os << std::string(total, '-') << '\n';
        }
    }
    for (const auto& c : comments) os << c << '\n';
    return os.str();
}

Mesh generate(const std::string& kind, int n, double amplitude, std::uint64_t seed)
{
    if (kind == "square") return generate_uniform_square(n);
    if (kind == "lshape") return generate_lshape(n);
    if (kind == "box") return generate_uniform_rectangle(-5.0, 5.0, -5.0, 5.0, n, n);
    if (kind == "perturbed") return generate_perturbed_square(n, amplitude, seed);
    throw std::invalid_argument("unknown mesh kind '" + kind + "'");
}

std::string segments(const Mesh& mesh)
{
    std::ostringstream os;
    os.precision(17);
    os << "# x0 y0 x1 y1 boundary\n";
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto& key = mesh.edges()[e];
        const Point& a = mesh.vertex(key[0]);
        const Point& b = mesh.vertex(key[1]);
        os << a.x() << ' ' << a.y() << ' ' << b.x() << ' ' << b.y() << ' ' << (mesh.is_boundary_edge(e) ? 1 : 0)
           << '\n';
    }
    return os.str();
}

std::string summary(const Mesh& mesh)
{
    std::ostringstream os;
    os << "vertices " << mesh.num_vertices() << '\n'
       << "triangles " << mesh.num_triangles() << '\n'
       << "edges " << mesh.num_edges() << '\n'
       << "boundary_edges " << mesh.boundary_edges().size() << '\n'
       << "area " << mesh.total_area() << '\n'
       << "max_edge " << mesh.max_edge_length() << '\n'
       << "min_angle_deg " << mesh.min_angle() * 180.0 / std::numbers::pi << '\n'
       << "conforming " << (is_conforming(mesh) ? "yes" : "no") << '\n';
    return os.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-grid and adaptive eigensolvers with gradient recovery"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run an experiment and write CSV");
    std::string preset_name, problem = "square_laplace", method = "A1", schedule, index = "1", out, plot, base_mesh;
    double theta = 0.4, eps = 1e-10;
    int max_levels = 25, initial_n = 8;
    bool extended = false;
    run_cmd->add_option("--preset", preset_name, "named experiment")
        ->check(CLI::IsMember(harness::preset_names()));
    run_cmd->add_flag("--extended", extended, "append the h=1/1024 rows to table presets");
    auto* o_problem = run_cmd->add_option("--problem", problem, "square_laplace, lshape_laplace or harmonic_oscillator");
    auto* o_method = run_cmd->add_option("--method", method, "A1, A2, TG, A3 or A4");
    auto* o_schedule = run_cmd->add_option("--schedule", schedule, "H:h pairs, e.g. 1/4:1/16,1/8:1/64 (levels with --mesh)");
    auto* o_theta = run_cmd->add_option("--theta", theta, "bulk fraction for marking");
    auto* o_eps = run_cmd->add_option("--eps", eps, "adaptive stop: eta^2 < eps");
    auto* o_levels = run_cmd->add_option("--max-levels", max_levels, "adaptive level cap");
    auto* o_index = run_cmd->add_option("--index", index, "comma-separated eigenvalue indices");
    auto* o_initial = run_cmd->add_option("--initial-n", initial_n, "adaptive start mesh size");
    auto* o_mesh = run_cmd->add_option("--mesh", base_mesh, "node/ele prefix of a base mesh");
    run_cmd->add_option("--out", out, "CSV path (stdout if omitted)");
    run_cmd->add_option("--plot", plot, "plot-data path for adaptive runs");

    // mesh
    auto* mesh_cmd = app.add_subcommand("mesh", "generate, refine or export meshes");
    mesh_cmd->require_subcommand(1);
    std::string kind = "square", in_prefix, out_prefix, mode = "regular", format = "summary";
    int n = 4, times = 1;
    double amplitude = 0.2;
    std::uint64_t seed = 2014;
    auto* gen_cmd = mesh_cmd->add_subcommand("generate", "write a generated mesh");
    gen_cmd->add_option("--kind", kind, "square, lshape, box or perturbed")
        ->check(CLI::IsMember({"square", "lshape", "box", "perturbed"}));
    gen_cmd->add_option("--n", n, "cells per unit length (box: per side)");
    gen_cmd->add_option("--amplitude", amplitude, "vertex jitter for perturbed meshes, fraction of h");
    gen_cmd->add_option("--seed", seed, "seed for perturbed meshes");
    gen_cmd->add_option("--out", out_prefix, "output prefix")->required();
    auto* ref_cmd = mesh_cmd->add_subcommand("refine", "refine a mesh uniformly");
    ref_cmd->add_option("--in", in_prefix, "input prefix")->required();
    ref_cmd->add_option("--times", times, "refinement steps");
    ref_cmd->add_option("--mode", mode, "regular (red) or bisect (every element)")
        ->check(CLI::IsMember({"regular", "bisect"}));
    ref_cmd->add_option("--out", out_prefix, "output prefix")->required();
    auto* exp_cmd = mesh_cmd->add_subcommand("export", "print mesh statistics or edge segments");
    exp_cmd->add_option("--in", in_prefix, "input prefix")->required();
    exp_cmd->add_option("--format", format, "summary or segments")->check(CLI::IsMember({"summary", "segments"}));
    exp_cmd->add_option("--out", out, "output path (stdout if omitted)");

    // table
    auto* table_cmd = app.add_subcommand("table", "format CSV as aligned text");
    std::string table_in = "-";
    table_cmd->add_option("file", table_in, "CSV file, - for stdin");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            harness::ExperimentConfig config;
            if (!preset_name.empty()) config = harness::preset(preset_name, extended);
            if (o_problem->count() || preset_name.empty()) config.problem = harness::parse_problem(problem);
            if (o_method->count() || preset_name.empty()) config.method = harness::parse_method(method);
            if (o_mesh->count()) {
                config.base.reset();
                config.base_mesh = base_mesh;
            }
            if (o_schedule->count())
                config.schedule = harness::parse_schedule(schedule, config.base || !config.base_mesh.empty());
            if (o_index->count()) config.indices = parse_indices(index);
            if (o_theta->count()) config.theta = theta;
            if (o_eps->count()) config.eps = eps;
            if (o_levels->count()) config.max_levels = max_levels;
            if (o_initial->count()) config.initial_n = initial_n;
            if (harness::is_adaptive(config.method) && !o_index->count()) config.indices = {1};

            const auto result = harness::run(config);
            write_text(out, harness::to_csv(result));
            if (!plot.empty()) {
                if (!result.trace) throw std::runtime_error("--plot needs a completed adaptive run");
                write_text(plot, harness::plot_data(*result.trace, result.reference_value));
            }
            for (const auto& d : result.diagnostics) std::cerr << "ppreig: " << d << '\n';
            return result.ok() ? 0 : 1;
        }
        if (*mesh_cmd) {
            if (*gen_cmd) {
                save_mesh(generate(kind, n, amplitude, seed), out_prefix);
            } else if (*ref_cmd) {
                Mesh mesh = load_mesh(in_prefix);
                for (int k = 0; k < times; ++k) {
                    if (mode == "regular") {
                        mesh = regular_refine(mesh);
                    } else {
                        std::vector<int> all(static_cast<std::size_t>(mesh.num_triangles()));
                        std::iota(all.begin(), all.end(), 0);
                        mesh = bisect(mesh, all);
                    }
                }
                save_mesh(mesh, out_prefix);
            } else {
                const Mesh mesh = load_mesh(in_prefix);
                write_text(out, format == "segments" ? segments(mesh) : summary(mesh));
            }
            return 0;
        }
        if (*table_cmd) {
            if (table_in == "-") {
                std::cout << format_table(std::cin);
            } else {
                std::ifstream in(table_in);
                if (!in) throw std::runtime_error("cannot open " + table_in);
                std::cout << format_table(in);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "ppreig: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

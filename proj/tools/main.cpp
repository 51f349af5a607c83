// rotarn command-line tool: assemble rotor models, run modal and
// critical-speed analyses through the reduction methods, compare
// method accuracy, and emit Campbell-diagram sweep data.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rotarn/analysis.hpp"
#include "rotarn/matrix_market.hpp"
#include "rotarn/qep.hpp"
#include "rotarn/reduction.hpp"
#include "rotarn/rotor.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rotarn;

namespace {

constexpr const char* kVersion = "1.0.0";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_range(const std::string& text) {
    // "a:b:step" inclusive grid
    double a = 0.0, b = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0) {
        throw UsageError("bad range '" + text + "', expected start:stop:step with step > 0");
    }
    std::vector<double> grid;
    for (double x = a; x <= b + 0.5 * step; x += step) grid.push_back(x);
    return grid;
}

std::vector<int> parse_int_range(const std::string& text) {
    std::vector<int> out;
    for (double x : parse_range(text)) out.push_back(static_cast<int>(x + 0.5));
    return out;
}

void write_manifest(const fs::path& out_dir, const std::string& command, json extra) {
    json manifest;
    manifest["tool"] = "rotarn";
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["seed"] = 0;
    const char* threads = std::getenv("ROTARN_THREADS");
    manifest["threads"] = threads ? std::atoi(threads) : 1;
    manifest["output_dir"] = out_dir.string();
    manifest.update(extra);
    std::ofstream f(out_dir / "manifest.json");
    f << manifest.dump(2) << "\n";
}

SystemMatrices load_system(const fs::path& dir) {
    std::ifstream meta_in(dir / "metadata.json");
    if (!meta_in) throw UsageError("cannot open " + (dir / "metadata.json").string());
    json meta = json::parse(meta_in);
    SystemMatrices sys;
    sys.alpha = meta.at("alpha").get<double>();
    sys.beta = meta.at("beta").get<double>();
    sys.dof = meta.at("dof").get<int>();
    auto block = [&](const char* name) -> RealMatrix {
        ComplexMatrix m = read_matrix_market((dir / (std::string(name) + ".mtx")).string());
        return m.real();
    };
    sys.M0 = block("M0");
    sys.C1 = block("C1");
    sys.K0 = block("K0");
    sys.K1 = block("K1");
    sys.Mr = block("Mr");
    sys.Kr = block("Kr");
    sys.Cb = block("Cb");
    return sys;
}

QuadraticPencil make_pencil(const SystemMatrices& sys, const std::string& kind,
                            double omega, double n_ratio) {
    if (kind == "modal") return modal_pencil(sys, omega);
    if (kind == "critical") return critical_speed_pencil(sys, n_ratio);
    throw UsageError("unknown analysis kind '" + kind + "'");
}

std::vector<EigenPair> solve_with(const QuadraticPencil& pencil, const std::string& method,
                                  int m) {
    if (method == "exact") return exact_solve(pencil);
    ReductionSpec spec(method_from_name(method), m);
    return run_reduction(pencil, spec).eigenpairs;
}

json eigenvalue_json(const std::vector<Complex>& values) {
    json arr = json::array();
    for (const Complex& s : values) arr.push_back({s.real(), s.imag()});
    return arr;
}

int cmd_model_build(const std::string& config_path, const fs::path& out_dir) {
    RotorModel model = load_model(config_path);
    SystemMatrices sys = assemble(model);
    fs::create_directories(out_dir);
    auto save = [&](const char* name, const RealMatrix& m) {
        write_matrix_market((out_dir / (std::string(name) + ".mtx")).string(),
                            m.cast<Complex>());
    };
    save("M0", sys.M0);
    save("C1", sys.C1);
    save("K0", sys.K0);
    save("K1", sys.K1);
    save("Mr", sys.Mr);
    save("Kr", sys.Kr);
    save("Cb", sys.Cb);
    json meta = {{"name", model.name},
                 {"dof", sys.dof},
                 {"alpha", sys.alpha},
                 {"beta", sys.beta}};
    std::ofstream(out_dir / "metadata.json") << meta.dump(2) << "\n";
    write_manifest(out_dir, "model build", {{"config", config_path}});
    std::cout << "assembled " << model.name << ": " << sys.dof << " dof -> " << out_dir
              << "\n";
    return 0;
}

int cmd_solve(const fs::path& dir, const std::string& kind, double omega, double n_ratio,
              const std::string& method, int m, int k, const fs::path& out_dir) {
    SystemMatrices sys = load_system(dir);
    QuadraticPencil pencil = make_pencil(sys, kind, omega, n_ratio);
    std::vector<EigenPair> pairs = solve_with(pencil, method, m);
    if (static_cast<int>(pairs.size()) > k) pairs.resize(k);

    fs::create_directories(out_dir);
    std::ofstream csv(out_dir / "eigenvalues.csv");
    csv.precision(12);
    json result;
    result["kind"] = kind;
    result["method"] = method;
    result["eigenvalues"] = json::array();
    if (kind == "modal") {
        csv << "index,re,im,natural_frequency,damped_frequency,damping_ratio,residual\n";
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            ModalQuantities q = modal_quantities(pairs[i].s);
            csv << i + 1 << ',' << q.s.real() << ',' << q.s.imag() << ',' << q.natural
                << ',' << q.damped << ',' << q.damping_ratio << ',' << pairs[i].residual
                << "\n";
            result["eigenvalues"].push_back({q.s.real(), q.s.imag()});
        }
    } else {
        std::vector<Complex> omegas;
        for (const EigenPair& p : pairs) omegas.push_back(p.s);
        std::vector<CriticalSpeedResult> speeds = critical_speed_filter(omegas);
        csv << "index,re,im,accepted,critical_speed\n";
        for (std::size_t i = 0; i < speeds.size(); ++i) {
            csv << i + 1 << ',' << speeds[i].omega.real() << ',' << speeds[i].omega.imag()
                << ',' << (speeds[i].accepted ? 1 : 0) << ',' << speeds[i].speed << "\n";
            result["eigenvalues"].push_back(
                {speeds[i].omega.real(), speeds[i].omega.imag()});
        }
    }
    std::ofstream(out_dir / "result.json") << result.dump(2) << "\n";
    write_manifest(out_dir, "solve",
                   {{"input", dir.string()},
                    {"kind", kind},
                    {"method", method},
                    {"omega", omega},
                    {"n", n_ratio},
                    {"m", m},
                    {"k", k}});
    std::cout << "wrote " << pairs.size() << " eigenvalues to " << out_dir << "\n";
    return 0;
}

void write_report(const ComparisonReport& report, const fs::path& out_dir) {
    std::ofstream errors(out_dir / "errors.csv");
    errors.precision(12);
    errors << "method,m,error,seconds,failed,message\n";
    for (const MethodOutcome& row : report.rows) {
        errors << method_name(row.method) << ',' << row.m << ',' << row.error << ','
               << row.elapsed_seconds << ',' << (row.failed ? 1 : 0) << ',' << row.message
               << "\n";
    }
    std::ofstream scores(out_dir / "scores.csv");
    scores << "method,rank1,rank2,rank3,rank4,rank5,score\n";
    for (const auto& [method, hist] : report.rank_histograms) {
        scores << method_name(method);
        for (std::size_t i = 0; i < 5; ++i)
            scores << ',' << (i < hist.size() ? hist[i] : 0);
        scores << ',' << report.scores.at(method) << "\n";
    }
}

int cmd_compare_tables(const std::string& tables_path, const fs::path& out_dir) {
    std::ifstream in(tables_path);
    if (!in) throw UsageError("cannot open " + tables_path);
    json doc = json::parse(in);
    fs::create_directories(out_dir);
    json summary;
    for (const std::string dataset : {"modal", "critical"}) {
        if (!doc.contains(dataset)) continue;
        const json& block = doc[dataset];
        auto values = [&](const std::string& name) {
            std::vector<Complex> out;
            for (const auto& pair : block.at(name)) {
                out.emplace_back(pair[0].get<double>(), pair[1].get<double>());
            }
            return out;
        };
        std::vector<std::pair<Method, std::vector<Complex>>> columns;
        for (const std::string name : {"arnoldi", "soar", "toar", "lqar", "qar", "tgsar"}) {
            if (block.contains(name)) columns.emplace_back(method_from_name(name), values(name));
        }
        ComparisonReport report =
            compare_eigenvalue_lists(values("exact"), columns, 10);
        for (const MethodOutcome& row : report.rows) {
            summary[dataset][method_name(row.method)] = row.error;
            std::cout << dataset << ' ' << method_name(row.method) << " error " << row.error
                      << "\n";
        }
    }
    std::ofstream(out_dir / "replay_errors.json") << summary.dump(2) << "\n";
    write_manifest(out_dir, "compare --from-tables", {{"tables", tables_path}});
    return 0;
}

int cmd_compare(const fs::path& dir, const std::string& kind, double omega, double n_ratio,
                const std::vector<std::string>& methods, const std::string& m_range, int m,
                int k, const fs::path& out_dir) {
    SystemMatrices sys = load_system(dir);
    QuadraticPencil pencil = make_pencil(sys, kind, omega, n_ratio);
    std::vector<EigenPair> exact = exact_solve(pencil);

    std::vector<int> ms = m_range.empty() ? std::vector<int>{m} : parse_int_range(m_range);
    std::vector<ReductionSpec> specs;
    for (int mi : ms) {
        for (const std::string& name : methods) {
            specs.emplace_back(method_from_name(name), mi);
        }
    }
    ComparisonReport report = compare_methods(pencil, specs, k, exact);
    fs::create_directories(out_dir);
    write_report(report, out_dir);
    write_manifest(out_dir, "compare",
                   {{"input", dir.string()},
                    {"kind", kind},
                    {"omega", omega},
                    {"n", n_ratio},
                    {"methods", methods},
                    {"m_values", ms},
                    {"k", k}});
    std::cout << "wrote comparison over " << ms.size() << " subspace sizes to " << out_dir
              << "\n";
    return 0;
}

int cmd_campbell(const fs::path& dir, const std::string& omega_grid,
                 const std::vector<double>& n_list, int k, const std::string& method, int m,
                 const fs::path& out_dir) {
    SystemMatrices sys = load_system(dir);
    ModalSolver solver = [&](const QuadraticPencil& pencil) {
        return solve_with(pencil, method, m);
    };
    CampbellSweep sweep = campbell_sweep(sys, parse_range(omega_grid), n_list, k, solver);

    fs::create_directories(out_dir);
    std::ofstream freq(out_dir / "frequencies.csv");
    freq.precision(12);
    freq << "omega,mode,damped_frequency\n";
    for (const CampbellPoint& p : sweep.points) {
        freq << p.omega << ',' << p.mode + 1 << ',' << p.damped << "\n";
    }
    std::ofstream cross(out_dir / "crossings.csv");
    cross.precision(12);
    cross << "n,mode,omega,frequency\n";
    for (const CampbellCrossing& c : sweep.crossings) {
        cross << c.n_ratio << ',' << c.mode + 1 << ',' << c.omega << ',' << c.frequency
              << "\n";
    }
    write_manifest(out_dir, "campbell",
                   {{"input", dir.string()},
                    {"omega_grid", omega_grid},
                    {"n_list", n_list},
                    {"k", k},
                    {"method", method},
                    {"m", m}});
    std::cout << "wrote " << sweep.points.size() << " frequency points, "
              << sweep.crossings.size() << " crossings to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotor-dynamics quadratic eigenvalue reduction toolkit"};
    app.set_version_flag("--version", std::string("rotarn ") + kVersion);
    app.require_subcommand(1);

    // model build
    CLI::App* model = app.add_subcommand("model", "Rotor model operations");
    model->require_subcommand(1);
    CLI::App* build = model->add_subcommand("build", "Assemble FE blocks from a config");
    std::string config_path, out_dir = "out";
    build->add_option("config", config_path, "Rotor config file (JSON)")->required();
    build->add_option("-o,--out", out_dir, "Output directory");

    // shared solve/compare/campbell options
    std::string matrices_dir, kind = "modal", method = "tgsar";
    double omega = 0.0, n_ratio = 1.0;
    int m = 10, k = 10;

    CLI::App* solve = app.add_subcommand("solve", "Solve one modal or critical-speed QEP");
    std::string solve_dir, solve_out = "out";
    solve->add_option("matrices", solve_dir, "Directory from 'model build'")->required();
    solve->add_option("--kind", kind, "modal|critical")
        ->check(CLI::IsMember({"modal", "critical"}));
    solve->add_option("--omega", omega, "Rotation speed (rad/s, modal kind)");
    solve->add_option("--n", n_ratio, "Excitation ratio (critical kind)");
    solve->add_option("--method", method,
                      "exact|arnoldi|soar|toar|lqar|qar|tgsar|tgsar1|tgsar2");
    solve->add_option("--m", m, "Subspace order")->check(CLI::PositiveNumber);
    solve->add_option("--k", k, "Eigenvalues to keep")->check(CLI::PositiveNumber);
    solve->add_option("-o,--out", solve_out, "Output directory");

    CLI::App* compare = app.add_subcommand("compare", "Compare reduction methods");
    std::string compare_dir, compare_out = "out", m_range, tables_path;
    std::vector<std::string> methods = {"arnoldi", "soar", "toar", "lqar", "qar", "tgsar"};
    compare->add_option("matrices", compare_dir, "Directory from 'model build'");
    compare->add_option("--kind", kind, "modal|critical")
        ->check(CLI::IsMember({"modal", "critical"}));
    compare->add_option("--omega", omega, "Rotation speed (rad/s, modal kind)");
    compare->add_option("--n", n_ratio, "Excitation ratio (critical kind)");
    compare->add_option("--methods", methods, "Methods to compare");
    compare->add_option("--m", m, "Single subspace order")->check(CLI::PositiveNumber);
    compare->add_option("--m-range", m_range, "Subspace order sweep start:stop:step");
    compare->add_option("--k", k, "Eigenvalues compared")->check(CLI::PositiveNumber);
    compare->add_option("--from-tables", tables_path,
                        "Replay stored eigenvalue lists instead of running methods");
    compare->add_option("-o,--out", compare_out, "Output directory");

    CLI::App* campbell = app.add_subcommand("campbell", "Campbell diagram sweep");
    std::string campbell_dir, campbell_out = "out", grid = "0:1000:100";
    std::vector<double> n_list = {1.0};
    campbell->add_option("matrices", campbell_dir, "Directory from 'model build'")
        ->required();
    campbell->add_option("--omega-grid", grid, "Speed grid start:stop:step");
    campbell->add_option("--n-list", n_list, "Excitation ratios");
    campbell->add_option("--k", k, "Modes tracked")->check(CLI::PositiveNumber);
    campbell->add_option("--method", method, "exact or a reduction method");
    campbell->add_option("--m", m, "Subspace order for reduced solves")
        ->check(CLI::PositiveNumber);
    campbell->add_option("-o,--out", campbell_out, "Output directory");

    try {
        app.parse(argc, argv);
        if (build->parsed()) return cmd_model_build(config_path, out_dir);
        if (solve->parsed()) {
            return cmd_solve(solve_dir, kind, omega, n_ratio, method, m, k, solve_out);
        }
        if (compare->parsed()) {
            if (!tables_path.empty()) return cmd_compare_tables(tables_path, compare_out);
            if (compare_dir.empty()) {
                throw UsageError("compare needs a matrices directory or --from-tables");
            }
            return cmd_compare(compare_dir, kind, omega, n_ratio, methods, m_range, m, k,
                               compare_out);
        }
        if (campbell->parsed()) {
            return cmd_campbell(campbell_dir, grid, n_list, k, method, m, campbell_out);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

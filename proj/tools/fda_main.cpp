// Command-line front end: simulation, knot selection, FPCA, basis export, and
// the benchmark harness, all exchanging data through the CSV formats of csv.hpp.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>

#include "CLI11.hpp"
#include "json.hpp"

#include "fda/basis.hpp"
#include "fda/bench.hpp"
#include "fda/csv.hpp"
#include "fda/ddk.hpp"
#include "fda/errors.hpp"
#include "fda/fpca.hpp"
#include "fda/rng.hpp"
#include "fda/simulate.hpp"
#include "fda/version.hpp"

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw fda::ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw fda::ConfigError(std::string("malformed JSON config: ") + e.what());
    }
}

fda::Grid make_grid(int size, const std::string& layout) {
    if (layout == "midpoint") return fda::Grid::uniform_midpoint(size);
    if (layout == "left") return fda::Grid::uniform(size);
    if (layout == "closed") return fda::Grid::uniform_closed(size);
    throw fda::ConfigError("unknown grid layout '" + layout + "'");
}

struct SimulateArgs {
    std::string model;
    std::string config_path;
    int n = 100;
    int grid_size = 2000;
    std::string grid_layout = "midpoint";
    std::uint64_t seed = 7;
    std::string out;
};

void run_simulate(const SimulateArgs& args) {
    const json config = load_json(args.config_path);
    const fda::Grid grid = make_grid(args.grid_size, args.grid_layout);

    fda::FunctionalDataset data(grid, Eigen::MatrixXd::Zero(1, grid.size()));
    if (args.model == "kl") {
        const double sigma0 = config.value("sigma0", 0.0);
        const json model_spec = config.contains("model") ? config["model"] : json("sparse-example");
        data = fda::sample_kl(fda::kl_model_from_json(model_spec, sigma0), args.n, grid, args.seed);
    } else if (args.model == "bridge") {
        Eigen::MatrixXd values(args.n, grid.size());
        for (int i = 0; i < args.n; ++i)
            values.row(i) =
                fda::brownian_bridge(grid, fda::derive_seed(args.seed, static_cast<std::uint64_t>(i)))
                    .transpose();
        data = fda::FunctionalDataset(grid, std::move(values));
    } else if (args.model == "vehicle") {
        fda::VehicleParams params;
        if (config.contains("params")) {
            const json& p = config["params"];
            params.m_s = p.value("m_s", params.m_s);
            params.k_s = p.value("k_s", params.k_s);
            params.c_s = p.value("c_s", params.c_s);
            params.m_t = p.value("m_t", params.m_t);
            params.k_t = p.value("k_t", params.k_t);
            params.c_t = p.value("c_t", params.c_t);
            params.v = p.value("v", params.v);
        }
        const double kernel_width = config.value("kernel_width", 0.02);
        const double road_scale = config.value("road_scale", 1.0);
        const std::string output = config.value("output", "y");
        const double dt = *grid.uniform_step();
        const Eigen::VectorXd kernel = fda::gaussian_smoothing_kernel(kernel_width, dt);
        Eigen::MatrixXd values(args.n, grid.size());
        for (int i = 0; i < args.n; ++i) {
            const Eigen::VectorXd road =
                road_scale * fda::filtered_bridge(kernel, dt, grid,
                                                  fda::derive_seed(args.seed, static_cast<std::uint64_t>(i)));
            const fda::VehicleResponse resp = fda::vehicle_response(params, road, grid);
            values.row(i) = (output == "u" ? resp.u : output == "x" ? resp.x : resp.y).transpose();
        }
        data = fda::FunctionalDataset(grid, std::move(values));
    } else if (args.model == "slepian") {
        const double u = config.value("u", 4.5);
        std::string r_name = "gaussian";
        if (config.contains("r")) r_name = config["r"].value("name", "gaussian");
        if (r_name != "gaussian")
            throw fda::ConfigError("unsupported Slepian covariance '" + r_name + "'");
        data = fda::sample_slepian_gauss(fda::SlepianGaussModel::gaussian(u), args.n, grid,
                                         args.seed);
    } else if (args.model == "random-functional") {
        fda::RandomFunctionalConfig rf;
        if (config.contains("amplitude")) rf.amplitude = config["amplitude"].get<std::array<double, 2>>();
        if (config.contains("location")) rf.location = config["location"].get<std::array<double, 2>>();
        if (config.contains("width")) rf.width = config["width"].get<std::array<double, 2>>();
        rf.noise_scale = config.value("noise_scale", rf.noise_scale);
        rf.kernel_width = config.value("kernel_width", rf.kernel_width);
        data = fda::random_functional_dataset(args.n, grid, args.seed, rf);
    } else {
        throw fda::ConfigError("unknown model '" + args.model + "'");
    }

    if (args.out.empty()) {
        fda::write_dataset_csv(data, std::cout);
    } else {
        fda::write_dataset_csv_file(data, args.out);
        std::cout << "wrote " << data.n_curves() << " curves x " << data.n_points()
                  << " points to " << args.out << "\n";
    }
}

struct SelectKnotsArgs {
    std::string input;
    double theta = 0.38;
    std::string criterion = "absolute";
    double split = 0.6;
    std::uint64_t seed = 42;
    int max_knots = 200;
    std::string out;
    std::string trace;
};

void run_select_knots(const SelectKnotsArgs& args) {
    const fda::FunctionalDataset data = fda::read_dataset_csv_file(args.input);
    const auto [train, valid] = fda::split_dataset(data, fda::SplitSpec{args.split, args.seed});

    fda::DdkConfig config;
    config.theta = args.theta;
    config.max_knots = args.max_knots;
    if (args.criterion == "absolute")
        config.criterion = fda::StepCriterion::absolute_step;
    else if (args.criterion == "relative")
        config.criterion = fda::StepCriterion::relative_step;
    else
        throw fda::ConfigError("criterion must be 'absolute' or 'relative'");

    const fda::DdkResult result = fda::select_knots(train, valid, config);

    std::vector<double> mapped;
    for (double k : result.knots.internal()) mapped.push_back(data.to_source(k));
    if (!args.out.empty()) fda::write_knots_file(mapped, args.out);

    if (!args.trace.empty()) {
        std::ofstream trace(args.trace);
        if (!trace) throw fda::ConfigError("cannot write trace file: " + args.trace);
        trace << std::setprecision(std::numeric_limits<double>::max_digits10);
        trace << "iter,knot,train_amse,valid_amse\n";
        trace << "0,," << result.train_amse[0] << "," << result.valid_amse[0] << "\n";
        for (int s = 1; s <= result.stopped_at; ++s) {
            trace << s << "," << data.to_source(result.selection_order[static_cast<std::size_t>(s - 1)])
                  << "," << result.train_amse[static_cast<std::size_t>(s)] << ","
                  << result.valid_amse[static_cast<std::size_t>(s)] << "\n";
        }
    }

    std::cout << "selected " << result.stopped_at << " knots ("
              << (result.stop_reason == fda::StopReason::threshold ? "threshold" : "max_knots")
              << " stop)\n";
    std::cout << "train AMSE " << result.train_amse.front() << " -> " << result.train_amse.back()
              << ", validation AMSE " << result.valid_amse.front() << " -> "
              << result.valid_amse.back() << "\n";
    if (result.elbow) std::cout << "elbow at iteration " << *result.elbow << "\n";
}

struct FpcaArgs {
    std::string input;
    std::string basis = "splinet";
    std::string knots_path;
    int degree = 3;
    int size = 0;
    int components = 4;
    bool center = false;
    std::string out;
};

std::shared_ptr<const fda::OrthoBasis> build_cli_basis(const std::string& kind,
                                                       const std::string& knots_path, int degree,
                                                       int size,
                                                       const fda::FunctionalDataset* data) {
    if (kind == "fourier") {
        if (size < 1) throw fda::ConfigError("--size is required for the Fourier basis");
        return std::make_shared<const fda::OrthoBasis>(fda::OrthoBasis::fourier(size));
    }
    if (knots_path.empty()) throw fda::ConfigError("--knots is required for spline bases");
    std::vector<double> raw = fda::read_knots_file(knots_path);
    if (data) {
        const auto [lo, hi] = data->source_interval();
        if (lo != 0.0 || hi != 1.0)
            for (double& k : raw) k = (k - lo) / (hi - lo);
    }
    std::sort(raw.begin(), raw.end());
    const fda::KnotSet knots(raw);
    if (kind == "piecewise-constant")
        return std::make_shared<const fda::OrthoBasis>(fda::OrthoBasis::piecewise_constant(knots));
    if (kind == "splinet")
        return std::make_shared<const fda::OrthoBasis>(fda::OrthoBasis::splinet(knots, degree));
    throw fda::ConfigError("unknown basis '" + kind + "'");
}

void run_fpca(const FpcaArgs& args) {
    const fda::FunctionalDataset data = fda::read_dataset_csv_file(args.input);
    const auto basis = build_cli_basis(args.basis, args.knots_path, args.degree, args.size, &data);
    const fda::FpcaResult result = fda::fpca(data, basis, args.center);
    const int k = std::min(args.components, static_cast<int>(result.eigenvalues.size()));

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file) throw fda::ConfigError("cannot write output file: " + args.out);
        out = &file;
    }
    *out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int i = 0; i < k; ++i) *out << (i ? "," : "") << result.eigenvalues[i];
    *out << "\n";
    Eigen::MatrixXd funcs(data.n_points(), k);
    for (int i = 0; i < k; ++i) funcs.col(i) = result.eigenfunction(i, data.grid());
    for (int j = 0; j < data.n_points(); ++j) {
        *out << data.to_source(data.grid().point(j));
        for (int i = 0; i < k; ++i) *out << "," << funcs(j, i);
        *out << "\n";
    }
    if (!args.out.empty())
        std::cout << "wrote " << k << " components to " << args.out << "\n";
}

struct ExportArgs {
    std::string kind = "splinet";
    std::string knots_path;
    int degree = 3;
    int size = 0;
    int resolution = 1000;
    std::string out;
};

void run_export_basis(const ExportArgs& args) {
    const auto basis = build_cli_basis(args.kind, args.knots_path, args.degree, args.size, nullptr);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out.empty()) {
        file.open(args.out);
        if (!file) throw fda::ConfigError("cannot write output file: " + args.out);
        out = &file;
    }
    fda::write_basis_csv(*basis, args.resolution, *out);
}

struct BenchArgs {
    std::string experiment;
    std::string config_path;
    std::string out;
    int workers = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool dry_run = false;
};

void run_bench(const BenchArgs& args) {
    json merged = load_json(args.config_path);
    if (!args.experiment.empty()) merged["experiment"] = args.experiment;
    if (!merged.contains("experiment"))
        throw fda::ConfigError("an experiment must be named via --experiment or the config file");
    if (args.seed_set) merged["root_seed"] = args.seed;
    merged["workers"] = args.workers;
    const fda::ExperimentConfig config = fda::ExperimentConfig::from_json(merged);

    if (args.dry_run) {
        std::cout << fda::experiment_plan(config);
        return;
    }
    const fda::ResultTable table = fda::run_experiment(config);
    if (args.out.empty()) {
        fda::write_result_csv(table, config.effective, std::cout);
    } else {
        std::ofstream out(args.out);
        if (!out) throw fda::ConfigError("cannot write output file: " + args.out);
        fda::write_result_csv(table, config.effective, out);
        std::cout << "wrote " << table.rows.size() << " result rows to " << args.out << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional data toolkit: data-driven knots, splinets, FPCA"};
    app.set_version_flag("--version", FDAKIT_VERSION);
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset CSV");
    simulate->add_option("--model", sim.model,
                         "kl | bridge | vehicle | slepian | random-functional")
        ->required();
    simulate->add_option("--config", sim.config_path, "model JSON config");
    simulate->add_option("--n", sim.n, "number of curves");
    simulate->add_option("--grid", sim.grid_size, "grid size");
    simulate->add_option("--grid-layout", sim.grid_layout, "midpoint | left | closed");
    simulate->add_option("--seed", sim.seed, "random seed");
    simulate->add_option("--out", sim.out, "output CSV (stdout if omitted)");

    SelectKnotsArgs sel;
    CLI::App* select = app.add_subcommand("select-knots", "Greedy data-driven knot selection");
    select->add_option("--input", sel.input, "dataset CSV")->required();
    select->add_option("--theta", sel.theta, "stopping threshold");
    select->add_option("--criterion", sel.criterion, "absolute | relative");
    select->add_option("--split", sel.split, "train fraction");
    select->add_option("--seed", sel.seed, "split seed");
    select->add_option("--max-knots", sel.max_knots, "iteration cap");
    select->add_option("--out", sel.out, "knot output file");
    select->add_option("--trace", sel.trace, "per-iteration trace CSV");

    FpcaArgs fp;
    CLI::App* fpca_cmd = app.add_subcommand("fpca", "Functional PCA in a chosen basis");
    fpca_cmd->add_option("--input", fp.input, "dataset CSV")->required();
    fpca_cmd->add_option("--basis", fp.basis, "splinet | piecewise-constant | fourier");
    fpca_cmd->add_option("--knots", fp.knots_path, "knot file (spline bases)");
    fpca_cmd->add_option("--degree", fp.degree, "spline degree");
    fpca_cmd->add_option("--size", fp.size, "Fourier basis size");
    fpca_cmd->add_option("--components", fp.components, "components to emit");
    fpca_cmd->add_flag("--center", fp.center, "center the data");
    fpca_cmd->add_option("--out", fp.out, "output CSV (stdout if omitted)");

    ExportArgs exp;
    CLI::App* export_cmd = app.add_subcommand("export-basis", "Sample basis elements to CSV");
    export_cmd->add_option("--kind", exp.kind, "splinet | piecewise-constant | fourier");
    export_cmd->add_option("--knots", exp.knots_path, "knot file (spline bases)");
    export_cmd->add_option("--degree", exp.degree, "spline degree");
    export_cmd->add_option("--size", exp.size, "Fourier basis size");
    export_cmd->add_option("--resolution", exp.resolution, "output grid resolution");
    export_cmd->add_option("--out", exp.out, "output CSV (stdout if omitted)");

    BenchArgs bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run a benchmark experiment");
    bench_cmd->add_option("--experiment", bench.experiment,
                          "eigen-mse | basis-compare | ddk-vs-equispaced");
    bench_cmd->add_option("--config", bench.config_path, "experiment JSON config");
    bench_cmd->add_option("--out", bench.out, "result CSV (stdout if omitted)");
    bench_cmd->add_option("--workers", bench.workers, "worker threads");
    bench_cmd->add_option("--seed", bench.seed, "root seed override")
        ->each([&](const std::string&) { bench.seed_set = true; });
    bench_cmd->add_flag("--dry-run", bench.dry_run, "print the resolved plan and exit");

    try {
        app.parse(argc, argv);
        if (*simulate) run_simulate(sim);
        if (*select) run_select_knots(sel);
        if (*fpca_cmd) run_fpca(fp);
        if (*export_cmd) run_export_basis(exp);
        if (*bench_cmd) run_bench(bench);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const fda::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

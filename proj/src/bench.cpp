#include "fda/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "fda/csv.hpp"
#include "fda/ddk.hpp"
#include "fda/errors.hpp"
#include "fda/fpca.hpp"
#include "fda/rng.hpp"
#include "fda/version.hpp"

namespace fda {

namespace {

using nlohmann::json;

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError("config field '" + key + "' must be a number");
    return j[key].get<double>();
}

int require_int(const json& j, const std::string& key) {
    const double v = require_number(j, key);
    return static_cast<int>(v);
}

std::string format_cell(std::initializer_list<std::pair<std::string, std::string>> kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        if (!out.empty()) out += ";";
        out += k + "=" + v;
    }
    return out;
}

// Greedy selection of a forced number of knots: a vanishing threshold never
// triggers the validation stop, so the run always reaches max_knots.
DdkResult forced_knots(const FunctionalDataset& data, int count, double split_fraction,
                       std::uint64_t split_seed) {
    const auto [train, valid] = split_dataset(data, SplitSpec{split_fraction, split_seed});
    DdkConfig config;
    config.theta = std::numeric_limits<double>::min();
    config.criterion = StepCriterion::absolute_step;
    config.max_knots = count;
    return select_knots(train, valid, config);
}

}  // namespace

ExperimentKind ExperimentConfig::kind_from_name(const std::string& name) {
    if (name == "eigen-mse" || name == "eigen_mse") return ExperimentKind::eigen_mse;
    if (name == "basis-compare" || name == "basis_compare") return ExperimentKind::basis_compare;
    if (name == "ddk-vs-equispaced" || name == "ddk_vs_equispaced")
        return ExperimentKind::ddk_vs_equispaced;
    throw ConfigError("unknown experiment '" + name + "'");
}

json ExperimentConfig::defaults(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::eigen_mse:
            return json{{"experiment", "eigen-mse"},
                        {"sample_sizes", {25, 50, 100, 200, 400, 700}},
                        {"mc_replicates", 200},
                        {"root_seed", 20240501},
                        {"grid_size", 1000},
                        {"sigma0", std::sqrt(0.1)},
                        {"model", "sparse-example"},
                        {"components", 4},
                        {"center", false},
                        {"true_lambda", {1.0, 0.5, 0.3, 0.01}},
                        {"bases",
                         {{{"name", "true9"},
                           {"kind", "splinet"},
                           {"degree", 3},
                           {"knots", {0.1, 0.2, 0.4, 0.7, 0.85}}},
                          {{"name", "splinet200"},
                           {"kind", "splinet"},
                           {"degree", 3},
                           {"equispaced_knots", 196}}}}};
        case ExperimentKind::basis_compare:
            return json{{"experiment", "basis-compare"},
                        {"size_min", 4},
                        {"size_max", 40},
                        {"mc_replicates", 20},
                        {"n_curves", 10},
                        {"grid_size", 500},
                        {"root_seed", 20240502},
                        {"degree", 3},
                        {"ddk_split", 0.6},
                        {"generator",
                         {{"amplitude", {0.5, 2.0}},
                          {"location", {0.15, 0.85}},
                          {"width", {0.02, 0.08}},
                          {"noise_scale", 1.0},
                          {"kernel_width", 0.02}}}};
        case ExperimentKind::ddk_vs_equispaced:
            return json{{"experiment", "ddk-vs-equispaced"},
                        {"input", ""},
                        {"replicates", 50},
                        {"knot_count", 6},
                        {"degree", 3},
                        {"split", 0.6},
                        {"root_seed", 20240503},
                        {"synthetic",
                         {{"n_curves", 40}, {"grid_size", 400}, {"sigma0", 0.0}}}};
    }
    throw ConfigError("unknown experiment kind");
}

ExperimentConfig ExperimentConfig::from_json(const json& merged) {
    if (!merged.contains("experiment") || !merged["experiment"].is_string())
        throw ConfigError("config needs a string field 'experiment'");
    ExperimentConfig out;
    out.kind = kind_from_name(merged["experiment"].get<std::string>());
    out.effective = defaults(out.kind);
    out.effective.update(merged);
    if (out.effective.contains("workers")) out.workers = require_int(out.effective, "workers");
    if (out.workers < 1) throw ConfigError("workers must be at least 1");
    return out;
}

std::shared_ptr<const OrthoBasis> basis_from_json(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind"))
        throw ConfigError("basis spec needs a 'kind'");
    const std::string kind = spec["kind"].get<std::string>();
    if (kind == "fourier") {
        return std::make_shared<const OrthoBasis>(OrthoBasis::fourier(require_int(spec, "size")));
    }
    KnotSet knots;
    if (spec.contains("equispaced_knots")) {
        knots = KnotSet::equispaced(require_int(spec, "equispaced_knots"));
    } else if (spec.contains("knots")) {
        knots = KnotSet(spec["knots"].get<std::vector<double>>());
    } else {
        throw ConfigError("spline basis spec needs 'knots' or 'equispaced_knots'");
    }
    if (kind == "piecewise-constant" || kind == "piecewise_constant")
        return std::make_shared<const OrthoBasis>(OrthoBasis::piecewise_constant(knots));
    if (kind == "splinet")
        return std::make_shared<const OrthoBasis>(
            OrthoBasis::splinet(knots, require_int(spec, "degree")));
    throw ConfigError("unknown basis kind '" + kind + "'");
}

KlModel kl_model_from_json(const json& spec, double sigma0) {
    if (spec.is_string() && spec.get<std::string>() == "sparse-example")
        return kl_sparse_example(sigma0);
    if (!spec.is_object()) throw ConfigError("model spec must be 'sparse-example' or an object");
    const auto rows = spec.at("mixing").get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw ConfigError("mixing matrix must be nonempty");
    Eigen::MatrixXd mixing(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.front().size())
            throw ConfigError("mixing matrix rows must have equal length");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            mixing(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    const auto lambda_vec = spec.at("lambda").get<std::vector<double>>();
    Eigen::VectorXd lambda(static_cast<Eigen::Index>(lambda_vec.size()));
    for (std::size_t i = 0; i < lambda_vec.size(); ++i)
        lambda[static_cast<Eigen::Index>(i)] = lambda_vec[i];
    return KlModel(std::move(mixing), std::move(lambda), basis_from_json(spec.at("basis")),
                   sigma0);
}

ResultTable run_eigen_mse(const ExperimentConfig& config) {
    const json& cfg = config.effective;
    const auto sizes = cfg.at("sample_sizes").get<std::vector<int>>();
    const int replicates = require_int(cfg, "mc_replicates");
    const int grid_size = require_int(cfg, "grid_size");
    const double sigma0 = require_number(cfg, "sigma0");
    const int components = require_int(cfg, "components");
    const bool center = cfg.at("center").get<bool>();
    const auto true_lambda = cfg.at("true_lambda").get<std::vector<double>>();
    const std::uint64_t root = cfg.at("root_seed").get<std::uint64_t>();
    if (sizes.empty() || replicates < 1) throw ConfigError("empty experiment plan");

    const KlModel model = kl_model_from_json(cfg.at("model"), sigma0);
    const Grid grid = Grid::uniform(grid_size);

    struct BasisSpec {
        std::string name;
        std::shared_ptr<const OrthoBasis> basis;
    };
    std::vector<BasisSpec> bases;
    for (const json& b : cfg.at("bases"))
        bases.push_back({b.at("name").get<std::string>(), basis_from_json(b)});

    ResultTable table;
    table.experiment = "eigen-mse";
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        const int n = sizes[si];
        // estimates[basis][replicate][component]
        std::vector<std::vector<std::vector<double>>> estimates(
            bases.size(), std::vector<std::vector<double>>(
                              static_cast<std::size_t>(replicates),
                              std::vector<double>(static_cast<std::size_t>(components), 0.0)));

        const std::uint64_t size_seed = derive_seed(root, si);
        parallel_for(replicates, config.workers, [&](int r) {
            const FunctionalDataset data =
                sample_kl(model, n, grid, derive_seed(size_seed, static_cast<std::uint64_t>(r)));
            for (std::size_t bi = 0; bi < bases.size(); ++bi) {
                const FpcaResult res = fpca(data, bases[bi].basis, center);
                for (int k = 0; k < components; ++k)
                    estimates[bi][static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] =
                        res.eigenvalues[k];
            }
        });

        for (std::size_t bi = 0; bi < bases.size(); ++bi) {
            const std::string cell = format_cell(
                {{"basis", bases[bi].name}, {"n", std::to_string(n)}});
            for (int r = 0; r < replicates; ++r)
                for (int k = 0; k < components; ++k)
                    table.rows.push_back({cell, r, "lambda_" + std::to_string(k + 1),
                                          estimates[bi][static_cast<std::size_t>(r)]
                                                   [static_cast<std::size_t>(k)]});
            for (int k = 0; k < components; ++k) {
                double mean = 0.0, mse = 0.0;
                for (int r = 0; r < replicates; ++r) {
                    const double v =
                        estimates[bi][static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
                    mean += v;
                    const double err = v - true_lambda[static_cast<std::size_t>(k)];
                    mse += err * err;
                }
                mean /= replicates;
                mse /= replicates;
                table.rows.push_back({cell, -1, "mean_lambda_" + std::to_string(k + 1), mean});
                table.rows.push_back({cell, -1, "mse_lambda_" + std::to_string(k + 1), mse});
            }
        }
    }
    return table;
}

ResultTable run_basis_compare(const ExperimentConfig& config) {
    const json& cfg = config.effective;
    const int size_min = require_int(cfg, "size_min");
    const int size_max = require_int(cfg, "size_max");
    const int replicates = require_int(cfg, "mc_replicates");
    const int n_curves = require_int(cfg, "n_curves");
    const int grid_size = require_int(cfg, "grid_size");
    const int degree = require_int(cfg, "degree");
    const double split = require_number(cfg, "ddk_split");
    const std::uint64_t root = cfg.at("root_seed").get<std::uint64_t>();
    if (size_min < 1 || size_max < size_min) throw ConfigError("invalid size range");

    const json& gen = cfg.at("generator");
    RandomFunctionalConfig generator;
    generator.amplitude = gen.at("amplitude").get<std::array<double, 2>>();
    generator.location = gen.at("location").get<std::array<double, 2>>();
    generator.width = gen.at("width").get<std::array<double, 2>>();
    generator.noise_scale = require_number(gen, "noise_scale");
    generator.kernel_width = require_number(gen, "kernel_width");

    const Grid grid = Grid::uniform(grid_size);
    const int max_knots = size_max - 1;  // piecewise-constant size = knots + 1

    // "fixed" mode: knots selected once on a dedicated original sample.
    const FunctionalDataset original =
        random_functional_dataset(n_curves, grid, derive_seed(root, 999983), generator);
    const DdkResult fixed_run = forced_knots(original, max_knots, split, derive_seed(root, 999979));

    struct RepResult {
        std::vector<double> fourier, pc_refit, pc_fixed, net_refit, net_fixed;
    };
    std::vector<RepResult> results(static_cast<std::size_t>(replicates));

    parallel_for(replicates, config.workers, [&](int r) {
        const FunctionalDataset data = random_functional_dataset(
            n_curves, grid, derive_seed(root, static_cast<std::uint64_t>(r)), generator);
        const DdkResult refit_run =
            forced_knots(data, max_knots, split, derive_seed(root, 500000 + static_cast<std::uint64_t>(r)));

        RepResult& out = results[static_cast<std::size_t>(r)];
        auto prefix_knots = [](const DdkResult& run, int count) {
            std::vector<double> sel(run.selection_order.begin(),
                                    run.selection_order.begin() + count);
            std::sort(sel.begin(), sel.end());
            return KnotSet(sel);
        };
        for (int s = size_min; s <= size_max; ++s) {
            out.fourier.push_back(amse(data, OrthoBasis::fourier(s)));
            out.pc_refit.push_back(
                amse(data, OrthoBasis::piecewise_constant(prefix_knots(refit_run, s - 1))));
            out.pc_fixed.push_back(
                amse(data, OrthoBasis::piecewise_constant(prefix_knots(fixed_run, s - 1))));
            const int internal = s - degree - 1;
            if (internal >= degree + 1) {
                out.net_refit.push_back(
                    amse(data, OrthoBasis::splinet(prefix_knots(refit_run, internal), degree)));
                out.net_fixed.push_back(
                    amse(data, OrthoBasis::splinet(prefix_knots(fixed_run, internal), degree)));
            } else {
                out.net_refit.push_back(std::numeric_limits<double>::quiet_NaN());
                out.net_fixed.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
    });

    ResultTable table;
    table.experiment = "basis-compare";
    const std::vector<std::pair<std::string, std::vector<double> RepResult::*>> columns = {
        {"basis=fourier;mode=refit", &RepResult::fourier},
        {"basis=fourier;mode=fixed", &RepResult::fourier},
        {"basis=ddk-pc;mode=refit", &RepResult::pc_refit},
        {"basis=ddk-pc;mode=fixed", &RepResult::pc_fixed},
        {"basis=ddk-splinet;mode=refit", &RepResult::net_refit},
        {"basis=ddk-splinet;mode=fixed", &RepResult::net_fixed},
    };
    for (const auto& [prefix, member] : columns) {
        for (int s = size_min; s <= size_max; ++s) {
            const std::string cell = prefix + ";size=" + std::to_string(s);
            for (int r = 0; r < replicates; ++r)
                table.rows.push_back({cell, r, "amse",
                                      (results[static_cast<std::size_t>(r)].*member)
                                          [static_cast<std::size_t>(s - size_min)]});
        }
    }
    return table;
}

ResultTable run_ddk_vs_equispaced(const ExperimentConfig& config) {
    const json& cfg = config.effective;
    const int knot_count = require_int(cfg, "knot_count");
    const int degree = require_int(cfg, "degree");
    const double split = require_number(cfg, "split");
    const std::uint64_t root = cfg.at("root_seed").get<std::uint64_t>();
    const std::string input = cfg.at("input").get<std::string>();
    if (knot_count < degree + 1)
        throw ConfigError("knot_count must be at least degree+1 for the splinet");

    ResultTable table;
    table.experiment = "ddk-vs-equispaced";

    auto evaluate = [&](const FunctionalDataset& data, std::uint64_t split_seed) {
        const DdkResult run = forced_knots(data, knot_count, split, split_seed);
        const OrthoBasis ddk_net = OrthoBasis::splinet(run.knots, degree);
        const OrthoBasis equi_net = OrthoBasis::splinet(KnotSet::equispaced(knot_count), degree);
        return std::make_pair(amse(data, ddk_net), amse(data, equi_net));
    };

    if (!input.empty()) {
        const FunctionalDataset data = read_dataset_csv_file(input);
        const auto [ddk_amse, equi_amse] = evaluate(data, derive_seed(root, 0));
        const std::string cell = "input=" + input;
        table.rows.push_back({cell, 0, "amse_ddk", ddk_amse});
        table.rows.push_back({cell, 0, "amse_equispaced", equi_amse});
        table.rows.push_back({cell, 0, "ratio", ddk_amse / equi_amse});
        return table;
    }

    const json& synth = cfg.at("synthetic");
    const int n_curves = require_int(synth, "n_curves");
    const int grid_size = require_int(synth, "grid_size");
    const double sigma0 = require_number(synth, "sigma0");
    const int replicates = require_int(cfg, "replicates");
    const Grid grid = Grid::uniform(grid_size);
    const KlModel model = kl_sparse_example(sigma0);

    std::vector<std::pair<double, double>> outcomes(static_cast<std::size_t>(replicates));
    parallel_for(replicates, config.workers, [&](int r) {
        const FunctionalDataset data = sample_kl(
            model, n_curves, grid, derive_seed(root, static_cast<std::uint64_t>(r)));
        outcomes[static_cast<std::size_t>(r)] =
            evaluate(data, derive_seed(root, 700000 + static_cast<std::uint64_t>(r)));
    });

    int wins = 0;
    std::vector<double> improvements;
    for (int r = 0; r < replicates; ++r) {
        const auto [ddk_amse, equi_amse] = outcomes[static_cast<std::size_t>(r)];
        const std::string cell = "rep=" + std::to_string(r);
        table.rows.push_back({cell, r, "amse_ddk", ddk_amse});
        table.rows.push_back({cell, r, "amse_equispaced", equi_amse});
        table.rows.push_back({cell, r, "ratio", ddk_amse / equi_amse});
        if (ddk_amse <= equi_amse) ++wins;
        improvements.push_back(1.0 - ddk_amse / equi_amse);
    }
    std::sort(improvements.begin(), improvements.end());
    const std::size_t mid = improvements.size() / 2;
    const double median = improvements.size() % 2 == 1
                              ? improvements[mid]
                              : 0.5 * (improvements[mid - 1] + improvements[mid]);
    table.rows.push_back({"aggregate", -1, "win_fraction",
                          static_cast<double>(wins) / replicates});
    table.rows.push_back({"aggregate", -1, "median_improvement", median});
    return table;
}

ResultTable run_experiment(const ExperimentConfig& config) {
    switch (config.kind) {
        case ExperimentKind::eigen_mse: return run_eigen_mse(config);
        case ExperimentKind::basis_compare: return run_basis_compare(config);
        case ExperimentKind::ddk_vs_equispaced: return run_ddk_vs_equispaced(config);
    }
    throw ConfigError("unknown experiment kind");
}

std::uint64_t config_hash(const nlohmann::json& config) {
    const std::string dump = config.dump();  // nlohmann keeps keys sorted
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_result_csv(const ResultTable& table, const nlohmann::json& effective,
                      std::ostream& out) {
    out << "# experiment=" << table.experiment << "\n";
    out << "# version=" << FDAKIT_VERSION << "\n";
    out << "# config_hash=" << std::hex << config_hash(effective) << std::dec << "\n";
    out << "# config=" << effective.dump() << "\n";
    out << "cell,replicate,metric,value\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const ResultRow& row : table.rows)
        out << row.cell << "," << row.replicate << "," << row.metric << "," << row.value << "\n";
}

std::string experiment_plan(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "experiment: " << config.effective.at("experiment").get<std::string>() << "\n";
    out << "workers: " << config.workers << "\n";
    out << "root_seed: " << config.effective.at("root_seed").get<std::uint64_t>() << "\n";
    switch (config.kind) {
        case ExperimentKind::eigen_mse: {
            const auto sizes = config.effective.at("sample_sizes").get<std::vector<int>>();
            out << "cells: " << config.effective.at("bases").size() << " bases x " << sizes.size()
                << " sample sizes\n";
            out << "replicates per cell: " << require_int(config.effective, "mc_replicates")
                << "\n";
            break;
        }
        case ExperimentKind::basis_compare:
            out << "sizes: " << require_int(config.effective, "size_min") << ".."
                << require_int(config.effective, "size_max") << ", 3 bases x 2 modes\n";
            out << "replicates: " << require_int(config.effective, "mc_replicates") << "\n";
            break;
        case ExperimentKind::ddk_vs_equispaced:
            out << "knot_count: " << require_int(config.effective, "knot_count") << "\n";
            out << "replicates: " << require_int(config.effective, "replicates") << "\n";
            break;
    }
    out << "config: " << config.effective.dump(2) << "\n";
    return out.str();
}

}  // namespace fda

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>

#include "fda/bench.hpp"
#include "fda/errors.hpp"

using namespace fda;
using nlohmann::json;

namespace {

ExperimentConfig make_config(json overrides) {
    return ExperimentConfig::from_json(overrides);
}

std::map<std::string, std::vector<double>> collect(const ResultTable& table,
                                                   const std::string& metric) {
    std::map<std::string, std::vector<double>> out;
    for (const ResultRow& row : table.rows)
        if (row.metric == metric) out[row.cell].push_back(row.value);
    return out;
}

}  // namespace

TEST_CASE("experiment config parsing and hashing") {
    CHECK_THROWS_AS(ExperimentConfig::kind_from_name("nope"), ConfigError);
    const ExperimentConfig config =
        make_config({{"experiment", "eigen-mse"}, {"mc_replicates", 3}});
    CHECK(config.kind == ExperimentKind::eigen_mse);
    CHECK(config.effective["mc_replicates"] == 3);
    CHECK(config.effective["grid_size"] == 1000);  // default survives the merge

    const std::uint64_t h1 = config_hash(config.effective);
    const std::uint64_t h2 = config_hash(config.effective);
    CHECK(h1 == h2);
    json other = config.effective;
    other["mc_replicates"] = 4;
    CHECK(config_hash(other) != h1);

    CHECK(experiment_plan(config).find("experiment: eigen-mse") != std::string::npos);
}

TEST_CASE("model and basis factories") {
    const KlModel preset = kl_model_from_json(json("sparse-example"), 0.1);
    CHECK(preset.sigma0 == 0.1);
    CHECK(preset.basis->size() == 9);

    const json custom = {{"mixing", {{1.0, 0.0}, {0.0, 1.0}}},
                         {"lambda", {2.0, 1.0}},
                         {"basis", {{"kind", "fourier"}, {"size", 2}}}};
    const KlModel model = kl_model_from_json(custom, 0.0);
    CHECK(model.lambda[0] == 2.0);
    CHECK(model.basis->kind() == BasisKind::fourier);

    CHECK_THROWS_AS(basis_from_json(json{{"kind", "wavelet"}}), ConfigError);
    const auto net = basis_from_json(
        json{{"kind", "splinet"}, {"degree", 2}, {"equispaced_knots", 5}});
    CHECK(net->size() == 8);
}

TEST_CASE("eigen-mse experiment shape and determinism") {
    const json overrides = {{"experiment", "eigen-mse"},
                            {"sample_sizes", {25}},
                            {"mc_replicates", 3},
                            {"grid_size", 300},
                            {"root_seed", 4242},
                            {"bases", {{{"name", "true9"},
                                        {"kind", "splinet"},
                                        {"degree", 3},
                                        {"knots", {0.1, 0.2, 0.4, 0.7, 0.85}}}}}};
    const ExperimentConfig config = make_config(overrides);
    const ResultTable table = run_eigen_mse(config);

    int replicate_rows = 0, aggregate_rows = 0;
    for (const ResultRow& row : table.rows)
        (row.replicate < 0 ? aggregate_rows : replicate_rows)++;
    CHECK(replicate_rows == 3 * 4);       // 3 replicates x 4 eigenvalues
    CHECK(aggregate_rows == 2 * 4);       // mean + mse per eigenvalue

    std::ostringstream a, b;
    write_result_csv(table, config.effective, a);
    write_result_csv(run_eigen_mse(config), config.effective, b);
    CHECK(a.str() == b.str());

    // Worker count must not change any value.
    ExperimentConfig parallel = config;
    parallel.workers = 4;
    std::ostringstream c;
    write_result_csv(run_eigen_mse(parallel), config.effective, c);
    CHECK(a.str() == c.str());
}

TEST_CASE("basis-compare experiment emits the full grid of cells") {
    const json overrides = {{"experiment", "basis-compare"},
                            {"size_min", 4},
                            {"size_max", 10},
                            {"mc_replicates", 6},
                            {"n_curves", 8},
                            {"grid_size", 200},
                            {"root_seed", 99}};
    const ExperimentConfig config = make_config(overrides);
    const ResultTable table = run_basis_compare(config);

    const auto amse_rows = collect(table, "amse");
    CHECK(amse_rows.size() == 6u * 7u);  // 3 bases x 2 modes x sizes 4..10
    for (const auto& [cell, values] : amse_rows) CHECK(values.size() == 6u);

    // Fourier AMSE is nonincreasing in the basis size for every replicate.
    for (int r = 0; r < 6; ++r) {
        double prev = 1e300;
        for (int s = 4; s <= 10; ++s) {
            const auto& vals = amse_rows.at("basis=fourier;mode=refit;size=" + std::to_string(s));
            CHECK(vals[static_cast<std::size_t>(r)] <= prev + 1e-12);
            prev = vals[static_cast<std::size_t>(r)];
        }
    }

    // Refit re-optimizes per sample, so it beats the fixed basis in median.
    auto median_of = [&](const std::string& cell) {
        std::vector<double> v = amse_rows.at(cell);
        std::sort(v.begin(), v.end());
        return 0.5 * (v[2] + v[3]);
    };
    int refit_wins = 0, cells = 0;
    for (int s = 4; s <= 10; ++s) {
        const double refit = median_of("basis=ddk-pc;mode=refit;size=" + std::to_string(s));
        const double fixed = median_of("basis=ddk-pc;mode=fixed;size=" + std::to_string(s));
        ++cells;
        if (refit <= fixed + 1e-12) ++refit_wins;
    }
    CHECK(refit_wins >= cells - 1);

    // Splinet cells below the feasible size are present but NaN.
    const auto& tiny = amse_rows.at("basis=ddk-splinet;mode=refit;size=4");
    CHECK(std::isnan(tiny[0]));
    const auto& feasible = amse_rows.at("basis=ddk-splinet;mode=refit;size=8");
    CHECK(std::isfinite(feasible[0]));
}

TEST_CASE("ddk-vs-equispaced experiment aggregates") {
    const json overrides = {{"experiment", "ddk-vs-equispaced"},
                            {"replicates", 5},
                            {"knot_count", 6},
                            {"root_seed", 7},
                            {"synthetic", {{"n_curves", 16}, {"grid_size", 200}, {"sigma0", 0.0}}}};
    const ExperimentConfig config = make_config(overrides);
    const ResultTable table = run_ddk_vs_equispaced(config);

    const auto ddk = collect(table, "amse_ddk");
    const auto equi = collect(table, "amse_equispaced");
    CHECK(ddk.size() == 5u);
    CHECK(equi.size() == 5u);

    double win_fraction = -1.0, median_improvement = -10.0;
    for (const ResultRow& row : table.rows) {
        if (row.metric == "win_fraction") win_fraction = row.value;
        if (row.metric == "median_improvement") median_improvement = row.value;
    }
    CHECK(win_fraction >= 0.0);
    CHECK(win_fraction <= 1.0);
    CHECK(median_improvement > -1.0);

    std::ostringstream a, b;
    write_result_csv(table, config.effective, a);
    write_result_csv(run_ddk_vs_equispaced(config), config.effective, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("# config=") != std::string::npos);
    CHECK(a.str().find("# version=") != std::string::npos);
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "fda/basis.hpp"
#include "fda/simulate.hpp"

namespace fda {

enum class ExperimentKind { eigen_mse, basis_compare, ddk_vs_equispaced };

/// Parsed experiment description; `effective` keeps the fully resolved JSON
/// (defaults + file + CLI overrides) that is echoed into every output file.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::eigen_mse;
    nlohmann::json effective;
    int workers = 1;

    static ExperimentConfig from_json(const nlohmann::json& merged);
    static nlohmann::json defaults(ExperimentKind kind);
    static ExperimentKind kind_from_name(const std::string& name);
};

struct ResultRow {
    std::string cell;
    long replicate = -1;  // -1 marks an aggregate row
    std::string metric;
    double value = 0.0;
};

struct ResultTable {
    std::string experiment;
    std::vector<ResultRow> rows;
};

ResultTable run_eigen_mse(const ExperimentConfig& config);
ResultTable run_basis_compare(const ExperimentConfig& config);
ResultTable run_ddk_vs_equispaced(const ExperimentConfig& config);
ResultTable run_experiment(const ExperimentConfig& config);

/// FNV-1a hash of the canonical (sorted-key) JSON dump.
std::uint64_t config_hash(const nlohmann::json& config);

/// Tidy CSV with provenance comment lines; reruns are byte-identical.
void write_result_csv(const ResultTable& table, const nlohmann::json& effective,
                      std::ostream& out);

/// Human-readable resolved plan for --dry-run.
std::string experiment_plan(const ExperimentConfig& config);

/// Basis factory shared by bench and the CLI.
std::shared_ptr<const OrthoBasis> basis_from_json(const nlohmann::json& spec);

/// KL-model factory: either the string "sparse-example" or a full
/// {mixing, lambda, basis, sigma0} object.
KlModel kl_model_from_json(const nlohmann::json& spec, double sigma0);

}  // namespace fda

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fda/basis.hpp"
#include "fda/grid.hpp"
#include "fda/knots.hpp"

namespace fda {

/// Dataset interchange format: header `t,curve_1,...,curve_n`, one row per
/// grid point, `.` decimal separator.  Datasets sampled outside [0,1] are
/// affinely rescaled on ingestion and remember their source interval.
FunctionalDataset read_dataset_csv(std::istream& in);
FunctionalDataset read_dataset_csv_file(const std::string& path);
void write_dataset_csv(const FunctionalDataset& dataset, std::ostream& out);
void write_dataset_csv_file(const FunctionalDataset& dataset, const std::string& path);

/// Knot files: one knot per line, plain text.
std::vector<double> read_knots_file(const std::string& path);
void write_knots_file(const std::vector<double>& knots, const std::string& path);

/// Basis export: header `t,f_1,...,f_I`, elements sampled on a closed uniform
/// grid of the requested resolution.
void write_basis_csv(const OrthoBasis& basis, int resolution, std::ostream& out);

}  // namespace fda

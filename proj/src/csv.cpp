#include "fda/csv.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fda/errors.hpp"

namespace fda {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("malformed number '" + s + "' on CSV line " +
                          std::to_string(line_no));
    }
}

std::ostream& full_precision(std::ostream& out) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    return out;
}

}  // namespace

FunctionalDataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty dataset CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_line(line);
    if (header.size() < 2 || header[0] != "t")
        throw ConfigError("dataset CSV must start with header t,curve_1,...");
    const int n = static_cast<int>(header.size()) - 1;

    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_line(line);
        if (static_cast<int>(fields.size()) != n + 1)
            throw ConfigError("CSV line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(n + 1));
        times.push_back(parse_double(fields[0], line_no));
        std::vector<double> row(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            row[static_cast<std::size_t>(i)] = parse_double(fields[static_cast<std::size_t>(i) + 1], line_no);
        rows.push_back(std::move(row));
    }
    if (times.empty()) throw ConfigError("dataset CSV has no data rows");

    double lo = 0.0, hi = 1.0;
    const double t_min = times.front(), t_max = times.back();
    if (t_min < 0.0 || t_max > 1.0) {
        if (!(t_max > t_min)) throw ConfigError("dataset time column must be increasing");
        lo = t_min;
        hi = t_max;
        for (double& t : times) t = (t - lo) / (hi - lo);
        times.back() = 1.0;
        times.front() = 0.0;
    }

    const int m = static_cast<int>(times.size());
    Eigen::MatrixXd values(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) values(i, j) = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];

    std::vector<std::string> labels(header.begin() + 1, header.end());
    FunctionalDataset out(Grid(std::move(times)), std::move(values), std::move(labels));
    out.set_source_interval(lo, hi);
    return out;
}

FunctionalDataset read_dataset_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset file: " + path);
    return read_dataset_csv(in);
}

void write_dataset_csv(const FunctionalDataset& dataset, std::ostream& out) {
    full_precision(out);
    out << "t";
    for (int i = 0; i < dataset.n_curves(); ++i) {
        if (dataset.labels().empty())
            out << ",curve_" << (i + 1);
        else
            out << "," << dataset.labels()[static_cast<std::size_t>(i)];
    }
    out << "\n";
    for (int j = 0; j < dataset.n_points(); ++j) {
        out << dataset.to_source(dataset.grid().point(j));
        for (int i = 0; i < dataset.n_curves(); ++i) out << "," << dataset.values()(i, j);
        out << "\n";
    }
}

void write_dataset_csv_file(const FunctionalDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write dataset file: " + path);
    write_dataset_csv(dataset, out);
}

std::vector<double> read_knots_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open knot file: " + path);
    std::vector<double> knots;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        knots.push_back(parse_double(line, line_no));
    }
    return knots;
}

void write_knots_file(const std::vector<double>& knots, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write knot file: " + path);
    full_precision(out);
    for (double k : knots) out << k << "\n";
}

void write_basis_csv(const OrthoBasis& basis, int resolution, std::ostream& out) {
    if (resolution < 2) throw RangeError("basis export resolution must be at least 2");
    full_precision(out);
    out << "t";
    for (int j = 0; j < basis.size(); ++j) out << ",f_" << (j + 1);
    out << "\n";
    const Grid grid = Grid::uniform_closed(resolution);
    const Eigen::MatrixXd values = basis.eval_on(grid);
    for (int i = 0; i < grid.size(); ++i) {
        out << grid.point(i);
        for (int j = 0; j < basis.size(); ++j) out << "," << values(j, i);
        out << "\n";
    }
}

}  // namespace fda

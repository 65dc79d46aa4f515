// csv_writer.hpp - CSV emission of time series, sweep summaries and P(n)

#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kerrlambda/fock_distribution.hpp"
#include "kerrlambda/number_format.hpp"
#include "kerrlambda/simulation_driver.hpp"

namespace kerrlambda {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::string_view, 9> kCsvColumns{
    "t_scaled", "dP_over_k", "dP2_over_k2", "q_mandel", "rho11", "rho22", "rho33", "n_mean", "excitation_residual"};

/// Value of a named column; empty for an undefined Mandel Q.
inline std::optional<double> column_value(const ObservableRow& row, std::string_view column) {
    if (column == "t_scaled") return row.t_scaled;
    if (column == "dP_over_k") return row.dP_over_k;
    if (column == "dP2_over_k2") return row.dP2_over_k2;
    if (column == "q_mandel") return row.q_mandel;
    if (column == "rho11") return row.rho11;
    if (column == "rho22") return row.rho22;
    if (column == "rho33") return row.rho33;
    if (column == "n_mean") return row.n_mean;
    if (column == "excitation_residual") return row.excitation_residual;
    throw std::invalid_argument("unknown column '" + std::string(column) + "'");
}

inline std::string to_csv(const TimeSeries& series) {
    std::ostringstream os;
    for (std::size_t c = 0; c < kCsvColumns.size(); ++c) os << (c ? "," : "") << kCsvColumns[c];
    os << '\n';
    for (const auto& row : series.rows) {
        for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
            if (c) os << ',';
            if (const auto v = column_value(row, kCsvColumns[c])) os << format_number(*v);
        }
        os << '\n';
    }
    return os.str();
}

inline std::string distribution_to_csv(const PhotonDistribution& dist) {
    std::ostringstream os;
    os << "n,P(n)\n";
    for (std::size_t n = 0; n < dist.size(); ++n) os << n << ',' << format_number(dist[n]) << '\n';
    return os.str();
}

inline std::string summary_to_csv(const std::vector<SweepSummary>& summaries) {
    std::ostringstream os;
    os << "chi,min_dP_over_k,max_dP2_over_k2,fraction_q_negative\n";
    for (const auto& s : summaries) {
        os << format_number(s.chi) << ',' << format_number(s.min_dP_over_k) << ',' << format_number(s.max_dP2_over_k2)
           << ',' << format_number(s.fraction_q_negative) << '\n';
    }
    return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

inline void write_csv(const TimeSeries& series, const std::filesystem::path& path) { write_text(path, to_csv(series)); }

/// Parsed CSV: header names plus rows of optional values (empty field = nullopt).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream is(s);
        while (std::getline(is, field, ',')) fields.push_back(field);
        if (!s.empty() && s.back() == ',') fields.emplace_back();
        return fields;
    };
    if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
    table.header = split(line);
    while (std::getline(in, line)) {
        std::vector<std::optional<double>> row;
        for (const auto& f : split(line)) {
            if (f.empty()) {
                row.emplace_back();
            } else {
                row.emplace_back(parse_number(f));
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace kerrlambda

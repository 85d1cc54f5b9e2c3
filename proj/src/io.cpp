#include "cik/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cik::io {

namespace {

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  out = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

void check_support(double v, SupportKind kind, std::size_t row, std::size_t col) {
  const auto fail = [&](const char* what) {
    throw std::runtime_error("support violation at row " + std::to_string(row + 1) +
                             ", column " + std::to_string(col + 1) + ": " + what);
  };
  if (!std::isfinite(v)) fail("non-finite value");
  if (kind == SupportKind::Binary && v != 0.0 && v != 1.0) fail("expected a value in {0,1}");
  if (kind == SupportKind::Ternary && v != 0.0 && v != 1.0 && v != 2.0)
    fail("expected a value in {0,1,2}");
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SupportKind support_kind(const ModelSpec& spec) {
  switch (spec.variant) {
    case ModelVariant::Binary: return SupportKind::Binary;
    case ModelVariant::Ternary: return SupportKind::Ternary;
    default: return SupportKind::Real;
  }
}

Eigen::MatrixXd read_matrix(const std::string& path, SupportKind expected) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_checked = false;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (!header_checked) {
      header_checked = true;
      // header row detected when the first data line is non-numeric
      double probe;
      if (!parse_double(cells[0], probe)) continue;
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v;
      if (!parse_double(cells[c], v))
        throw std::runtime_error("parse error at row " + std::to_string(line_no) +
                                 ", column " + std::to_string(c + 1) + ": '" + cells[c] + "'");
      check_support(v, expected, rows.size(), c);
      row[c] = v;
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      throw std::runtime_error("ragged row at line " + std::to_string(line_no) + ": expected " +
                               std::to_string(width) + " cells, found " +
                               std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("no data rows in '" + path + "'");

  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& m,
                  const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  if (!header.empty()) {
    if (static_cast<Eigen::Index>(header.size()) != m.cols())
      throw std::invalid_argument("write_matrix: header width mismatch");
    for (std::size_t c = 0; c < header.size(); ++c)
      out << header[c] << (c + 1 < header.size() ? "," : "\n");
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << format_value(m(r, c)) << (c + 1 < m.cols() ? "," : "\n");
}

Eigen::VectorXd read_vector(const std::string& path) {
  const Eigen::MatrixXd m = read_matrix(path);
  if (m.cols() != 1)
    throw std::runtime_error("'" + path + "' has " + std::to_string(m.cols()) +
                             " columns, expected 1");
  return m.col(0);
}

void write_vector(const std::string& path, const Eigen::VectorXd& v,
                  const std::string& header) {
  write_matrix(path, v, header.empty() ? std::vector<std::string>{}
                                       : std::vector<std::string>{header});
}

ModelSpec read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

void write_model(const std::string& path, const ModelSpec& spec) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << to_json(spec).dump(2) << "\n";
}

experiments::ExperimentConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  return experiments::config_from_json(j);
}

void write_config(const std::string& path, const experiments::ExperimentConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << experiments::to_json(config).dump(2) << "\n";
}

void write_run_records(const std::string& path,
                       const std::vector<experiments::RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "u,replicate,knockoff_id,power,fdr\n";
  for (const auto& r : records)
    out << format_value(r.u) << ',' << r.replicate << ',' << r.knockoff_id << ','
        << format_value(r.power) << ',' << format_value(r.fdr) << "\n";
}

void write_summary(const std::string& path,
                   const std::vector<experiments::AmplitudeSummary>& summary) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "u,mean_power,mean_fdr,se_power,se_fdr\n";
  for (const auto& s : summary)
    out << format_value(s.u) << ',' << format_value(s.mean_power) << ','
        << format_value(s.mean_fdr) << ',' << format_value(s.se_power) << ','
        << format_value(s.se_fdr) << "\n";
}

}  // namespace cik::io

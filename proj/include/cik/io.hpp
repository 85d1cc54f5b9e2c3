// CSV and JSON ingestion/persistence shared by the command-line tools.
// CSV: comma-delimited, optional single header row (auto-detected when the
// first row is non-numeric), UTF-8, LF or CRLF. Numbers are emitted with 17
// significant digits so value round-trips are bit-faithful.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cik/experiments.hpp"
#include "cik/model.hpp"

namespace cik::io {

enum class SupportKind { Real, Binary, Ternary };

SupportKind support_kind(const ModelSpec& spec);

// Parse a rectangular CSV matrix; cell errors name (row, column). The
// support check validates every cell against the expected kind.
Eigen::MatrixXd read_matrix(const std::string& path,
                            SupportKind expected = SupportKind::Real);

void write_matrix(const std::string& path, const Eigen::MatrixXd& m,
                  const std::vector<std::string>& header = {});

// Column vector convenience wrappers (single-column CSV).
Eigen::VectorXd read_vector(const std::string& path);
void write_vector(const std::string& path, const Eigen::VectorXd& v,
                  const std::string& header = "");

ModelSpec read_model(const std::string& path);
void write_model(const std::string& path, const ModelSpec& spec);

experiments::ExperimentConfig read_config(const std::string& path);
void write_config(const std::string& path, const experiments::ExperimentConfig& config);

// Per-run records: u,replicate,knockoff_id,power,fdr
void write_run_records(const std::string& path,
                       const std::vector<experiments::RunRecord>& records);
// Summary: u,mean_power,mean_fdr,se_power,se_fdr
void write_summary(const std::string& path,
                   const std::vector<experiments::AmplitudeSummary>& summary);

}  // namespace cik::io

#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"

#include "cik/experiments.hpp"
#include "cik/io.hpp"
#include "cik/model.hpp"
#include "test_support.hpp"

using test_support::vec;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/cik_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& content) const {
    std::ofstream out(path);
    out << content;
  }
};

}  // namespace

TEST_CASE("csv matrices parse with and without a header") {
  TempFile plain("plain.csv");
  plain.write("1,0\n0,1\n");
  const Eigen::MatrixXd m = cik::io::read_matrix(plain.path, cik::io::SupportKind::Binary);
  CHECK(m.rows() == 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 0) == 0.0);

  TempFile with_header("header.csv");
  with_header.write("x1,x2\n0.5,1.25\n-3,4e2\n");
  const Eigen::MatrixXd h = cik::io::read_matrix(with_header.path);
  CHECK(h.rows() == 2);
  CHECK(h(1, 1) == 400.0);

  TempFile crlf("crlf.csv");
  crlf.write("1,2\r\n3,4\r\n");
  CHECK(cik::io::read_matrix(crlf.path)(1, 1) == 4.0);
}

TEST_CASE("csv support violations name the cell") {
  TempFile bad("bad.csv");
  bad.write("1,0\n0,2\n");
  CHECK_THROWS_WITH_AS(cik::io::read_matrix(bad.path, cik::io::SupportKind::Binary),
                       "support violation at row 2, column 2: expected a value in {0,1}",
                       std::runtime_error);
  TempFile garbled("garbled.csv");
  garbled.write("1,2\n3,oops\n");
  CHECK_THROWS_AS(cik::io::read_matrix(garbled.path), std::runtime_error);
  TempFile ragged("ragged.csv");
  ragged.write("1,2\n3\n");
  CHECK_THROWS_AS(cik::io::read_matrix(ragged.path), std::runtime_error);
}

TEST_CASE("matrix round-trips bit-faithfully") {
  Eigen::MatrixXd m(2, 3);
  m << 0.1, 1.0 / 3.0, -2.7182818284590452, 1e-17, 3.0, 123456.789012345678;
  TempFile file("roundtrip.csv");
  cik::io::write_matrix(file.path, m);
  const Eigen::MatrixXd back = cik::io::read_matrix(file.path);
  REQUIRE(back.rows() == m.rows());
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) CHECK(back(r, c) == m(r, c));
}

TEST_CASE("model json files round-trip and reject schema violations") {
  TempFile file("model.json");
  cik::io::write_model(file.path, cik::ModelSpec::gauss_mix(2.0, 3.0, vec({1.0, 2.0})));
  const cik::ModelSpec back = cik::io::read_model(file.path);
  CHECK(back.variant == cik::ModelVariant::GaussMix);
  CHECK(back.c[1] == 2.0);

  TempFile missing_c("missing_c.json");
  missing_c.write("{\"variant\":\"gauss-mix\",\"p\":2,\"a\":1.0,\"b\":1.0}");
  CHECK_THROWS_WITH_AS(cik::io::read_model(missing_c.path), "ModelSpec: missing field 'c'",
                       std::invalid_argument);
}

TEST_CASE("experiment config files round-trip") {
  cik::experiments::ExperimentConfig config;
  config.n = 30;
  config.p = 4;
  config.m = 2;
  config.n_signals = 2;
  config.amplitudes = {0.5, 1.0};
  config.q_target = 0.1;
  config.model = cik::ModelSpec::binary(vec({0.2, 0.4, 0.6, 0.8}));
  config.seed = 99;
  config.replicates = 3;
  TempFile file("config.json");
  cik::io::write_config(file.path, config);
  const auto back = cik::io::read_config(file.path);
  CHECK(back.n == config.n);
  CHECK(back.amplitudes == config.amplitudes);
  CHECK(back.model.c[3] == 0.8);
  CHECK(back.seed == 99);
}

TEST_CASE("report csv writers emit the documented columns") {
  std::vector<cik::experiments::RunRecord> records{{3.0, 0, 1, 0.5, 0.125}};
  TempFile runs("runs.csv");
  cik::io::write_run_records(runs.path, records);
  std::ifstream in(runs.path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "u,replicate,knockoff_id,power,fdr");
  CHECK(row == "3,0,1,0.5,0.125");

  std::vector<cik::experiments::AmplitudeSummary> summary{{3.0, 0.5, 0.1, 0.01, 0.002, 1.0}};
  TempFile sfile("summary.csv");
  cik::io::write_summary(sfile.path, summary);
  std::ifstream sin(sfile.path);
  std::getline(sin, header);
  CHECK(header == "u,mean_power,mean_fdr,se_power,se_fdr");
}

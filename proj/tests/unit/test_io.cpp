#include "framepot/error.hpp"
#include "framepot/frame.hpp"
#include "framepot/io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <sstream>

namespace fp = framepot;

TEST(ParseConfiguration, ValidDocument) {
  const auto c = fp::parse_configuration(R"({"d": 2, "vectors": [[1, 0], [0, 1], [0.6, 0.8]]})");
  EXPECT_EQ(c.dimension(), 2);
  EXPECT_EQ(c.size(), 3);
  EXPECT_DOUBLE_EQ(c.vectors()(1, 2), 0.8);
}

TEST(ParseConfiguration, MalformedInputIsParseError) {
  EXPECT_THROW(fp::parse_configuration("{\"d\": 2, \"vectors\": [[1, 0]"), fp::ParseError);
  EXPECT_THROW(fp::parse_configuration("[1, 2]"), fp::ParseError);
  EXPECT_THROW(fp::parse_configuration(R"({"d": 2, "vectors": [[1, 0, 0]]})"), fp::ParseError);
  EXPECT_THROW(fp::parse_configuration(R"({"d": 0, "vectors": [[1]]})"), fp::ParseError);
  EXPECT_THROW(fp::parse_configuration(R"({"d": 1, "vectors": [["x"]]})"), fp::ParseError);
  EXPECT_THROW(fp::load_configuration("/nonexistent/config.json"), fp::ParseError);
}

TEST(ParseConfiguration, NonUnitVectorIsValidationError) {
  EXPECT_THROW(fp::parse_configuration(R"({"d": 2, "vectors": [[0.5, 0], [0, 1]]})"),
               fp::ValidationError);
}

TEST(ConfigurationJson, RoundTrips) {
  const auto c = fp::repeated_ortho_config(3, 5);
  const auto back = fp::parse_configuration(fp::configuration_to_json(c).dump());
  EXPECT_EQ(back.vectors(), c.vectors());
}

TEST(FormatReal, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(std::strtod(fp::format_real(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(fp::format_real(0.1), "0.10000000000000001");
}

TEST(GramCsv, ShapeAndValues) {
  const auto g = fp::gram_of(fp::repeated_ortho_config(2, 3));
  const std::string csv = fp::gram_to_csv(g);
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2);
  }
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "1,0,1");
}

TEST(Serialization, ReportsCarryExpectedKeys) {
  fp::BoundReport b{2.0, 2.0, 0.0, true, 3};
  const nlohmann::json j = b;
  for (const char* key : {"energy", "relaxation", "slack", "pass"}) EXPECT_TRUE(j.contains(key));
}

TEST(ScanCsv, HeaderThenColumns) {
  fp::ScanTable t;
  fp::ScanCell cell;
  cell.d = 2;
  cell.k = 1;
  cell.m = 1;
  cell.count = 3;
  cell.ortho_value = 2.0;
  cell.formula_value = 2.0;
  cell.estimate = fp::ThresholdEstimate{};
  t.cells.push_back(cell);
  fp::ScanCell skipped = cell;
  skipped.estimate.reset();
  skipped.error = "too large";
  t.cells.push_back(skipped);
  const std::string csv = fp::scan_to_csv(t, nlohmann::json{{"tool", "framepot"}});
  std::istringstream in(csv);
  std::string line;
  int comments = 0;
  int data = 0;
  std::string header;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      ++comments;
    } else if (header.empty()) {
      header = line;
    } else {
      ++data;
    }
  }
  EXPECT_GE(comments, 1);
  EXPECT_EQ(header,
            "d,k,m,N,p_lo,p_hi,p_estimate,ortho_value,best_energy_at_p_hi,restarts,seed");
  EXPECT_EQ(data, 1);
}

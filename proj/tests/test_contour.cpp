#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <utility>

#include "dfforge/app.hpp"
#include "dfforge/contour.hpp"
#include "test_util.hpp"

using namespace dfforge;

namespace {

SampledField grid(int n, double lo, double hi, double (*f)(double, double)) {
  SampledField s;
  for (int i = 0; i < n; ++i) s.xs.push_back(lo + (hi - lo) * i / (n - 1));
  s.ys = lo == -hi ? symmetric_axis(hi, n) : s.xs;
  for (double x : s.xs)
    for (double y : s.ys) s.values.push_back(f(x, y));
  return s;
}

}  // namespace

TEST(Levels, Geometric) {
  const auto l = geometric_levels(1.0, 0.4, 3);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], 0.4);
  EXPECT_LT(std::abs(l[1] - 0.16), 1e-16);
  EXPECT_LT(std::abs(l[2] - 0.064), 1e-16);
  EXPECT_EQ(geometric_levels(2.0).size(), 12u);
  EXPECT_THROW(geometric_levels(1.0, 1.0), ConfigurationError);
  EXPECT_THROW(geometric_levels(1.0, 0.0), ConfigurationError);
}

TEST(Levels, SymmetricAxis) {
  const auto ys = symmetric_axis(2.0, 5);
  EXPECT_EQ(ys, (std::vector<double>{-2.0, -1.0, 0.0, 1.0, 2.0}));
  const auto zs = symmetric_axis(1.7, 161);
  for (std::size_t j = 0; j < zs.size(); ++j) EXPECT_EQ(zs[j], -zs[zs.size() - 1 - j]);
  EXPECT_EQ(symmetric_axis(3.0, 1), std::vector<double>{0.0});
}

TEST(MarchingSquares, Circle) {
  const auto f = grid(41, -1.0, 1.0, [](double x, double y) { return x * x + y * y; });
  const auto lines = marching_squares(f, 0.25);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_TRUE(lines[0].closed);
  EXPECT_GT(lines[0].points.size(), 20u);
  for (const auto& p : lines[0].points) EXPECT_NEAR(std::hypot(p.x, p.y), 0.5, 2e-3);
}

TEST(MarchingSquares, OpenLine) {
  const auto f = grid(11, 0.0, 1.0, [](double x, double) { return x; });
  const auto lines = marching_squares(f, 0.35);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_FALSE(lines[0].closed);
  EXPECT_EQ(lines[0].points.size(), 11u);
  for (const auto& p : lines[0].points) EXPECT_NEAR(p.x, 0.35, 1e-15);
}

TEST(MarchingSquares, LevelOutsideRange) {
  const auto f = grid(11, -1.0, 1.0, [](double x, double y) { return x * x + y * y; });
  EXPECT_TRUE(marching_squares(f, 5.0).empty());
  EXPECT_TRUE(marching_squares(f, -1.0).empty());
}

TEST(MarchingSquares, Saddle) {
  SampledField f{{0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0, 0.0, 1.0}};
  const auto lines = marching_squares(f, 0.5);
  EXPECT_EQ(lines.size(), 2u);
  for (const auto& l : lines) EXPECT_EQ(l.points.size(), 2u);
}

TEST(MarchingSquares, MirrorSymmetricField) {
  const auto f = grid(31, -1.0, 1.0, [](double x, double y) { return std::exp(-3.0 * x) * (1.0 + y * y * (1 + x)); });
  for (double level : {0.5, 1.3, 4.0}) {
    std::set<std::pair<double, double>> pts;
    for (const auto& l : marching_squares(f, level))
      for (const auto& p : l.points) pts.emplace(p.x, p.y);
    for (const auto& [x, y] : pts) EXPECT_TRUE(pts.count({x, -y})) << x << " " << y;
  }
}

TEST(MarchingSquares, ValueCountMismatch) {
  SampledField f{{0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0, 0.0}};
  EXPECT_THROW(marching_squares(f, 0.5), ConfigurationError);
}

TEST(ContourDocument, BinneyIsSymmetricInLz) {
  app::ContourSpec spec;
  spec.e_steps = 41;
  spec.lz_steps = 41;
  const auto doc = app::contour_document(parse_builtin("binney:q=0.8"), spec, {}, nullptr);
  EXPECT_EQ(doc["schema_version"], 1);
  ASSERT_EQ(doc["levels"].size(), 12u);
  const double top = doc["grid"]["f_max"];
  for (std::size_t k = 0; k < 12; ++k) {
    EXPECT_LT(testutil::rel(doc["levels"][k]["level"].get<double>(), top * std::pow(0.4, k + 1.0)), 1e-14);
    std::set<std::pair<double, double>> pts;
    for (const auto& pl : doc["levels"][k]["polylines"])
      for (const auto& p : pl["points"]) pts.emplace(p[0].get<double>(), p[1].get<double>());
    for (const auto& [x, y] : pts) EXPECT_TRUE(pts.count({x, -y}));
  }
}

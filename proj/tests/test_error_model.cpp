#include "shuttle/error_model.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace shuttle;

namespace {

// 40-digit reference evaluation at v = 10 m/s, L = 3 um.
constexpr double golden_g_factor = 1.5e-5;
constexpr double golden_hotspot = 1e-5;
constexpr double golden_valley_dense = 7.4318794675335432547e-5;
constexpr double golden_valley_sparse = 7.6629379188627266002e-10;
constexpr double golden_sum = 9.931956096912731882e-5;

struct OptimumRow {
  double L;
  double v;
  double dC;
};
// Reference minimizers from a 40-digit root solve of the derivative.
constexpr OptimumRow golden_optima[] = {
    {1e-6, 5.70098013527261, 5.70793840115931e-5},
    {3e-6, 7.06665142856779, 8.13014779041964e-5},
    {10e-6, 9.25919292518969, 1.32836864199548e-4},
    {30e-6, 11.9766431414704, 2.19770625422708e-4},
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(ErrorModel, GoldenTerms) {
  const auto t = phase_error_terms(10.0, 3e-6);
  EXPECT_LT(rel(t.g_factor, golden_g_factor), 1e-12);
  EXPECT_LT(rel(t.hotspot, golden_hotspot), 1e-12);
  EXPECT_LT(rel(t.valley_dense, golden_valley_dense), 1e-12);
  EXPECT_LT(rel(t.valley_sparse, golden_valley_sparse), 1e-12);
  EXPECT_LT(rel(t.sum(), golden_sum), 1e-12);
  EXPECT_EQ(phase_error(10.0, 3e-6), t.sum());
}

TEST(ErrorModel, LengthScaling) {
  const auto a = phase_error_terms(10.0, 1e-6);
  const auto b = phase_error_terms(10.0, 2e-6);
  EXPECT_EQ(b.g_factor, 2.0 * a.g_factor);
  EXPECT_EQ(b.valley_sparse, 2.0 * a.valley_sparse);
  EXPECT_EQ(b.hotspot, a.hotspot);
  EXPECT_EQ(b.valley_dense, a.valley_dense);
}

TEST(ErrorModel, ZeroLengthLeavesVelocityTerms) {
  const auto t = phase_error_terms(10.0, 0.0);
  EXPECT_EQ(t.g_factor, 0.0);
  EXPECT_EQ(t.valley_sparse, 0.0);
  EXPECT_GT(t.hotspot, 0.0);
}

TEST(ErrorModel, RejectsBadArguments) {
  EXPECT_THROW(phase_error(0.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(phase_error(-1.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(phase_error(1.0, -1e-6), std::invalid_argument);
  EXPECT_THROW(phase_error(INFINITY, 1e-6), std::invalid_argument);
  ErrorModelParams p;
  p.T2_star = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(ErrorModel, DerivativeMatchesCentralDifference) {
  for (double v : {0.1, 1.0, 10.0, 100.0}) {
    for (double L : {1e-6, 3e-6, 10e-6}) {
      const double h = v * 1e-5;
      const double fd = (phase_error(v + h, L) - phase_error(v - h, L)) / (2 * h);
      EXPECT_LT(rel(d_phase_error_dv(v, L), fd), 1e-6) << v << " " << L;
    }
  }
}

TEST(ErrorModel, GoldenSectionFindsParabolaMinimum) {
  const double x = golden_section_minimize([](double t) { return (t - 1.25) * (t - 1.25); }, -3.0,
                                           4.0, 1e-10);
  EXPECT_NEAR(x, 1.25, 1e-9);
}

TEST(ErrorModel, OptimalVelocityMatchesReference) {
  for (const auto& row : golden_optima) {
    const double v = optimal_velocity(row.L);
    EXPECT_LT(rel(v, row.v), 1e-5) << row.L;
    EXPECT_LT(rel(phase_error(v, row.L), row.dC), 1e-10) << row.L;
    EXPECT_LT(std::abs(d_phase_error_dv(v, row.L)) * v / row.dC, 1e-5);
  }
}

TEST(ErrorModel, OptimalVelocityGrowsWithDistance) {
  double prev = 0.0;
  for (double L = 0.5e-6; L <= 60e-6; L *= 1.5) {
    const double v = optimal_velocity(L);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(ErrorModel, OptimalVelocityBeatsDefaultVelocity) {
  for (double L = 1e-6; L <= 31e-6; L += 2e-6) {
    EXPECT_LE(phase_error(optimal_velocity(L), L), phase_error(10.0, L));
  }
}

TEST(ErrorModel, BracketEndpointsWin) {
  EXPECT_EQ(optimal_velocity(3e-6, {}, {.v_min = 0.01, .v_max = 2.0}), 2.0);
  EXPECT_EQ(optimal_velocity(3e-6, {}, {.v_min = 50.0, .v_max = 100.0}), 50.0);
  EXPECT_THROW(optimal_velocity(3e-6, {}, {.v_min = 5.0, .v_max = 1.0}), std::invalid_argument);
}

TEST(ErrorModel, JsonUsesTabulatedUnits) {
  const nlohmann::json j = ErrorModelParams{};
  EXPECT_NEAR(j.at("l_c_nm").get<double>(), 100.0, 1e-12);
  EXPECT_NEAR(j.at("T2_star_us").get<double>(), 20.0, 1e-12);
  EXPECT_NEAR(j.at("E_vs0_ueV").get<double>(), 100.0, 1e-10);
  EXPECT_NEAR(j.at("a_x_pi_per_nm").get<double>(), 0.05, 1e-15);
  const auto back = j.get<ErrorModelParams>();
  EXPECT_LT(rel(phase_error(10.0, 3e-6, back), golden_sum), 1e-12);

  ErrorModelParams p;
  from_json(nlohmann::json{{"T2_star_us", 10.0}}, p);
  EXPECT_LT(rel(phase_error_terms(10.0, 3e-6, p).g_factor, 4 * golden_g_factor), 1e-12);
  EXPECT_THROW(from_json(nlohmann::json{{"T2", 1.0}}, p), std::invalid_argument);
}

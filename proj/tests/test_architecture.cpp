#include "shuttle/architecture.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

using namespace shuttle;

TEST(Architecture, Defaults) {
  const ArchitectureSpec a;
  EXPECT_EQ(a.n_sites, 16u);
  EXPECT_EQ(a.n_zones(), 16u);
  EXPECT_DOUBLE_EQ(a.site_pitch, 2e-6);
  EXPECT_DOUBLE_EQ(a.zone_offset, 1e-6);
  EXPECT_DOUBLE_EQ(a.default_velocity, 10.0);
  EXPECT_DOUBLE_EQ(a.t_1q, 20e-9);
  EXPECT_DOUBLE_EQ(a.t_2q, 45e-9);
  EXPECT_NO_THROW(a.validate());
}

TEST(Architecture, Positions) {
  const ArchitectureSpec a;
  EXPECT_DOUBLE_EQ(position(Location::site(0), a), 0.0);
  EXPECT_DOUBLE_EQ(position(Location::site(5), a), 10e-6);
  EXPECT_DOUBLE_EQ(position(Location::zone(5), a), 11e-6);
  EXPECT_DOUBLE_EQ(position(Location::zone(0), a), 1e-6);
  EXPECT_THROW(position(Location::site(16), a), std::out_of_range);
}

TEST(Architecture, ThreeMicronShuttleTakesPointThreeMicroseconds) {
  const ArchitectureSpec a;
  const double d = distance(Location::site(2), Location::zone(3), a);
  EXPECT_EQ(d, 3e-6);
  EXPECT_EQ(shuttle_time(d, 10.0), 0.3e-6);
  EXPECT_EQ(shuttle_time(3e-6, 10.0), 0.3e-6);
}

TEST(Architecture, DistanceIsSymmetric) {
  const ArchitectureSpec a;
  for (std::size_t i = 0; i < a.n_sites; ++i) {
    for (std::size_t j = 0; j < a.n_sites; ++j) {
      const auto s = Location::site(i);
      const auto z = Location::zone(j);
      EXPECT_EQ(distance(s, z, a), distance(z, s, a));
      EXPECT_NEAR(distance(s, z, a), std::abs(2.0 * double(j) + 1.0 - 2.0 * double(i)) * 1e-6,
                  1e-18);
    }
  }
}

TEST(Architecture, Validation) {
  auto bad = [](auto mutate) {
    ArchitectureSpec a;
    mutate(a);
    return a;
  };
  EXPECT_THROW(bad([](auto& a) { a.n_sites = 1; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& a) { a.site_pitch = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& a) { a.default_velocity = -1; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& a) { a.t_2q = std::nan(""); }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](auto& a) { a.zone_offset = 2e-6; }).validate(), std::invalid_argument);
  EXPECT_THROW(shuttle_time(1e-6, 0.0), std::invalid_argument);
}

TEST(Architecture, JsonRoundTripAndOverrides) {
  ArchitectureSpec a = ArchitectureSpec::with_sites(8);
  a.t_2q = 60e-9;
  const nlohmann::json j = a;
  EXPECT_EQ(j.at("n_sites"), 8);
  EXPECT_DOUBLE_EQ(j.at("t_2q_ns").get<double>(), 60.0);
  EXPECT_EQ(j.get<ArchitectureSpec>(), a);

  ArchitectureSpec b;
  from_json(nlohmann::json{{"default_velocity_mps", 5.0}}, b);
  EXPECT_EQ(b.default_velocity, 5.0);
  EXPECT_EQ(b.n_sites, 16u);
  EXPECT_THROW(from_json(nlohmann::json{{"velocity", 5.0}}, b), std::invalid_argument);
  EXPECT_THROW(from_json(nlohmann::json::array(), b), std::invalid_argument);
}

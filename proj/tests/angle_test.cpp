#include <set>

#include <gtest/gtest.h>

#include "mbqc/angle.hpp"
#include "mbqc/rng.hpp"

namespace mbqc {
namespace {

TEST(Angle, OctantArithmeticStaysExact) {
  for (int a = -16; a < 16; ++a) {
    const Angle x = Angle::octants(a);
    EXPECT_TRUE((-x).is_octant());
    EXPECT_TRUE(x.plus_pi().is_octant());
    EXPECT_EQ((-x).octant(), ((-a % 8) + 8) % 8);
    EXPECT_EQ(x.plus_pi().octant(), (((a + 4) % 8) + 8) % 8);
    for (int b = 0; b < 8; ++b) {
      const Angle sum = x + Angle::octants(b);
      ASSERT_TRUE(sum.is_octant());
      EXPECT_EQ(sum.octant(), (((a + b) % 8) + 8) % 8);
    }
  }
}

TEST(Angle, OctantEqualsRadians) {
  for (int k = 0; k < 8; ++k) {
    EXPECT_EQ(Angle::octants(k), Angle::radians(k * kPi / 4.0));
    EXPECT_NEAR(Angle::octants(k).radians(), k * kPi / 4.0, 1e-12);
  }
  EXPECT_EQ(Angle::octants(0), Angle::radians(kTwoPi - 1e-14));
  EXPECT_FALSE(Angle::octants(1) == Angle::radians(kPi / 4.0 + 1e-9));
}

TEST(Angle, RadiansCanonicalized) {
  EXPECT_NEAR(Angle::radians(-kPi / 2).radians(), 3 * kPi / 2, 1e-15);
  EXPECT_NEAR(Angle::radians(5 * kPi).radians(), kPi, 1e-12);
  EXPECT_GE(Angle::radians(-1e-18).radians(), 0.0);
  EXPECT_LT(Angle::radians(-1e-18).radians(), kTwoPi);
  EXPECT_THROW(Angle::radians(std::nan("")), UsageError);
}

TEST(Angle, MixedArithmeticFallsBackToRadians) {
  const Angle a = Angle::octants(2) + Angle::radians(0.1);
  EXPECT_FALSE(a.is_octant());
  EXPECT_NEAR(a.radians(), kPi / 2 + 0.1, 1e-12);
  EXPECT_THROW((void)a.octant(), UsageError);
}

TEST(Angle, PhaseMatchesPolar) {
  for (int k = 0; k < 8; ++k) {
    const auto exact = Angle::octants(k).phase();
    const auto polar = std::polar(1.0, k * kPi / 4.0);
    EXPECT_NEAR(std::abs(exact - polar), 0.0, 1e-15);
  }
}

TEST(RngStream, SameSeedSameStream) {
  RngStream a(42);
  RngStream b(42);
  RngStream c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs = differs || x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(RngStream, UniformInUnitInterval) {
  RngStream r(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.01);
}

TEST(RngStream, ShotStreamsAreDistinct) {
  auto a = RngStream::for_shot(9, 0);
  auto b = RngStream::for_shot(9, 1);
  auto s = RngStream::for_secrets(9, 0);
  const auto x = a.next();
  EXPECT_NE(x, b.next());
  EXPECT_NE(x, s.next());
}

TEST(RngStream, NearbySeedsShareNoShotStreams) {
  std::set<std::uint64_t> first;
  for (std::uint64_t shot = 0; shot < 256; ++shot) first.insert(RngStream::for_shot(11, shot).next());
  for (std::uint64_t shot = 0; shot < 256; ++shot) EXPECT_FALSE(first.contains(RngStream::for_shot(12, shot).next()));
}

}  // namespace
}  // namespace mbqc

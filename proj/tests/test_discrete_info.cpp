#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "oinfo/discrete_info.hpp"
#include "oinfo/error.hpp"
#include "oinfo/rng.hpp"

namespace d = oinfo::discrete;
using oinfo::ErrorCode;
using oinfo::Subset;

namespace {

d::DiscreteJoint random_binary_joint(std::size_t n, std::uint64_t seed) {
  oinfo::Rng rng(seed);
  std::vector<double> p(std::size_t{1} << n);
  double total = 0.0;
  for (double& x : p) total += (x = rng.uniform() + 1e-3);
  for (double& x : p) x /= total;
  return d::DiscreteJoint(std::vector<std::size_t>(n, 2), p);
}

d::DiscreteJoint three_copies_of_a_coin() {
  std::vector<double> p(8, 0.0);
  p[0b000] = 0.5;
  p[0b111] = 0.5;
  return d::DiscreteJoint({2, 2, 2}, p);
}

d::DiscreteJoint three_fair_coins() { return d::DiscreteJoint({2, 2, 2}, std::vector<double>(8, 0.125)); }

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("oinfo_discrete_" + name);
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST(DiscreteEntropy, Basics) {
  const d::DiscreteJoint coin({2}, {0.5, 0.5});
  EXPECT_NEAR(d::entropy(coin), 1.0, 1e-15);
  const d::DiscreteJoint fixed({3}, {0.0, 1.0, 0.0});
  EXPECT_EQ(d::entropy(fixed), 0.0);
  const auto x = d::xor_joint();
  for (std::size_t v = 0; v < 3; ++v) EXPECT_NEAR(d::entropy(x, Subset{v}), 1.0, 1e-15);
  EXPECT_NEAR(d::entropy(x), 2.0, 1e-15);
}

TEST(XorJoint, Table) {
  const auto x = d::xor_joint();
  double total = 0.0;
  for (double p : x.probabilities()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t y = 0; y < 2; ++y) {
        const std::array<std::size_t, 3> outcome{a, b, y};
        EXPECT_EQ(x.probability(outcome), (y == (a ^ b)) ? 0.25 : 0.0);
      }
}

TEST(XorJoint, MeasuresAreExact) {
  const auto x = d::xor_joint();
  EXPECT_NEAR(d::total_correlation(x), 1.0, 1e-12);
  EXPECT_NEAR(d::dual_total_correlation(x), 2.0, 1e-12);
  EXPECT_NEAR(d::o_information(x), -1.0, 1e-12);
  EXPECT_NEAR(d::normalized_o_information(x), -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(d::mutual_information(x, 0, 1), 0.0, 1e-12);
  const std::array<std::size_t, 1> y{2};
  EXPECT_NEAR(d::conditional_mutual_information(x, 0, 1, y), 1.0, 1e-12);
}

TEST(DiscreteMeasures, ThreeCopiesOfACoinIsRedundant) {
  const auto c = three_copies_of_a_coin();
  EXPECT_NEAR(d::total_correlation(c), 2.0, 1e-12);
  EXPECT_NEAR(d::dual_total_correlation(c), 1.0, 1e-12);
  EXPECT_NEAR(d::o_information(c), 1.0, 1e-12);
}

TEST(DiscreteMeasures, IndependentCoinsCarryNothing) {
  const auto c = three_fair_coins();
  EXPECT_NEAR(d::total_correlation(c), 0.0, 1e-12);
  EXPECT_NEAR(d::dual_total_correlation(c), 0.0, 1e-12);
  EXPECT_NEAR(d::o_information(c), 0.0, 1e-12);
  const std::array<std::size_t, 1> one{2};
  EXPECT_NEAR(d::conditional_mutual_information(c, 0, 1, {}), 0.0, 1e-12);
  EXPECT_NEAR(d::conditional_mutual_information(c, 0, 1, one), 0.0, 1e-12);
  EXPECT_NEAR(d::conditional_mutual_information(c, 2, 0, std::array<std::size_t, 1>{1}), 0.0, 1e-12);
}

TEST(DiscreteMeasures, ChainConsistencyOnRandomJoints) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 2;
    const auto j = random_binary_joint(n, seed);
    double marginals = 0.0;
    for (std::size_t v = 0; v < n; ++v) marginals += d::entropy(j, Subset{v});
    EXPECT_NEAR(d::total_correlation(j), marginals - d::entropy(j), 1e-12);
    EXPECT_NEAR(d::dual_total_correlation(j), static_cast<double>(n) * d::description_complexity(j), 1e-12);
    EXPECT_NEAR(d::o_information(j), d::total_correlation(j) - d::dual_total_correlation(j), 1e-12);
    EXPECT_GE(d::total_correlation(j), -1e-12);
    EXPECT_GE(d::dual_total_correlation(j), -1e-12);
  }
}

TEST(DiscreteMeasures, ThreeVariableOEqualsCoInformation) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto j = random_binary_joint(3, seed);
    const double co = d::mutual_information(j, 0, 1) -
                      d::conditional_mutual_information(j, 0, 1, std::array<std::size_t, 1>{2});
    EXPECT_NEAR(d::o_information(j), co, 1e-12);
  }
}

TEST(DiscreteMarginals, OrderIrrelevant) {
  const auto j = random_binary_joint(4, 77);
  const double direct = d::entropy(j, Subset{0, 2});
  const double via_three = d::entropy(j.marginalize(Subset{0, 1, 2}), Subset{0, 2});
  const double via_other = d::entropy(j.marginalize(Subset{0, 2, 3}), Subset{0, 1});
  EXPECT_NEAR(direct, via_three, 1e-14);
  EXPECT_NEAR(direct, via_other, 1e-14);
  EXPECT_EQ(j.marginalize(Subset{1, 3}).arity(), 2u);
}

TEST(DiscreteJointType, Validation) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const oinfo::Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code([] { d::DiscreteJoint({2}, {0.7, 0.7}); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code([] { d::DiscreteJoint({2}, {1.5, -0.5}); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code([] { d::DiscreteJoint({3}, {0.5, 0.5}); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code([] { d::DiscreteJoint(std::vector<std::size_t>(21, 2), {1.0}); }), ErrorCode::InvalidDistribution);
  const auto x = d::xor_joint();
  EXPECT_EQ(code([&] { d::conditional_mutual_information(x, 0, 0, {}); }), ErrorCode::IndexOverlap);
  EXPECT_EQ(code([&] { d::conditional_mutual_information(x, 0, 1, std::array<std::size_t, 1>{1}); }),
            ErrorCode::IndexOverlap);
  const d::DiscreteJoint pair({2, 2}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_EQ(code([&] { d::o_information(pair); }), ErrorCode::SubsetTooSmall);
  EXPECT_EQ(code([&] { d::entropy(pair, Subset{4}); }), ErrorCode::IndexOutOfRange);
}

TEST(DiscreteJointType, LoadsCsv) {
  const auto path = temp_file("xor.csv", "x1,x2,y,p\n0,0,0,0.25\n0,1,1,0.25\n# comment\n1,0,1,0.125\n1,0,1,0.125\n1,1,0,0.25\n");
  const auto j = d::DiscreteJoint::load_csv(path);
  EXPECT_EQ(j.arity(), 3u);
  EXPECT_NEAR(d::o_information(j), -1.0, 1e-12);
  std::filesystem::remove(path);

  const auto bad = temp_file("bad.csv", "0,0,0.5\n1,x,0.5\n");
  EXPECT_THROW(d::DiscreteJoint::load_csv(bad), oinfo::Error);
  std::filesystem::remove(bad);

  const auto semi = temp_file("semi.csv", "0;0.5\n1;0.5\n");
  EXPECT_NEAR(d::entropy(d::DiscreteJoint::load_csv(semi, ';')), 1.0, 1e-15);
  std::filesystem::remove(semi);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "boxqp/cuts.hpp"
#include "boxqp/exact.hpp"

namespace boxqp {
namespace {

using Row = std::array<double, 10>;

std::set<std::array<long long, 10>> keys(const std::vector<LinearCut>& cuts) {
  std::set<std::array<long long, 10>> out;
  for (const auto& c : cuts) out.insert(canonical_key(c));
  return out;
}

const std::array<CutFamily, 5> kFamilies{CutFamily::kRlt, CutFamily::kTri, CutFamily::kEtri1,
                                          CutFamily::kEtri2, CutFamily::kEtri3};

TEST(ApplySwitch, ReferenceEtri1Rows) {
  const LinearCut base = base_cuts(CutFamily::kEtri1)[0];
  EXPECT_EQ(base.coefficients(), (Row{2, 0, 0, 1, 0, 0, -2, -2, 1, 0}));
  EXPECT_EQ(apply_switch(base, SwitchPattern::switching(0b001)).coefficients(),
            (Row{-4, -2, -2, 1, 0, 0, 2, 2, 1, 3}));
  EXPECT_EQ(apply_switch(base, SwitchPattern::switching(0b010)).coefficients(),
            (Row{0, 0, 1, 1, 0, 0, 2, -2, -1, 0}));
  EXPECT_EQ(apply_switch(base, SwitchPattern{}).coefficients(), base.coefficients());
}

TEST(ApplySwitch, IsAGroupAction) {
  const auto& patterns = SwitchPattern::all();
  ASSERT_EQ(patterns.size(), 48U);
  for (CutFamily f : kFamilies) {
    for (const LinearCut& c : catalog(f)) {
      for (const auto& p1 : patterns) {
        const LinearCut once = apply_switch(c, p1);
        for (const auto& p2 : patterns) {
          ASSERT_EQ(apply_switch(once, p2).coefficients(), apply_switch(c, compose(p2, p1)).coefficients());
        }
      }
    }
  }
}

TEST(ApplySwitch, PatternsFormAGroup) {
  const auto& patterns = SwitchPattern::all();
  for (const auto& a : patterns) {
    for (const auto& b : patterns) {
      EXPECT_NE(std::find(patterns.begin(), patterns.end(), compose(a, b)), patterns.end());
    }
    const bool has_inverse = std::any_of(patterns.begin(), patterns.end(), [&](const SwitchPattern& b) {
      return compose(a, b) == SwitchPattern{} && compose(b, a) == SwitchPattern{};
    });
    EXPECT_TRUE(has_inverse);
  }
}

TEST(GenerateFamily, SizesAndCatalogMatch) {
  EXPECT_EQ(generate_family(CutFamily::kRlt).size(), 15U);
  EXPECT_EQ(generate_family(CutFamily::kTri).size(), 4U);
  EXPECT_EQ(generate_family(CutFamily::kEtri1).size(), 24U);
  EXPECT_EQ(generate_family(CutFamily::kEtri2).size(), 24U);
  EXPECT_EQ(generate_family(CutFamily::kEtri3).size(), 48U);
  for (CutFamily f : kFamilies) {
    const auto gen = generate_family(f);
    const auto& pub = catalog(f);
    EXPECT_EQ(gen.size(), pub.size()) << family_name(f);
    EXPECT_EQ(keys(gen), keys(pub)) << family_name(f);
    // Reference rows are already primitive integer vectors.
    for (const auto& c : pub) {
      const auto k = canonical_key(c);
      for (int t = 0; t < 10; ++t) EXPECT_EQ(static_cast<double>(k[t]), c.coefficients()[t]);
    }
  }
}

TEST(GenerateFamily, TriIsTheTriangleSystem) {
  const std::set<std::array<long long, 10>> expected{
      {1, 0, 0, 0, 0, 0, -1, -1, 1, 0},
      {0, 1, 0, 0, 0, 0, -1, 1, -1, 0},
      {0, 0, 1, 0, 0, 0, 1, -1, -1, 0},
      {-1, -1, -1, 0, 0, 0, 1, 1, 1, 1}};
  EXPECT_EQ(keys(generate_family(CutFamily::kTri)), expected);
}

TEST(GenerateFamily, OrbitsAreClosed) {
  for (CutFamily f : kFamilies) {
    const auto family = keys(generate_family(f));
    for (const LinearCut& c : generate_family(f)) {
      for (const auto& p : SwitchPattern::all()) {
        EXPECT_TRUE(family.contains(canonical_key(apply_switch(c, p)))) << family_name(f);
      }
    }
  }
}

TEST(GenerateFamily, MovesToTriple) {
  for (const LinearCut& c : generate_family(CutFamily::kEtri1, {2, 5, 7})) {
    EXPECT_EQ(c.index, (std::array<int, 3>{2, 5, 7}));
  }
}

TEST(CoefficientNorm, ReferenceNorms) {
  auto min_norm = [](CutFamily f) {
    double m = 1e300;
    for (const auto& c : generate_family(f)) m = std::min(m, coefficient_norm(c));
    return m;
  };
  EXPECT_DOUBLE_EQ(coefficient_norm(base_cuts(CutFamily::kEtri1)[0]), std::sqrt(14.0));
  EXPECT_DOUBLE_EQ(coefficient_norm(base_cuts(CutFamily::kEtri2)[0]), std::sqrt(65.0));
  EXPECT_DOUBLE_EQ(coefficient_norm(base_cuts(CutFamily::kEtri3)[0]), std::sqrt(122.0));
  EXPECT_DOUBLE_EQ(min_norm(CutFamily::kEtri1), std::sqrt(11.0));
  EXPECT_DOUBLE_EQ(min_norm(CutFamily::kEtri2), std::sqrt(50.0));
  EXPECT_DOUBLE_EQ(min_norm(CutFamily::kEtri3), std::sqrt(115.0));
}

TEST(EvaluateCut, Etri1BaseFixtures) {
  const LinearCut base = base_cuts(CutFamily::kEtri1)[0];
  EXPECT_DOUBLE_EQ(evaluate_cut(base, MomentPoint::lift(Vector::Zero(3))), 0.0);
  EXPECT_DOUBLE_EQ(evaluate_cut(base, MomentPoint::lift(Vector::Ones(3))), 0.0);
  EXPECT_DOUBLE_EQ(evaluate_on_lift(base_cuts(CutFamily::kEtri2)[0], {1, 1, 1}), 1.0);
}

TEST(EvaluateCut, UsesTripleIndices) {
  LinearCut c = base_cuts(CutFamily::kEtri1)[0].on({1, 3, 4});
  Vector x = Vector::Zero(5);
  x[1] = 1.0;
  x[3] = 1.0;
  // x_1 = x_3 = 1, x_4 = 0: 2 + 1 - 2 = 1.
  EXPECT_DOUBLE_EQ(evaluate_cut(c, MomentPoint::lift(x)), 1.0);
}

TEST(Validity, CatalogCutsOnRankOneLifts) {
  for (CutFamily f : kFamilies) {
    for (const LinearCut& c : catalog(f)) {
      EXPECT_GE(verify_validity_by_sampling(c, 100000, 17), -1e-12) << c;
      for (int v = 0; v < 8; ++v) {
        EXPECT_GE(evaluate_on_lift(c, {double(v & 1), double((v >> 1) & 1), double((v >> 2) & 1)}), 0.0) << c;
      }
    }
  }
}

TEST(Validity, InvalidCutIsCaught) {
  const LinearCut bad = LinearCut::from_coefficients({0, 0, 0, 0, 0, 0, -1, 0, 0, 0}, CutFamily::kRlt);
  EXPECT_LT(verify_validity_by_sampling(bad, 100000, 17), -0.5);
  EXPECT_THROW(verify_validity_by_sampling(bad, 0, 1), std::invalid_argument);
}

TEST(TightPoints, TightPointFixtures) {
  const std::array<std::pair<CutFamily, int>, 3> cases{
      {{CutFamily::kEtri1, 5}, {CutFamily::kEtri2, 5}, {CutFamily::kEtri3, 4}}};
  for (const auto& [f, rank] : cases) {
    const auto pts = tight_points(f);
    EXPECT_EQ(pts.size(), static_cast<std::size_t>(rank + 1));
    for (const auto& x : pts) {
      for (double v : x) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      EXPECT_LE(std::abs(evaluate_on_lift(base_cuts(f)[0], x)), 1e-12) << family_name(f);
    }
    EXPECT_EQ(lifted_affine_rank(pts), rank) << family_name(f);
  }
}

TEST(CutTable, RoundTrip) {
  const auto& cuts = catalog(CutFamily::kEtri3);
  const std::string text = format_cut_table(cuts);
  EXPECT_EQ(text.substr(0, text.find('\n')), "x1 x2 x3 X11 X22 X33 X12 X13 X23 b");
  const auto back = parse_cut_table(text, CutFamily::kEtri3);
  ASSERT_EQ(back.size(), cuts.size());
  for (std::size_t i = 0; i < cuts.size(); ++i) EXPECT_TRUE(back[i].same_coefficients(cuts[i]));
  EXPECT_THROW(parse_cut_table("1 2 3\n", CutFamily::kTri), std::invalid_argument);
}

TEST(CanonicalKey, DividesCommonFactor) {
  const LinearCut c = LinearCut::from_coefficients({2, 0, 0, 0, 0, 0, -2, 0, 0, 0}, CutFamily::kRlt);
  EXPECT_EQ(canonical_key(c), (std::array<long long, 10>{1, 0, 0, 0, 0, 0, -1, 0, 0, 0}));
  const LinearCut frac = LinearCut::from_coefficients({0.5, 0, 0, 0, 0, 0, 0, 0, 0, 0}, CutFamily::kRlt);
  EXPECT_THROW(canonical_key(frac), std::domain_error);
}

TEST(Families, NamesRoundTrip) {
  for (CutFamily f : kFamilies) EXPECT_EQ(parse_family(family_name(f)), f);
  EXPECT_EQ(parse_family("etri2"), CutFamily::kEtri2);
  EXPECT_THROW(parse_family("pentagonal"), std::invalid_argument);
}

}  // namespace
}  // namespace boxqp

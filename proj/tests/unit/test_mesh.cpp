#include <gtest/gtest.h>

#include "dgnn/mesh.hpp"

using namespace dgnn;

TEST(Mesh, StationaryCounts) {
  const Mesh m = build_mesh({{0, 1}, {0, 1}}, {2, 2});
  EXPECT_EQ(m.num_elements(), 4);
  EXPECT_EQ(m.count(FaceCategory::InteriorTimeLike), 4);
  EXPECT_EQ(m.count(FaceCategory::Boundary), 8);
  EXPECT_EQ(m.count(FaceCategory::InteriorSpaceLike), 0);
}

TEST(Mesh, SpaceTimeCounts) {
  const Mesh m = build_mesh({{0, 1}, {0, 1}}, {2, 2}, 1);
  EXPECT_EQ(m.count(FaceCategory::InteriorTimeLike), 2);
  EXPECT_EQ(m.count(FaceCategory::InteriorSpaceLike), 2);
  EXPECT_EQ(m.count(FaceCategory::Boundary), 4);
  EXPECT_EQ(m.count(FaceCategory::Initial), 2);
  EXPECT_EQ(m.count(FaceCategory::Terminal), 2);
  for (const Face& f : m.faces()) {
    if (f.category == FaceCategory::Boundary) EXPECT_EQ(f.axis, 0);
    if (f.category == FaceCategory::InteriorSpaceLike) EXPECT_GT(f.normal[1], 0.0);
  }
}

TEST(Mesh, HelmholtzGrid) {
  const Mesh m = build_mesh({{0, 1}, {0, 1}}, {12, 12});
  EXPECT_EQ(m.num_elements(), 144);
  EXPECT_NEAR(4 * M_PI * m.h(), M_PI / 3, 1e-14);
}

TEST(Mesh, ElementsTileTheDomain) {
  const Mesh m = build_mesh({{0, 2}, {-1, 1}}, {3, 5}, 1);
  double vol = 0.0;
  for (const Element& e : m.elements()) {
    vol += e.box.measure();
    EXPECT_EQ(e.faces.size(), 4u);
  }
  EXPECT_NEAR(vol, 4.0, 1e-13);
  // every interior face is shared by two elements that list it
  for (int f = 0; f < m.num_faces(); ++f) {
    const Face& face = m.face(f);
    for (int s = 0; s < face.num_neighbors; ++s) {
      const auto& lst = m.element(face.neighbors[s]).faces;
      EXPECT_NE(std::find(lst.begin(), lst.end(), f), lst.end());
    }
  }
}

TEST(Mesh, OutwardSignsOppose) {
  const Mesh m = build_mesh({{0, 1}, {0, 1}}, {3, 3});
  for (const Face& f : m.faces()) {
    if (!f.interior()) continue;
    EXPECT_DOUBLE_EQ(f.outward_sign(0), 1.0);
    EXPECT_DOUBLE_EQ(f.outward_sign(1), -1.0);
  }
}

TEST(Mesh, JumpOfContinuousTraceVanishes) {
  const Mesh m = build_mesh({{0, 1}, {0, 1}}, {2, 2}, 1);
  for (const Face& f : m.faces()) {
    if (f.category != FaceCategory::InteriorTimeLike) continue;
    const auto j = normal_jump(f, Complex(3), Complex(3));
    for (const Complex& c : j) EXPECT_EQ(c, Complex(0));
  }
}

TEST(Mesh, TimeJump) {
  const Mesh m = build_mesh({{0, 1}, {0, 1}}, {2, 2}, 1);
  for (const Face& f : m.faces()) {
    if (f.category != FaceCategory::InteriorSpaceLike) continue;
    EXPECT_EQ(time_jump(f, 1.0, 0.0), Complex(1.0));
  }
}

TEST(Mesh, GradientJump) {
  const Mesh m = build_mesh({{0, 1}, {0, 1}}, {2, 1});
  int seen = 0;
  for (const Face& f : m.faces()) {
    if (!f.interior()) continue;
    ++seen;
    EXPECT_EQ(normal_jump(f, {Complex(1), 0, 0, 0}, {Complex(-1), 0, 0, 0}), Complex(2.0));
  }
  EXPECT_EQ(seen, 1);
}

TEST(Mesh, RejectsBadInput) {
  EXPECT_THROW(build_mesh({{0, 1}, {0, 1}}, {0, 2}), InputError);
  EXPECT_THROW(build_mesh({{1, 0}, {0, 1}}, {2, 2}), InputError);
}

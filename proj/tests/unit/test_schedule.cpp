#include <gtest/gtest.h>

#include "dgnn/schedule.hpp"
#include "dgnn/types.hpp"

using namespace dgnn;

TEST(Schedule, LinearForms) {
  const Schedule a = Schedule::parse("2r+9");
  EXPECT_EQ(a(1), 11);
  EXPECT_EQ(a(4), 17);
  EXPECT_EQ(Schedule::parse("2r+1")(4), 9);
  EXPECT_EQ(Schedule::parse("2 * r + 3")(6), 15);
  EXPECT_EQ(a.text(), "2r+9");
}

TEST(Schedule, PowersAndGroups) {
  EXPECT_EQ(Schedule::parse("(r+1)^2")(3), 16);
  EXPECT_EQ(Schedule::parse("16+4(r-1)")(2), 20);
  EXPECT_EQ(Schedule::parse("r^2-r")(5), 20);
  EXPECT_EQ(Schedule::parse("-r+10")(3), 7);
}

TEST(Schedule, Constants) {
  EXPECT_EQ(Schedule::parse("7")(1), 7);
  EXPECT_EQ(Schedule::parse("7")(12), 7);
  EXPECT_EQ(Schedule::constant(5)(3), 5);
}

TEST(Schedule, Errors) {
  for (const char* bad : {"", "2x+1", "(r+1", "r+", "2r)", "3^"}) {
    EXPECT_THROW(Schedule::parse(bad), ConfigError) << bad;
  }
  EXPECT_THROW(Schedule()(1), ConfigError);
}

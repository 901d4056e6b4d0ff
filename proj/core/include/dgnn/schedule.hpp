#pragma once

#include <string>

namespace dgnn {

/// Integer expression in the iteration index r, e.g. "2r+9", "(r+1)^2", "7".
/// Supports + - * ^, parentheses and implicit multiplication ("2r").
class Schedule {
 public:
  Schedule() = default;
  static Schedule parse(const std::string& text);
  static Schedule constant(int value);

  long operator()(int r) const;
  const std::string& text() const { return text_; }
  bool empty() const { return text_.empty(); }

 private:
  std::string text_;
};

}  // namespace dgnn

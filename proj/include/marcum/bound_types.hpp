#pragma once

#include <string_view>

namespace marcum {

/// Which side of the target a bound sits on.
enum class Side { lower, upper };

constexpr std::string_view to_string(Side side) {
  return side == Side::lower ? "lower" : "upper";
}

}  // namespace marcum

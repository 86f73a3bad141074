#pragma once

#include <array>
#include <span>

#include "boxqp/cuts.hpp"

namespace boxqp::detail {

std::span<const std::array<int, 10>> reference_rows(CutFamily family);

}  // namespace boxqp::detail

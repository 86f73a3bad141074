// Reference coefficient tables on the canonical triple, columns
// x1 x2 x3 X11 X22 X33 X12 X13 X23 b, each row read as "... + b >= 0".
#include "catalog_tables.hpp"

namespace boxqp::detail {

// X_aa <= x_a, then for each pair the four McCormick inequalities.
constexpr std::array<std::array<int, 10>, 15> kRltTable{{
    {1, 0, 0, -1, 0, 0, 0, 0, 0, 0},
    {0, 1, 0, 0, -1, 0, 0, 0, 0, 0},
    {0, 0, 1, 0, 0, -1, 0, 0, 0, 0},
    //
    {1, 0, 0, 0, 0, 0, -1, 0, 0, 0},
    {0, 1, 0, 0, 0, 0, -1, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
    {-1, -1, 0, 0, 0, 0, 1, 0, 0, 1},
    //
    {1, 0, 0, 0, 0, 0, 0, -1, 0, 0},
    {0, 0, 1, 0, 0, 0, 0, -1, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
    {-1, 0, -1, 0, 0, 0, 0, 1, 0, 1},
    //
    {0, 1, 0, 0, 0, 0, 0, 0, -1, 0},
    {0, 0, 1, 0, 0, 0, 0, 0, -1, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
    {0, -1, -1, 0, 0, 0, 0, 0, 1, 1},
}};

constexpr std::array<std::array<int, 10>, 4> kTriTable{{
    {1, 0, 0, 0, 0, 0, -1, -1, 1, 0},
    {0, 1, 0, 0, 0, 0, -1, 1, -1, 0},
    {0, 0, 1, 0, 0, 0, 1, -1, -1, 0},
    {-1, -1, -1, 0, 0, 0, 1, 1, 1, 1},
}};

constexpr std::array<std::array<int, 10>, 24> kEtri1Table{{
    {  2,   0,   0,   1,   0,   0,  -2,  -2,   1,   0},
    {  0,   1,   0,   1,   0,   0,  -2,   2,  -1,   0},
    {  0,   0,   1,   1,   0,   0,   2,  -2,  -1,   0},
    { -2,  -1,  -1,   1,   0,   0,   2,   2,   1,   1},
    { -4,  -2,  -2,   1,   0,   0,   2,   2,   1,   3},
    { -2,  -1,   2,   1,   0,   0,   2,  -2,  -1,   1},
    { -2,   2,  -1,   1,   0,   0,  -2,   2,  -1,   1},
    {  0,   1,   1,   1,   0,   0,  -2,  -2,   1,   0},
    //
    {  0,   2,   0,   0,   1,   0,  -2,   1,  -2,   0},
    {  1,   0,   0,   0,   1,   0,  -2,  -1,   2,   0},
    { -2,  -4,  -2,   0,   1,   0,   2,   1,   2,   3},
    { -1,  -2,   2,   0,   1,   0,   2,  -1,  -2,   1},
    {  0,   0,   1,   0,   1,   0,   2,  -1,  -2,   0},
    { -1,  -2,  -1,   0,   1,   0,   2,   1,   2,   1},
    {  2,  -2,  -1,   0,   1,   0,  -2,  -1,   2,   1},
    {  1,   0,   1,   0,   1,   0,  -2,   1,  -2,   0},
    //
    {  0,   0,   2,   0,   0,   1,   1,  -2,  -2,   0},
    { -2,  -2,  -4,   0,   0,   1,   1,   2,   2,   3},
    {  1,   0,   0,   0,   0,   1,  -1,  -2,   2,   0},
    { -1,   2,  -2,   0,   0,   1,  -1,   2,  -2,   1},
    {  0,   1,   0,   0,   0,   1,  -1,   2,  -2,   0},
    {  2,  -1,  -2,   0,   0,   1,  -1,  -2,   2,   1},
    { -1,  -1,  -2,   0,   0,   1,   1,   2,   2,   1},
    {  1,   1,   0,   0,   0,   1,   1,  -2,  -2,   0},
}};

constexpr std::array<std::array<int, 10>, 24> kEtri2Table{{
    {  4,   0,   0,   4,   0,   0,  -4,  -4,   1,   0},
    {  0,   1,   0,   4,   0,   0,  -4,   4,  -1,   0},
    {  0,   0,   1,   4,   0,   0,   4,  -4,  -1,   0},
    { -4,  -1,  -1,   4,   0,   0,   4,   4,   1,   1},
    {-12,  -4,  -4,   4,   0,   0,   4,   4,   1,   8},
    { -8,  -3,   4,   4,   0,   0,   4,  -4,  -1,   4},
    { -8,   4,  -3,   4,   0,   0,  -4,   4,  -1,   4},
    { -4,   3,   3,   4,   0,   0,  -4,  -4,   1,   1},
    //
    {  0,   4,   0,   0,   4,   0,  -4,   1,  -4,   0},
    {  1,   0,   0,   0,   4,   0,  -4,  -1,   4,   0},
    { -4, -12,  -4,   0,   4,   0,   4,   1,   4,   8},
    { -3,  -8,   4,   0,   4,   0,   4,  -1,  -4,   4},
    {  0,   0,   1,   0,   4,   0,   4,  -1,  -4,   0},
    { -1,  -4,  -1,   0,   4,   0,   4,   1,   4,   1},
    {  4,  -8,  -3,   0,   4,   0,  -4,  -1,   4,   4},
    {  3,  -4,   3,   0,   4,   0,  -4,   1,  -4,   1},
    //
    {  0,   0,   4,   0,   0,   4,   1,  -4,  -4,   0},
    { -4,  -4, -12,   0,   0,   4,   1,   4,   4,   8},
    {  1,   0,   0,   0,   0,   4,  -1,  -4,   4,   0},
    { -3,   4,  -8,   0,   0,   4,  -1,   4,  -4,   4},
    {  0,   1,   0,   0,   0,   4,  -1,   4,  -4,   0},
    {  4,  -3,  -8,   0,   0,   4,  -1,  -4,   4,   4},
    { -1,  -1,  -4,   0,   0,   4,   1,   4,   4,   1},
    {  3,   3,  -4,   0,   0,   4,   1,  -4,  -4,   1},
}};

constexpr std::array<std::array<int, 10>, 48> kEtri3Table{{
    {  4,   0,   0,   4,   1,   0,  -8,  -4,   3,   0},
    {  0,   3,   0,   4,   1,   0,  -8,   4,  -3,   0},
    { -4,  -2,   3,   4,   1,   0,   8,  -4,  -3,   1},
    { -8,  -5,  -3,   4,   1,   0,   8,   4,   3,   4},
    {-12,  -8,  -4,   4,   1,   0,   8,   4,   3,   8},
    { -8,  -5,   4,   4,   1,   0,   8,  -4,  -3,   4},
    { -4,   6,  -1,   4,   1,   0,  -8,   4,  -3,   1},
    {  0,   3,   1,   4,   1,   0,  -8,  -4,   3,   0},
    //
    {  4,   0,   0,   4,   0,   1,  -4,  -8,   3,   0},
    { -4,   3,  -2,   4,   0,   1,  -4,   8,  -3,   1},
    {  0,   0,   3,   4,   0,   1,   4,  -8,  -3,   0},
    { -8,  -3,  -5,   4,   0,   1,   4,   8,   3,   4},
    {-12,  -4,  -8,   4,   0,   1,   4,   8,   3,   8},
    { -4,  -1,   6,   4,   0,   1,   4,  -8,  -3,   1},
    { -8,   4,  -5,   4,   0,   1,  -4,   8,  -3,   4},
    {  0,   1,   3,   4,   0,   1,  -4,  -8,   3,   0},
    //
    {  0,   4,   0,   1,   4,   0,  -8,   3,  -4,   0},
    {  3,   0,   0,   1,   4,   0,  -8,  -3,   4,   0},
    { -8, -12,  -4,   1,   4,   0,   8,   3,   4,   8},
    { -5,  -8,   4,   1,   4,   0,   8,  -3,  -4,   4},
    { -2,  -4,   3,   1,   4,   0,   8,  -3,  -4,   1},
    { -5,  -8,  -3,   1,   4,   0,   8,   3,   4,   4},
    {  6,  -4,  -1,   1,   4,   0,  -8,  -3,   4,   1},
    {  3,   0,   1,   1,   4,   0,  -8,   3,  -4,   0},
    //
    {  0,   4,   0,   0,   4,   1,  -4,   3,  -8,   0},
    {  3,  -4,  -2,   0,   4,   1,  -4,  -3,   8,   1},
    { -4, -12,  -8,   0,   4,   1,   4,   3,   8,   8},
    { -1,  -4,   6,   0,   4,   1,   4,  -3,  -8,   1},
    {  0,   0,   3,   0,   4,   1,   4,  -3,  -8,   0},
    { -3,  -8,  -5,   0,   4,   1,   4,   3,   8,   4},
    {  4,  -8,  -5,   0,   4,   1,  -4,  -3,   8,   4},
    {  1,   0,   3,   0,   4,   1,  -4,   3,  -8,   0},
    //
    {  0,   0,   4,   1,   0,   4,   3,  -8,  -4,   0},
    { -8,  -4, -12,   1,   0,   4,   3,   8,   4,   8},
    {  3,   0,   0,   1,   0,   4,  -3,  -8,   4,   0},
    { -5,   4,  -8,   1,   0,   4,  -3,   8,  -4,   4},
    { -2,   3,  -4,   1,   0,   4,  -3,   8,  -4,   1},
    {  6,  -1,  -4,   1,   0,   4,  -3,  -8,   4,   1},
    { -5,  -3,  -8,   1,   0,   4,   3,   8,   4,   4},
    {  3,   1,   0,   1,   0,   4,   3,  -8,  -4,   0},
    //
    {  0,   0,   4,   0,   1,   4,   3,  -4,  -8,   0},
    { -4,  -8, -12,   0,   1,   4,   3,   4,   8,   8},
    {  3,  -2,  -4,   0,   1,   4,  -3,  -4,   8,   1},
    { -1,   6,  -4,   0,   1,   4,  -3,   4,  -8,   1},
    {  0,   3,   0,   0,   1,   4,  -3,   4,  -8,   0},
    {  4,  -5,  -8,   0,   1,   4,  -3,  -4,   8,   4},
    { -3,  -5,  -8,   0,   1,   4,   3,   4,   8,   4},
    {  1,   3,   0,   0,   1,   4,   3,  -4,  -8,   0},
}};
std::span<const std::array<int, 10>> reference_rows(CutFamily family) {
  switch (family) {
    case CutFamily::kRlt: return kRltTable;
    case CutFamily::kTri: return kTriTable;
    case CutFamily::kEtri1: return kEtri1Table;
    case CutFamily::kEtri2: return kEtri2Table;
    case CutFamily::kEtri3: return kEtri3Table;
    case CutFamily::kDiag: return std::span(kRltTable).first(3);
    case CutFamily::kSimplex: break;
  }
  return {};
}

}  // namespace boxqp::detail

#include "least/maze/layout.hpp"

namespace least::maze {

namespace {

constexpr std::string_view kSmall = R"maze(
; least-maze v1
; small: shortest path 10 cells, two short dead-end spurs
########
#....#G#
#.##...#
#.#..#.#
#S#.##.#
########)maze";

constexpr std::string_view kMedium = R"maze(
; least-maze v1
; medium: shortest path 18 cells; the top corridor bends back down at (4, 5)
#########
#....##G#
##.#.##.#
#..#.##.#
#.##.#..#
#S##....#
#########)maze";

constexpr std::string_view kLarge = R"maze(
; least-maze v1
; large: shortest path 24 cells; the upper corridor turns away from the goal at (5, 6)
############
##....#...G#
###.#.###.##
##..#.##...#
#...#.#.#.##
##.#....#..#
#S.###.....#
############)maze";

}  // namespace

// Kept identical to layouts/*.txt; tests/unit/maze_layout_test.cpp checks this.
std::string_view MazeLayout::builtin_text(SizeClass size_class) {
  switch (size_class) {
    case SizeClass::kSmall: return kSmall;
    case SizeClass::kMedium: return kMedium;
    case SizeClass::kLarge: return kLarge;
  }
  return kSmall;
}

}  // namespace least::maze

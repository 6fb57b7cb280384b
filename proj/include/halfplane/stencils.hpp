#pragma once

// Summation-by-parts difference operators on a uniform grid, unscaled by h.
//
// The operators at the free surface x = 0 satisfy
//   (w, G u)_H = -w^T M u - w_0 (S u)_0,   (w, D f)_H = -(D w, f)_H - w_0 f_0,
// with M symmetric and M - D^T H D positive semidefinite. S is a boundary
// derivative that uses one ghost point u_{-1}; the traction condition fixes it.

#include <span>
#include <stdexcept>
#include <vector>

namespace halfplane {

struct Tap {
  int offset;
  double coeff;
};

using Stencil = std::vector<Tap>;

/// Difference operators of one order of accuracy.
struct StencilSet {
  int order = 2;
  Stencil d1;   ///< interior first derivative
  Stencil d2;   ///< interior second derivative
  /// Boundary-modified rows 0..closure-1 at the free surface; tap offsets
  /// are absolute row indices, -1 being the ghost point.
  std::vector<Stencil> d1_closure;
  std::vector<Stencil> d2_closure;
  /// Diagonal norm weights for the closure rows; interior weight is 1.
  std::vector<double> norm_closure;
  /// Boundary derivative h (S u)_0 = ghost_coeff u_{-1} + sum(ghost_rest).
  double ghost_coeff = 0.0;
  Stencil ghost_rest;

  int closure() const { return static_cast<int>(norm_closure.size()); }
  int half_width() const { return order / 2; }
};

inline StencilSet second_order_stencils() {
  StencilSet s;
  s.order = 2;
  s.d1 = {{-1, -0.5}, {1, 0.5}};
  s.d2 = {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
  s.d1_closure = {{{0, -1.0}, {1, 1.0}}};
  s.d2_closure = {{{-1, 1.0}, {0, -2.0}, {1, 1.0}}};
  s.norm_closure = {0.5};
  s.ghost_coeff = -0.5;
  s.ghost_rest = {{1, 0.5}};
  return s;
}

inline StencilSet fourth_order_stencils() {
  StencilSet s;
  s.order = 4;
  s.d1 = {{-2, 1.0 / 12}, {-1, -2.0 / 3}, {1, 2.0 / 3}, {2, -1.0 / 12}};
  s.d2 = {{-2, -1.0 / 12}, {-1, 4.0 / 3}, {0, -5.0 / 2}, {1, 4.0 / 3}, {2, -1.0 / 12}};
  s.d1_closure = {
      {{0, -24.0 / 17}, {1, 59.0 / 34}, {2, -4.0 / 17}, {3, -3.0 / 34}},
      {{0, -0.5}, {2, 0.5}},
      {{0, 4.0 / 43}, {1, -59.0 / 86}, {3, 59.0 / 86}, {4, -4.0 / 43}},
      {{0, 3.0 / 98}, {2, -59.0 / 98}, {4, 32.0 / 49}, {5, -4.0 / 49}},
  };
  // Row 0 is H^{-1}(-M - S) with the ghost point; rows 1-3 are -H^{-1} M.
  s.d2_closure = {
      {{-1, 12.0 / 17}, {0, -14.0 / 17}, {1, -13.0 / 17}, {2, 20.0 / 17}, {3, -5.0 / 17}},
      {{0, 1.0}, {1, -2.0}, {2, 1.0}},
      {{0, -4.0 / 43}, {1, 59.0 / 43}, {2, -110.0 / 43}, {3, 59.0 / 43}, {4, -4.0 / 43}},
      {{0, -1.0 / 49}, {2, 59.0 / 49}, {3, -118.0 / 49}, {4, 64.0 / 49}, {5, -4.0 / 49}},
  };
  s.norm_closure = {17.0 / 48, 59.0 / 48, 43.0 / 48, 49.0 / 48};
  s.ghost_coeff = -0.25;
  s.ghost_rest = {{0, -5.0 / 6}, {1, 1.5}, {2, -0.5}, {3, 1.0 / 12}};
  return s;
}

inline const StencilSet& stencils(int order) {
  static const StencilSet second = second_order_stencils();
  static const StencilSet fourth = fourth_order_stencils();
  if (order == 2) return second;
  if (order == 4) return fourth;
  throw std::invalid_argument("scheme order must be 2 or 4");
}

/// Applies a stencil at index i of a 1-D sequence with the given accessor.
template <typename Get>
double apply_stencil(const Stencil& st, int i, Get&& get) {
  double acc = 0.0;
  for (const Tap& t : st) acc += t.coeff * get(i + t.offset);
  return acc;
}

}  // namespace halfplane

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "floquet_sg/monodromy.hpp"
#include "floquet_sg/parallel.hpp"

namespace floquet_sg {

struct GridSpec {
  double re_min, re_max, im_min, im_max;
  int nx, ny;
};

/// Zero-level set of G_p on a rectangular grid.  gp is row-major with index
/// iy * nx + ix; grid points whose integration failed hold NaN and the
/// adjacent cells are skipped (never extrapolated).
struct SpectrumContour {
  GridSpec grid;
  std::vector<double> gp;
  int failed_points = 0;
  std::vector<std::vector<cplx>> polylines;
};

namespace detail {

// Edge keys for the segment graph: each cell edge of the grid gets a unique
// id; horizontal edges are even, vertical odd.
inline std::int64_t h_edge(int ix, int iy, int nx) {
  return 2 * (static_cast<std::int64_t>(iy) * nx + ix);
}
inline std::int64_t v_edge(int ix, int iy, int nx) {
  return 2 * (static_cast<std::int64_t>(iy) * nx + ix) + 1;
}

struct Segment {
  std::int64_t a, b;
};

inline cplx interpolate(cplx p, cplx q, double vp, double vq) {
  const double t = vp / (vp - vq);
  return p + t * (q - p);
}

}  // namespace detail

/// March the grid of G_p samples and extract the zero-level polylines.
/// Sign changes along cell edges are interpolated linearly; the ambiguous
/// saddle cases are resolved by the cell-center average.
inline SpectrumContour spectrum_contours(const WaveProfile& wave,
                                         const GridSpec& grid,
                                         double rtol = 1e-8, int threads = 0) {
  if (grid.nx < 16 || grid.ny < 16)
    throw DomainError("spectrum_contours: grid must be at least 16 x 16");
  if (!(grid.re_min < grid.re_max) || !(grid.im_min < grid.im_max))
    throw DomainError("spectrum_contours: degenerate box");

  SpectrumContour out;
  out.grid = grid;
  const int nx = grid.nx, ny = grid.ny;
  out.gp.assign(static_cast<size_t>(nx) * ny, 0.0);
  std::vector<std::uint8_t> failed(static_cast<size_t>(nx) * ny, 0);

  const double dx = (grid.re_max - grid.re_min) / (nx - 1);
  const double dy = (grid.im_max - grid.im_min) / (ny - 1);
  auto point = [&](int ix, int iy) {
    return cplx(grid.re_min + ix * dx, grid.im_min + iy * dy);
  };

  parallel_for(
      nx * ny,
      [&](int i) {
        const int ix = i % nx, iy = i / nx;
        try {
          out.gp[i] = g_p(wave, point(ix, iy), rtol);
        } catch (const std::exception&) {
          out.gp[i] = std::nan("");
          failed[i] = 1;
        }
      },
      threads);
  for (auto f : failed) out.failed_points += f;
  if (out.failed_points * 100 > nx * ny)
    throw AccuracyError("spectrum_contours: more than 1% of grid points "
                        "failed to integrate");

  // collect zero-crossing segments per cell
  std::vector<detail::Segment> segments;
  std::map<std::int64_t, cplx> edge_points;
  auto value = [&](int ix, int iy) { return out.gp[iy * nx + ix]; };
  for (int iy = 0; iy + 1 < ny; ++iy) {
    for (int ix = 0; ix + 1 < nx; ++ix) {
      const double v00 = value(ix, iy), v10 = value(ix + 1, iy);
      const double v11 = value(ix + 1, iy + 1), v01 = value(ix, iy + 1);
      if (std::isnan(v00) || std::isnan(v10) || std::isnan(v11) ||
          std::isnan(v01))
        continue;
      const bool s00 = v00 > 0, s10 = v10 > 0, s11 = v11 > 0, s01 = v01 > 0;
      const int pattern = (s00 ? 1 : 0) | (s10 ? 2 : 0) | (s11 ? 4 : 0) |
                          (s01 ? 8 : 0);
      if (pattern == 0 || pattern == 15) continue;

      const std::int64_t bottom = detail::h_edge(ix, iy, nx);
      const std::int64_t top = detail::h_edge(ix, iy + 1, nx);
      const std::int64_t left = detail::v_edge(ix, iy, nx);
      const std::int64_t right = detail::v_edge(ix + 1, iy, nx);
      auto cross = [&](std::int64_t e, int ax, int ay, int bx, int by,
                       double va, double vb) {
        edge_points.emplace(e, detail::interpolate(point(ax, ay),
                                                   point(bx, by), va, vb));
      };
      if (s00 != s10) cross(bottom, ix, iy, ix + 1, iy, v00, v10);
      if (s10 != s11) cross(right, ix + 1, iy, ix + 1, iy + 1, v10, v11);
      if (s01 != s11) cross(top, ix, iy + 1, ix + 1, iy + 1, v01, v11);
      if (s00 != s01) cross(left, ix, iy, ix, iy + 1, v00, v01);

      switch (pattern) {
        case 1: case 14: segments.push_back({bottom, left}); break;
        case 2: case 13: segments.push_back({bottom, right}); break;
        case 3: case 12: segments.push_back({left, right}); break;
        case 4: case 11: segments.push_back({top, right}); break;
        case 6: case 9:  segments.push_back({bottom, top}); break;
        case 7: case 8:  segments.push_back({top, left}); break;
        case 5: case 10: {
          // saddle: split by the sign of the center average
          const bool center = (v00 + v10 + v11 + v01) > 0;
          const bool diag = (pattern == 5) == center;
          if (diag) {
            segments.push_back({bottom, right});
            segments.push_back({top, left});
          } else {
            segments.push_back({bottom, left});
            segments.push_back({top, right});
          }
          break;
        }
        default: break;
      }
    }
  }

  // chain segments that share edge endpoints into polylines
  std::multimap<std::int64_t, int> by_edge;
  for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
    by_edge.emplace(segments[i].a, i);
    by_edge.emplace(segments[i].b, i);
  }
  std::vector<bool> used(segments.size(), false);
  auto next_unused = [&](std::int64_t edge, int self) {
    auto [lo, hi] = by_edge.equal_range(edge);
    for (auto it = lo; it != hi; ++it)
      if (it->second != self && !used[it->second]) return it->second;
    return -1;
  };
  for (int i = 0; i < static_cast<int>(segments.size()); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<std::int64_t> chain{segments[i].a, segments[i].b};
    // grow forward from the tail, then backward from the head
    for (int dir = 0; dir < 2; ++dir) {
      for (;;) {
        const std::int64_t tip = dir == 0 ? chain.back() : chain.front();
        const int j = next_unused(tip, -1);
        if (j < 0) break;
        used[j] = true;
        const std::int64_t other =
            segments[j].a == tip ? segments[j].b : segments[j].a;
        if (dir == 0)
          chain.push_back(other);
        else
          chain.insert(chain.begin(), other);
      }
    }
    std::vector<cplx> poly;
    poly.reserve(chain.size());
    for (std::int64_t e : chain) poly.push_back(edge_points.at(e));
    out.polylines.push_back(std::move(poly));
  }
  return out;
}

}  // namespace floquet_sg

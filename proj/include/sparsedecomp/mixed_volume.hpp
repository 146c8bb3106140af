#pragma once

// Exact normalized mixed volume of lattice polytopes (the Bernstein-Kushnirenko
// root count), by inclusion-exclusion over Minkowski sums.
//
// Hulls are built by exact beneath-beyond insertion with simplicial facets.
// Points coplanar with a facet are treated as not visible, so the boundary may
// carry extra non-vertex points; volumes are unaffected and vertices are read
// off afterwards from the facet normals. Cost is 2^n - 1 hulls, fine for n <= 6.

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/lattice.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace sparsedecomp {

using Rational = boost::multiprecision::cpp_rational;
using LatticePoint = std::vector<Integer>;

struct Polytope {
  std::size_t dimension = 0;
  std::vector<LatticePoint> vertices;  // sorted, extreme points only
};

namespace detail {

inline Integer dot(const LatticePoint& a, const LatticePoint& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline LatticePoint minus(const LatticePoint& a, const LatticePoint& b) {
  LatticePoint d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

inline std::vector<LatticePoint> unique_points(std::vector<LatticePoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

inline std::vector<LatticePoint> columns_of(const IntMatrix& A) {
  std::vector<LatticePoint> pts;
  for (std::size_t c = 0; c < A.cols(); ++c) pts.push_back(A.column(c));
  return pts;
}

// |det| of the d x d matrix with the given rows.
inline Integer abs_det(const std::vector<LatticePoint>& rows) {
  const std::size_t d = rows.size();
  IntMatrix M(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) M(i, j) = rows[i][j];
  Integer v = determinant(M);
  return v < 0 ? Integer(-v) : v;
}

// Normal to the hyperplane through d points of Z^d (generalized cross product).
inline LatticePoint hyperplane_normal(const std::vector<LatticePoint>& pts) {
  const std::size_t d = pts.front().size();
  LatticePoint normal(d);
  if (d == 1) {
    normal[0] = 1;
    return normal;
  }
  std::vector<LatticePoint> w;
  for (std::size_t j = 1; j < d; ++j) w.push_back(minus(pts[j], pts[0]));
  for (std::size_t i = 0; i < d; ++i) {
    IntMatrix minor(d - 1, d - 1);
    for (std::size_t r = 0; r < d - 1; ++r)
      for (std::size_t c = 0, cc = 0; c < d; ++c) {
        if (c == i) continue;
        minor(r, cc++) = w[r][c];
      }
    Integer m = determinant(minor);
    normal[i] = (i % 2 == 0) ? m : Integer(-m);
  }
  return normal;
}

struct Facet {
  std::vector<std::size_t> vertices;  // sorted point indices, size d
  LatticePoint normal;                // outward: normal . x <= offset on the hull
  Integer offset;
};

// Full-dimensional hull in Z^d (d >= 2) of distinct points. Returns the
// simplicial boundary and an index of a point inside or on the hull.
struct Hull {
  std::vector<Facet> facets;
  std::size_t base = 0;
};

// Indices of d + 1 affinely independent points, or fewer if none exist.
inline std::vector<std::size_t> affine_basis(const std::vector<LatticePoint>& pts) {
  const std::size_t d = pts.front().size();
  std::vector<std::size_t> chosen{0};
  std::vector<LatticePoint> diffs;
  for (std::size_t i = 1; i < pts.size() && chosen.size() < d + 1; ++i) {
    auto trial = diffs;
    trial.push_back(minus(pts[i], pts[0]));
    if (lattice_rank(IntMatrix::from_columns(d, trial)) == trial.size()) {
      diffs = std::move(trial);
      chosen.push_back(i);
    }
  }
  return chosen;
}

inline Hull full_dimensional_hull(const std::vector<LatticePoint>& pts, const std::vector<std::size_t>& simplex) {
  const std::size_t d = pts.front().size();
  // Interior reference: centroid of the initial simplex, kept scaled by d+1.
  LatticePoint interior(d, Integer(0));
  for (std::size_t i : simplex)
    for (std::size_t j = 0; j < d; ++j) interior[j] += pts[i][j];
  const Integer scale = static_cast<long long>(d + 1);

  auto make_facet = [&](std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end());
    std::vector<LatticePoint> corners;
    for (std::size_t i : idx) corners.push_back(pts[i]);
    Facet f{std::move(idx), hyperplane_normal(corners), 0};
    f.offset = dot(f.normal, corners.front());
    if (dot(f.normal, interior) > scale * f.offset) {
      for (auto& v : f.normal) v = -v;
      f.offset = -f.offset;
    }
    return f;
  };

  Hull hull;
  hull.base = simplex.front();
  for (std::size_t skip = 0; skip < simplex.size(); ++skip) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (i != skip) idx.push_back(simplex[i]);
    hull.facets.push_back(make_facet(std::move(idx)));
  }

  std::set<std::size_t> in_simplex(simplex.begin(), simplex.end());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (in_simplex.count(p)) continue;
    std::vector<Facet> kept;
    std::map<std::vector<std::size_t>, int> ridges;
    bool visible_any = false;
    for (auto& f : hull.facets) {
      if (dot(f.normal, pts[p]) > f.offset) {
        visible_any = true;
        for (std::size_t drop = 0; drop < f.vertices.size(); ++drop) {
          std::vector<std::size_t> r;
          for (std::size_t i = 0; i < f.vertices.size(); ++i)
            if (i != drop) r.push_back(f.vertices[i]);
          ++ridges[r];
        }
      } else {
        kept.push_back(std::move(f));
      }
    }
    if (!visible_any) {
      hull.facets = std::move(kept);
      continue;
    }
    for (const auto& [r, count] : ridges) {
      if (count != 1) continue;
      auto idx = r;
      idx.push_back(p);
      kept.push_back(make_facet(std::move(idx)));
    }
    hull.facets = std::move(kept);
  }
  return hull;
}

// Vertices of a full-dimensional point set: points whose active facet normals span Z^d.
inline std::vector<LatticePoint> hull_vertices(const std::vector<LatticePoint>& pts, const Hull& hull) {
  const std::size_t d = pts.front().size();
  std::vector<LatticePoint> out;
  for (const auto& p : pts) {
    std::vector<LatticePoint> active;
    for (const auto& f : hull.facets)
      if (dot(f.normal, p) == f.offset) active.push_back(f.normal);
    if (active.size() >= d && lattice_rank(IntMatrix::from_columns(d, active)) == d) out.push_back(p);
  }
  return out;
}

// Vertices of an arbitrary finite point set, any affine dimension.
inline std::vector<LatticePoint> vertices_of(std::vector<LatticePoint> pts) {
  pts = unique_points(std::move(pts));
  if (pts.size() <= 1) return pts;
  const std::size_t n = pts.front().size();

  std::vector<LatticePoint> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(minus(pts[i], pts[0]));
  const auto snf = smith_normal_form(IntMatrix::from_columns(n, diffs));
  const std::size_t r = snf.rank();

  // Coordinates in the affine span: first r entries of U (p - p0); injective on the span.
  std::vector<LatticePoint> local;
  for (const auto& p : pts) {
    auto y = snf.U * minus(p, pts[0]);
    y.resize(r);
    local.push_back(std::move(y));
  }

  std::vector<std::size_t> keep;
  if (r == 1) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < local.size(); ++i) {
      if (local[i][0] < local[lo][0]) lo = i;
      if (local[i][0] > local[hi][0]) hi = i;
    }
    keep = {lo, hi};
  } else {
    const Hull hull = full_dimensional_hull(local, affine_basis(local));
    const auto verts = hull_vertices(local, hull);
    for (std::size_t i = 0; i < local.size(); ++i)
      if (std::find(verts.begin(), verts.end(), local[i]) != verts.end()) keep.push_back(i);
  }
  std::vector<LatticePoint> out;
  for (std::size_t i : keep) out.push_back(pts[i]);
  return unique_points(std::move(out));
}

// d! * volume of conv(pts) in Z^d; 0 when lower-dimensional.
inline Integer normalized_volume(std::vector<LatticePoint> pts) {
  pts = unique_points(std::move(pts));
  const std::size_t d = pts.front().size();
  if (pts.size() < d + 1) return 0;
  const auto simplex = affine_basis(pts);
  if (simplex.size() < d + 1) return 0;
  if (d == 1) {
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
    return (*hi)[0] - (*lo)[0];
  }
  const Hull hull = full_dimensional_hull(pts, simplex);
  Integer total = 0;
  const LatticePoint& base = pts[hull.base];
  for (const auto& f : hull.facets) {
    std::vector<LatticePoint> rows;
    for (std::size_t i : f.vertices) rows.push_back(minus(pts[i], base));
    total += abs_det(rows);
  }
  return total;
}

inline std::vector<LatticePoint> minkowski_sum(const std::vector<LatticePoint>& a, const std::vector<LatticePoint>& b) {
  std::vector<LatticePoint> out;
  out.reserve(a.size() * b.size());
  for (const auto& p : a)
    for (const auto& q : b) {
      LatticePoint s(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) s[i] = p[i] + q[i];
      out.push_back(std::move(s));
    }
  return out;
}

inline Integer factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<unsigned long long>(i);
  return f;
}

}  // namespace detail

inline Polytope convex_hull(const IntMatrix& support) {
  if (support.empty()) throw std::invalid_argument("convex_hull of an empty support");
  return {support.rows(), detail::vertices_of(detail::columns_of(support))};
}

inline Rational euclidean_volume(const Polytope& P) {
  if (P.vertices.empty()) return 0;
  return Rational(detail::normalized_volume(P.vertices), detail::factorial(P.dimension));
}

// MV(A_1..A_n) = sum over nonempty S of (-1)^(n-|S|) vol(sum_{i in S} conv A_i).
inline Integer mixed_volume(const std::vector<IntMatrix>& supports) {
  const std::size_t n = supports.size();
  if (n == 0) throw std::invalid_argument("mixed_volume of an empty list");
  for (const auto& A : supports)
    if (A.rows() != n || A.empty()) throw std::invalid_argument("mixed_volume needs n supports in Z^n");

  std::vector<std::vector<LatticePoint>> verts;
  for (const auto& A : supports) verts.push_back(convex_hull(A).vertices);

  // sums[mask] = vertices of the Minkowski sum over the bits of mask.
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::vector<LatticePoint>> sums(subsets);
  Integer total = 0;
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::size_t top = 0;
    while (!((mask >> top) & 1)) ++top;
    const std::size_t rest = mask & ~(std::size_t{1} << top);
    sums[mask] = rest ? detail::vertices_of(detail::minkowski_sum(sums[rest], verts[top])) : verts[top];
    const auto bits = static_cast<std::size_t>(__builtin_popcountll(mask));
    const Integer vol = detail::normalized_volume(sums[mask]);
    if ((n - bits) % 2 == 0)
      total += vol;
    else
      total -= vol;
  }
  const Integer nf = detail::factorial(n);
  if (total % nf != 0) throw std::logic_error("mixed volume is not an integer");
  return total / nf;
}

}  // namespace sparsedecomp

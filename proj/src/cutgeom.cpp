#include "tracefem/cutgeom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tracefem {

namespace {

std::vector<std::array<double, 4>> orbit_s31(double a) {
  double b = 1.0 - 3.0 * a;
  return {{b, a, a, a}, {a, b, a, a}, {a, a, b, a}, {a, a, a, b}};
}

std::vector<std::array<double, 4>> orbit_s22(double a) {
  double b = 0.5 - a;
  return {{a, a, b, b}, {a, b, a, b}, {a, b, b, a}, {b, a, a, b}, {b, a, b, a}, {b, b, a, a}};
}

void append_orbit(QuadratureRule& rule, std::vector<std::array<double, 4>> pts, double w) {
  for (auto& p : pts) {
    rule.bary.push_back(p);
    rule.weights.push_back(w);
  }
}

QuadratureRule make_rule_2d(int degree) {
  QuadratureRule rule;
  rule.dim = 2;
  rule.degree = degree;
  auto add = [&rule](double l0, double l1, double l2, double w) {
    rule.bary.push_back({l0, l1, l2, 0.0});
    rule.weights.push_back(w);  // already scaled to reference area 1/2
  };
  switch (degree) {
    case 1:
      add(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.5);
      break;
    case 2:
      add(2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0);
      add(1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0);
      add(1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0);
      break;
    case 4: {
      // Dunavant degree-4 rule, two interior orbits, all weights positive.
      const double a1 = 0.445948490915965, w1 = 0.223381589678011 / 2.0;
      const double a2 = 0.091576213509771, w2 = 0.109951743655322 / 2.0;
      for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
        double b = 1.0 - 2.0 * a;
        add(b, a, a, w);
        add(a, b, a, w);
        add(a, a, b, w);
      }
      break;
    }
    case 5: {
      // Dunavant degree-5 rule: centroid plus two orbits.
      add(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225 / 2.0);
      const double a1 = 0.470142064105115, w1 = 0.132394152788506 / 2.0;
      const double a2 = 0.101286507323456, w2 = 0.125939180544827 / 2.0;
      for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
        double b = 1.0 - 2.0 * a;
        add(b, a, a, w);
        add(a, b, a, w);
        add(a, a, b, w);
      }
      break;
    }
    default:
      throw std::invalid_argument("quad_simplex: unsupported 2d rule");
  }
  return rule;
}

QuadratureRule make_rule_3d(int degree) {
  QuadratureRule rule;
  rule.dim = 3;
  rule.degree = degree;
  const double scale = 1.0 / 6.0;  // reference tet volume
  switch (degree) {
    case 1:
      rule.bary.push_back({0.25, 0.25, 0.25, 0.25});
      rule.weights.push_back(scale);
      break;
    case 2: {
      const double a = (5.0 - std::sqrt(5.0)) / 20.0;
      append_orbit(rule, orbit_s31(a), 0.25 * scale);
      break;
    }
    case 5: {
      // Zhang-Cui-Liu 14-point degree-5 rule, all weights positive.
      append_orbit(rule, orbit_s31(0.31088591926330060980), 0.11268792571801585080 * scale);
      append_orbit(rule, orbit_s31(0.092735250310891226402), 0.073493043116361949544 * scale);
      append_orbit(rule, orbit_s22(0.045503704125649649492), 0.042546020777081466438 * scale);
      break;
    }
    default:
      throw std::invalid_argument("quad_simplex: unsupported 3d rule");
  }
  return rule;
}

}  // namespace

const QuadratureRule& quad_simplex(int dim, int degree) {
  if (degree < 1 || degree > 5) throw std::invalid_argument("quad_simplex: degree out of range");
  if (dim == 2) {
    static const QuadratureRule r1 = make_rule_2d(1);
    static const QuadratureRule r2 = make_rule_2d(2);
    static const QuadratureRule r4 = make_rule_2d(4);
    static const QuadratureRule r5 = make_rule_2d(5);
    if (degree <= 1) return r1;
    if (degree == 2) return r2;
    if (degree <= 4) return r4;
    return r5;
  }
  if (dim == 3) {
    static const QuadratureRule r1 = make_rule_3d(1);
    static const QuadratureRule r2 = make_rule_3d(2);
    static const QuadratureRule r5 = make_rule_3d(5);
    if (degree <= 1) return r1;
    if (degree == 2) return r2;
    return r5;
  }
  throw std::invalid_argument("quad_simplex: dim must be 2 or 3");
}

double triangle_area(const std::array<Vec3, 3>& pts) {
  return 0.5 * norm(cross(pts[1] - pts[0], pts[2] - pts[0]));
}

namespace {

using Key = std::pair<long long, long long>;

struct CutVertex {
  Vec3 p;
  Key key;
};

CutVertex corner(const std::array<Vec3, 4>& pts, const std::array<long long, 4>& keys, int i) {
  return {pts[i], {keys[i], keys[i]}};
}

// Cut point on the edge (i, j). Evaluated in ascending-key orientation so
// both tets sharing the edge produce bitwise identical coordinates.
CutVertex edge_cut(const std::array<Vec3, 4>& pts, const std::array<double, 4>& phi,
                   const std::array<long long, 4>& keys, int i, int j) {
  int lo = i, hi = j;
  if (keys[lo] > keys[hi]) std::swap(lo, hi);
  const double t = phi[lo] / (phi[lo] - phi[hi]);
  return {pts[lo] + t * (pts[hi] - pts[lo]), {std::min(keys[i], keys[j]), std::max(keys[i], keys[j])}};
}

void push_sub_tet(CutDecomposition& out, const CutVertex& a, const CutVertex& b,
                  const CutVertex& c, const CutVertex& d, int tag, double parent_volume) {
  SubTet st;
  st.pts = {a.p, b.p, c.p, d.p};
  st.tag = tag;
  double vol = tet_volume(st.pts[0], st.pts[1], st.pts[2], st.pts[3]);
  if (vol < 0.0) {
    std::swap(st.pts[2], st.pts[3]);
    vol = -vol;
  }
  if (vol < 1e-14 * parent_volume) ++out.n_degenerate;
  out.sub_tets.push_back(st);
}

// Splits the prism spanned by matching bottom/top triangles into three tets.
// Every lateral quad gets the diagonal through its smallest-key corner, which
// is decided by shared data only, so face-adjacent prisms always agree.
void split_prism(CutDecomposition& out, std::array<CutVertex, 3> bot, std::array<CutVertex, 3> top,
                 int tag, double parent_volume) {
  int min_pos = 0;
  bool min_in_top = false;
  Key best = bot[0].key;
  for (int i = 1; i < 3; ++i)
    if (bot[i].key < best) best = bot[i].key, min_pos = i, min_in_top = false;
  for (int i = 0; i < 3; ++i)
    if (top[i].key < best) best = top[i].key, min_pos = i, min_in_top = true;
  if (min_in_top) std::swap(bot, top);
  std::rotate(bot.begin(), bot.begin() + min_pos, bot.end());
  std::rotate(top.begin(), top.begin() + min_pos, top.end());

  push_sub_tet(out, bot[0], top[0], top[1], top[2], tag, parent_volume);
  // Remaining pyramid: apex bot[0], base quad (bot[1], bot[2], top[2], top[1]).
  Key k_b1 = bot[1].key, k_b2 = bot[2].key, k_t2 = top[2].key, k_t1 = top[1].key;
  if (std::min(k_b1, k_t2) < std::min(k_b2, k_t1)) {
    push_sub_tet(out, bot[0], bot[1], bot[2], top[2], tag, parent_volume);
    push_sub_tet(out, bot[0], bot[1], top[2], top[1], tag, parent_volume);
  } else {
    push_sub_tet(out, bot[0], bot[1], bot[2], top[1], tag, parent_volume);
    push_sub_tet(out, bot[0], bot[2], top[2], top[1], tag, parent_volume);
  }
}

void push_triangle(CutDecomposition& out, const CutVertex& a, const CutVertex& b,
                   const CutVertex& c, const Vec3& normal) {
  InterfaceTri tri;
  tri.pts = {a.p, b.p, c.p};
  tri.normal = normal;
  if (dot(cross(tri.pts[1] - tri.pts[0], tri.pts[2] - tri.pts[0]), normal) < 0.0)
    std::swap(tri.pts[1], tri.pts[2]);
  out.triangles.push_back(tri);
}

}  // namespace

CutDecomposition decompose(const std::array<Vec3, 4>& pts, const std::array<double, 4>& phi,
                           const std::array<long long, 4>& keys) {
  for (double v : phi)
    if (v == 0.0) throw std::invalid_argument("decompose: nodal level set value is exactly zero");

  CutDecomposition out;
  const double parent_volume = std::abs(tet_volume(pts[0], pts[1], pts[2], pts[3]));

  std::array<int, 4> neg{}, pos{};
  int n_neg = 0, n_pos = 0;
  for (int i = 0; i < 4; ++i) (phi[i] < 0.0 ? neg[n_neg++] : pos[n_pos++]) = i;

  if (n_neg == 0 || n_neg == 4) {
    push_sub_tet(out, corner(pts, keys, 0), corner(pts, keys, 1), corner(pts, keys, 2),
                 corner(pts, keys, 3), n_neg == 4 ? 1 : 2, parent_volume);
    return out;
  }

  // Interface normal: gradient of the linear interpolant, oriented from the
  // negative to the positive side.
  const Vec3 e1 = pts[1] - pts[0], e2 = pts[2] - pts[0], e3 = pts[3] - pts[0];
  const double det = dot(e1, cross(e2, e3));
  const std::array<Vec3, 4> g = {
      -1.0 / det * (cross(e2, e3) + cross(e3, e1) + cross(e1, e2)),
      cross(e2, e3) / det, cross(e3, e1) / det, cross(e1, e2) / det};
  Vec3 grad{0, 0, 0};
  for (int i = 0; i < 4; ++i) grad += phi[i] * g[i];
  const Vec3 normal = normalized(grad);

  auto by_key = [&keys](int i, int j) { return keys[i] < keys[j]; };

  if (n_neg == 1 || n_pos == 1) {
    // One isolated corner: a small tet on its side, a prism on the other.
    const bool iso_neg = (n_neg == 1);
    const int a = iso_neg ? neg[0] : pos[0];
    std::array<int, 3> rest = iso_neg ? std::array<int, 3>{pos[0], pos[1], pos[2]}
                                      : std::array<int, 3>{neg[0], neg[1], neg[2]};
    std::sort(rest.begin(), rest.end(), by_key);

    const CutVertex ca = corner(pts, keys, a);
    std::array<CutVertex, 3> cut, far;
    for (int i = 0; i < 3; ++i) {
      cut[i] = edge_cut(pts, phi, keys, a, rest[i]);
      far[i] = corner(pts, keys, rest[i]);
    }
    push_sub_tet(out, ca, cut[0], cut[1], cut[2], iso_neg ? 1 : 2, parent_volume);
    split_prism(out, cut, far, iso_neg ? 2 : 1, parent_volume);
    push_triangle(out, cut[0], cut[1], cut[2], normal);
    return out;
  }

  // Two vs two: both sides are prisms, the interface is a planar-in-each-tet
  // quadrilateral split along the diagonal with the smallest key.
  std::array<int, 2> ns{neg[0], neg[1]}, ps{pos[0], pos[1]};
  std::sort(ns.begin(), ns.end(), by_key);
  std::sort(ps.begin(), ps.end(), by_key);
  const int a = ns[0], b = ns[1], c = ps[0], d = ps[1];

  const CutVertex pac = edge_cut(pts, phi, keys, a, c);
  const CutVertex pad = edge_cut(pts, phi, keys, a, d);
  const CutVertex pbc = edge_cut(pts, phi, keys, b, c);
  const CutVertex pbd = edge_cut(pts, phi, keys, b, d);

  split_prism(out, {corner(pts, keys, a), pac, pad}, {corner(pts, keys, b), pbc, pbd}, 1,
              parent_volume);
  split_prism(out, {corner(pts, keys, c), pac, pbc}, {corner(pts, keys, d), pad, pbd}, 2,
              parent_volume);

  // Cut quad in cyclic order (pac, pad, pbd, pbc); diagonals (pac, pbd) and
  // (pad, pbc).
  if (std::min(pac.key, pbd.key) < std::min(pad.key, pbc.key)) {
    push_triangle(out, pac, pad, pbd, normal);
    push_triangle(out, pac, pbd, pbc, normal);
  } else {
    push_triangle(out, pad, pbd, pbc, normal);
    push_triangle(out, pad, pbc, pac, normal);
  }
  return out;
}

CutGeometry build_cut_geometry(const LevelSetField& field) {
  const Mesh& mesh = *field.mesh;
  CutGeometry geom;
  geom.classes.resize(mesh.n_tets());
  geom.sub_tets.reserve(mesh.n_tets() + mesh.n_tets() / 8);

  for (int t = 0; t < mesh.n_tets(); ++t) {
    const auto& tet = mesh.tets[t];
    std::array<Vec3, 4> pts;
    std::array<double, 4> phi;
    std::array<long long, 4> keys;
    for (int i = 0; i < 4; ++i) {
      pts[i] = mesh.vertices[tet[i]];
      phi[i] = field.nodal_values[tet[i]];
      keys[i] = tet[i];
    }
    CutDecomposition dec = decompose(pts, phi, keys);
    geom.classes[t] = classify(field, t);
    geom.n_degenerate += dec.n_degenerate;
    for (const auto& st : dec.sub_tets) {
      geom.sub_tets.push_back(st);
      geom.sub_tet_parent.push_back(t);
    }
    for (const auto& tri : dec.triangles) {
      geom.triangles.push_back(tri);
      geom.tri_parent.push_back(t);
    }
  }
  return geom;
}

double interface_area(const CutGeometry& geom) {
  double area = 0.0;
  for (const auto& tri : geom.triangles) area += triangle_area(tri.pts);
  return area;
}

double subdomain_volume(const CutGeometry& geom, int tag) {
  double vol = 0.0;
  for (const auto& st : geom.sub_tets)
    if (st.tag == tag) vol += tet_volume(st.pts[0], st.pts[1], st.pts[2], st.pts[3]);
  return vol;
}

double interface_area(const LevelSetField& field) {
  return interface_area(build_cut_geometry(field));
}

double subdomain_volume(const LevelSetField& field, int tag) {
  return subdomain_volume(build_cut_geometry(field), tag);
}

}  // namespace tracefem

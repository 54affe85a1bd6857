// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "pbbem/molecule_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

namespace pbbem
{

namespace
{

constexpr double kDegenerateArea = 1e-12;
constexpr std::size_t kMaxListed = 20;

std::vector<std::string_view> split_ws(std::string_view line)
{
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size())
  {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
    {
      ++i;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
    {
      ++j;
    }
    if (j > i)
    {
      tokens.push_back(line.substr(i, j - i));
    }
    i = j;
  }
  return tokens;
}

bool to_double(std::string_view s, double &value)
{
  if (!s.empty() && s.front() == '+')
  {
    s.remove_prefix(1);
  }
  const auto *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end;
}

bool to_int(std::string_view s, long &value)
{
  const auto *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && ptr == end;
}

template <typename T>
std::string join_limited(const std::vector<T> &items)
{
  std::ostringstream os;
  for (std::size_t k = 0; k < items.size() && k < kMaxListed; ++k)
  {
    os << (k ? ", " : "") << items[k];
  }
  if (items.size() > kMaxListed)
  {
    os << ", ... (" << items.size() << " total)";
  }
  return os.str();
}

std::string where(const std::string &source, std::size_t line)
{
  return source + ":" + std::to_string(line);
}

// Reads the next non-empty line that is not an OFF comment.
bool next_data_line(std::istream &in, std::string &line, std::size_t &line_no)
{
  while (std::getline(in, line))
  {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos)
    {
      line.erase(hash);
    }
    if (!split_ws(line).empty())
    {
      return true;
    }
  }
  return false;
}

}  // namespace

void PhysicalParams::validate() const
{
  if (!(eps_int > 0.0) || !(eps_ext > 0.0) || !(kappa >= 0.0) || !std::isfinite(eps_int) ||
      !std::isfinite(eps_ext) || !std::isfinite(kappa))
  {
    std::ostringstream os;
    os << "invalid physical parameters: eps_int=" << eps_int << " eps_ext=" << eps_ext
       << " kappa=" << kappa << " (require eps > 0, kappa >= 0)";
    throw ValidationError(os.str());
  }
}

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
  : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
  const int nv = num_vertices();
  if (triangles_.empty())
  {
    throw ValidationError("mesh has no triangles");
  }
  for (std::size_t v = 0; v < vertices_.size(); ++v)
  {
    if (!vertices_[v].allFinite())
    {
      throw ValidationError("mesh vertex " + std::to_string(v) + " is not finite");
    }
  }

  std::vector<int> bad_index;
  for (int t = 0; t < num_triangles(); ++t)
  {
    const auto &tri = triangles_[t];
    for (int k = 0; k < 3; ++k)
    {
      if (tri[k] < 0 || tri[k] >= nv)
      {
        bad_index.push_back(t);
        break;
      }
    }
  }
  if (!bad_index.empty())
  {
    throw ValidationError("triangles reference out-of-range vertices: " +
                          join_limited(bad_index));
  }

  normals_.resize(triangles_.size());
  areas_.resize(triangles_.size());
  std::vector<int> degenerate;
  for (int t = 0; t < num_triangles(); ++t)
  {
    const auto &tri = triangles_[t];
    Vec3 c = (vertices_[tri[1]] - vertices_[tri[0]]).cross(vertices_[tri[2]] - vertices_[tri[0]]);
    double twice_area = c.norm();
    areas_[t] = 0.5 * twice_area;
    if (!(areas_[t] > kDegenerateArea) || tri[0] == tri[1] || tri[1] == tri[2] ||
        tri[0] == tri[2])
    {
      degenerate.push_back(t);
      normals_[t] = Vec3::Zero();
    }
    else
    {
      normals_[t] = c / twice_area;
    }
  }
  if (!degenerate.empty())
  {
    throw ValidationError("degenerate triangles (area <= 1e-12): " + join_limited(degenerate));
  }

  // Closed 2-manifold: every undirected edge has exactly two triangles, traversed in opposite
  // directions.
  std::map<std::pair<int, int>, std::vector<int>> directed;
  for (int t = 0; t < num_triangles(); ++t)
  {
    const auto &tri = triangles_[t];
    for (int k = 0; k < 3; ++k)
    {
      directed[{tri[k], tri[(k + 1) % 3]}].push_back(t);
    }
  }
  std::vector<std::string> open_edges, misoriented;
  num_edges_ = 0;
  for (const auto &[edge, tris] : directed)
  {
    auto [a, b] = edge;
    auto rev = directed.find({b, a});
    std::size_t count = tris.size() + (rev == directed.end() ? 0 : rev->second.size());
    if (a < b || rev == directed.end())
    {
      ++num_edges_;
    }
    std::ostringstream os;
    os << "(" << a << "," << b << ")";
    if (count != 2)
    {
      if (a < b || rev == directed.end())
      {
        os << " in " << count << " triangle(s)";
        open_edges.push_back(os.str());
      }
    }
    else if (tris.size() != 1)
    {
      os << " triangles " << tris[0] << "," << tris[1];
      misoriented.push_back(os.str());
    }
  }
  if (!open_edges.empty())
  {
    throw ValidationError("mesh is not a closed 2-manifold; edges: " + join_limited(open_edges));
  }
  if (!misoriented.empty())
  {
    throw ValidationError("inconsistent triangle orientation at edges: " +
                          join_limited(misoriented));
  }

  std::vector<char> used(vertices_.size(), 0);
  for (const auto &tri : triangles_)
  {
    used[tri[0]] = used[tri[1]] = used[tri[2]] = 1;
  }
  std::vector<int> unused;
  for (int v = 0; v < nv; ++v)
  {
    if (!used[v])
    {
      unused.push_back(v);
    }
  }
  if (!unused.empty())
  {
    throw ValidationError("vertices not referenced by any triangle: " + join_limited(unused));
  }

  if (!(enclosed_volume() > 0.0))
  {
    throw ValidationError("mesh orientation is inward (signed enclosed volume " +
                          std::to_string(enclosed_volume()) + " <= 0)");
  }
}

double SurfaceMesh::total_area() const
{
  double a = 0.0;
  for (double t : areas_)
  {
    a += t;
  }
  return a;
}

double SurfaceMesh::enclosed_volume() const
{
  double v = 0.0;
  for (const auto &tri : triangles_)
  {
    v += vertices_[tri[0]].dot(vertices_[tri[1]].cross(vertices_[tri[2]]));
  }
  return v / 6.0;
}

Vec3 SurfaceMesh::centroid() const
{
  Vec3 c = Vec3::Zero();
  for (const auto &v : vertices_)
  {
    c += v;
  }
  return c / static_cast<double>(vertices_.size());
}

MeshFormat parse_mesh_format(std::string_view name)
{
  if (name == "off" || name == "OFF")
  {
    return MeshFormat::Off;
  }
  if (name == "msms" || name == "MSMS")
  {
    return MeshFormat::Msms;
  }
  throw ParseError("unknown mesh format '" + std::string(name) + "' (expected off or msms)");
}

ChargeSet parse_pqr(std::istream &in)
{
  ChargeSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    auto tokens = split_ws(line);
    if (tokens.empty() || (tokens[0] != "ATOM" && tokens[0] != "HETATM"))
    {
      continue;
    }
    if (tokens.size() < 6)
    {
      throw ParseError("PQR line " + std::to_string(line_no) + ": expected x y z charge radius, " +
                       "found " + std::to_string(tokens.size() - 1) + " field(s)");
    }
    std::array<double, 5> f{};
    for (int k = 0; k < 5; ++k)
    {
      auto tok = tokens[tokens.size() - 5 + k];
      if (!to_double(tok, f[k]) || !std::isfinite(f[k]))
      {
        throw ParseError("PQR line " + std::to_string(line_no) + ": non-numeric field '" +
                         std::string(tok) + "'");
      }
    }
    if (!(f[4] > 0.0))
    {
      throw ValidationError("PQR line " + std::to_string(line_no) + ": radius " +
                            std::string(tokens.back()) + " must be positive");
    }
    set.atoms.push_back(Atom{Vec3(f[0], f[1], f[2]), f[3], f[4]});
  }
  return set;
}

ChargeSet parse_pqr_text(std::string_view text)
{
  std::istringstream in{std::string(text)};
  return parse_pqr(in);
}

ChargeSet load_pqr(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open PQR file " + path.string());
  }
  return parse_pqr(in);
}

SurfaceMesh read_off(std::istream &in)
{
  std::string line;
  std::size_t line_no = 0;
  const std::string src = "OFF";
  if (!next_data_line(in, line, line_no) || split_ws(line)[0] != "OFF")
  {
    throw ParseError("OFF: missing 'OFF' header");
  }
  // The counts may share the header line.
  auto header = split_ws(line);
  std::vector<std::string_view> counts(header.begin() + 1, header.end());
  std::string count_line;
  if (counts.empty())
  {
    if (!next_data_line(in, count_line, line_no))
    {
      throw ParseError("OFF: missing counts line");
    }
    counts = split_ws(count_line);
  }
  long nv = 0, nf = 0;
  if (counts.size() < 2 || !to_int(counts[0], nv) || !to_int(counts[1], nf) || nv < 0 || nf < 0)
  {
    throw ParseError(where(src, line_no) + ": malformed counts line");
  }
  std::vector<Vec3> vertices(nv);
  for (long v = 0; v < nv; ++v)
  {
    if (!next_data_line(in, line, line_no))
    {
      throw ParseError("OFF: expected " + std::to_string(nv) + " vertices, file ended");
    }
    auto tok = split_ws(line);
    if (tok.size() < 3 || !to_double(tok[0], vertices[v].x()) ||
        !to_double(tok[1], vertices[v].y()) || !to_double(tok[2], vertices[v].z()))
    {
      throw ParseError(where(src, line_no) + ": malformed vertex");
    }
  }
  std::vector<Triangle> triangles(nf);
  for (long f = 0; f < nf; ++f)
  {
    if (!next_data_line(in, line, line_no))
    {
      throw ParseError("OFF: expected " + std::to_string(nf) + " faces, file ended");
    }
    auto tok = split_ws(line);
    long n = 0, a = 0, b = 0, c = 0;
    if (tok.size() < 4 || !to_int(tok[0], n) || n != 3 || !to_int(tok[1], a) ||
        !to_int(tok[2], b) || !to_int(tok[3], c))
    {
      throw ParseError(where(src, line_no) + ": expected triangular face '3 i j k'");
    }
    triangles[f] = {static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)};
  }
  return SurfaceMesh(std::move(vertices), std::move(triangles));
}

SurfaceMesh read_msms(std::istream &vert, std::istream &face)
{
  std::string line;
  std::vector<Vec3> vertices;
  std::size_t line_no = 0;
  while (std::getline(vert, line))
  {
    ++line_no;
    if (line_no <= 3)
    {
      continue;
    }
    auto tok = split_ws(line);
    if (tok.empty())
    {
      continue;
    }
    Vec3 p;
    if (tok.size() < 3 || !to_double(tok[0], p.x()) || !to_double(tok[1], p.y()) ||
        !to_double(tok[2], p.z()))
    {
      throw ParseError(where("vert", line_no) + ": malformed vertex");
    }
    vertices.push_back(p);
  }
  std::vector<Triangle> triangles;
  line_no = 0;
  while (std::getline(face, line))
  {
    ++line_no;
    if (line_no <= 3)
    {
      continue;
    }
    auto tok = split_ws(line);
    if (tok.empty())
    {
      continue;
    }
    long a = 0, b = 0, c = 0;
    if (tok.size() < 3 || !to_int(tok[0], a) || !to_int(tok[1], b) || !to_int(tok[2], c))
    {
      throw ParseError(where("face", line_no) + ": malformed face");
    }
    triangles.push_back({static_cast<int>(a - 1), static_cast<int>(b - 1), static_cast<int>(c - 1)});
  }
  return SurfaceMesh(std::move(vertices), std::move(triangles));
}

SurfaceMesh load_mesh(const std::filesystem::path &path, MeshFormat format)
{
  if (format == MeshFormat::Off)
  {
    std::ifstream in(path);
    if (!in)
    {
      throw ParseError("cannot open mesh file " + path.string());
    }
    return read_off(in);
  }
  auto stem = path;
  if (stem.extension() == ".vert" || stem.extension() == ".face")
  {
    stem.replace_extension();
  }
  auto vert_path = stem;
  vert_path += ".vert";
  auto face_path = stem;
  face_path += ".face";
  std::ifstream vert(vert_path), face(face_path);
  if (!vert || !face)
  {
    throw ParseError("cannot open MSMS pair " + vert_path.string() + " / " + face_path.string());
  }
  return read_msms(vert, face);
}

void write_off(std::ostream &out, const SurfaceMesh &mesh)
{
  auto flags = out.flags();
  auto prec = out.precision();
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << " 0\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto &v : mesh.vertices())
  {
    out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const auto &t : mesh.triangles())
  {
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  out.flags(flags);
  out.precision(prec);
}

SurfaceMesh generate_icosphere(double radius, int subdivisions, const Vec3 &center)
{
  if (!(radius > 0.0) || subdivisions < 0)
  {
    throw ValidationError("icosphere requires radius > 0 and subdivisions >= 0");
  }
  const double phi = std::numbers::phi;
  std::vector<Vec3> v = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                         {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                         {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto &p : v)
  {
    p.normalize();
  }
  std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level)
  {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b)
    {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end())
      {
        return it->second;
      }
      v.push_back((v[a] + v[b]).normalized());
      int id = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Triangle> refined;
    refined.reserve(4 * f.size());
    for (const auto &t : f)
    {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      refined.push_back({t[0], ab, ca});
      refined.push_back({t[1], bc, ab});
      refined.push_back({t[2], ca, bc});
      refined.push_back({ab, bc, ca});
    }
    f = std::move(refined);
  }
  for (auto &t : f)
  {
    Vec3 n = (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]);
    if (n.dot(v[t[0]] + v[t[1]] + v[t[2]]) < 0.0)
    {
      std::swap(t[1], t[2]);
    }
  }
  for (auto &p : v)
  {
    p = center + radius * p;
  }
  return SurfaceMesh(std::move(v), std::move(f));
}

double solid_angle(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c)
{
  // Van Oosterom and Strackee.
  Vec3 r1 = a - p, r2 = b - p, r3 = c - p;
  double l1 = r1.norm(), l2 = r2.norm(), l3 = r3.norm();
  double num = r1.dot(r2.cross(r3));
  double den = l1 * l2 * l3 + r1.dot(r2) * l3 + r1.dot(r3) * l2 + r2.dot(r3) * l1;
  return 2.0 * std::atan2(num, den);
}

Vec3 closest_point_on_triangle(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c)
{
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0)
  {
    return a;
  }
  Vec3 bp = p - b;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3)
  {
    return b;
  }
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0)
  {
    return a + (d1 / (d1 - d3)) * ab;
  }
  Vec3 cp = p - c;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6)
  {
    return c;
  }
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0)
  {
    return a + (d2 / (d2 - d6)) * ac;
  }
  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
  {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double distance_to_surface(const SurfaceMesh &mesh, const Vec3 &p)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto &t : mesh.triangles())
  {
    Vec3 q = closest_point_on_triangle(p, mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2]));
    best = std::min(best, (q - p).norm());
  }
  return best;
}

bool ContainmentReport::all_inside() const
{
  return std::all_of(inside.begin(), inside.end(), [](bool b) { return b; });
}

ContainmentReport check_containment(const SurfaceMesh &mesh, const ChargeSet &charges,
                                    double surface_tol)
{
  ContainmentReport report;
  report.winding.reserve(charges.size());
  for (const auto &atom : charges.atoms)
  {
    double omega = 0.0;
    for (const auto &t : mesh.triangles())
    {
      omega += solid_angle(atom.position, mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2]));
    }
    double w = omega / (4.0 * std::numbers::pi);
    double d = distance_to_surface(mesh, atom.position);
    report.winding.push_back(w);
    report.surface_distance.push_back(d);
    report.inside.push_back(w > 0.5 && d > surface_tol);
  }
  return report;
}

ContainmentReport validate_containment(const SurfaceMesh &mesh, const ChargeSet &charges,
                                       double surface_tol)
{
  auto report = check_containment(mesh, charges, surface_tol);
  std::vector<std::string> bad;
  for (std::size_t k = 0; k < charges.size(); ++k)
  {
    if (!report.inside[k])
    {
      std::ostringstream os;
      os << k << (report.surface_distance[k] <= surface_tol ? " (on surface)" : " (outside)");
      bad.push_back(os.str());
    }
  }
  if (!bad.empty())
  {
    throw ValidationError("charges not strictly inside the surface: atoms " + join_limited(bad));
  }
  return report;
}

}  // namespace pbbem

// Copyright pbbem authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef PBBEM_MOLECULE_IO_HPP
#define PBBEM_MOLECULE_IO_HPP

#include <array>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace pbbem
{

using Vec3 = Eigen::Vector3d;

// Malformed input text. The message names the offending line.
class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Input that parsed but violates a geometric or physical invariant.
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Atom
{
  Vec3 position;
  double charge = 0.0;  // [e]
  double radius = 0.0;  // [Å]
};

// Point charges of the solute, in file order.
struct ChargeSet
{
  std::vector<Atom> atoms;

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }
};

// Relative permittivities and inverse Debye length [1/Å].
// kcal·Å/(mol·e²)
inline constexpr double coulomb_kcal = 332.0636;

struct PhysicalParams
{
  double eps_int = 4.0;
  double eps_ext = 80.0;
  double kappa = 0.125;

  // Throws ValidationError unless eps_int > 0, eps_ext > 0, kappa >= 0.
  void validate() const;
};

using Triangle = std::array<int, 3>;

//
// Closed, consistently oriented triangulation with outward normals. P1 degrees of freedom live
// on the vertices, so the DOF count equals the vertex count. The constructor validates every
// invariant and throws ValidationError listing the offending simplices.
//
class SurfaceMesh
{
public:
  SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_dofs() const { return num_vertices(); }

  const std::vector<Vec3> &vertices() const { return vertices_; }
  const std::vector<Triangle> &triangles() const { return triangles_; }
  const Vec3 &vertex(int i) const { return vertices_[i]; }
  const Triangle &triangle(int t) const { return triangles_[t]; }
  const Vec3 &normal(int t) const { return normals_[t]; }
  double area(int t) const { return areas_[t]; }

  double total_area() const;
  double enclosed_volume() const;
  Vec3 centroid() const;  // vertex average

  // Number of distinct undirected edges.
  int num_edges() const { return num_edges_; }

private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Vec3> normals_;
  std::vector<double> areas_;
  int num_edges_ = 0;
};

enum class MeshFormat
{
  Off,
  Msms
};

MeshFormat parse_mesh_format(std::string_view name);

// PQR records: lines whose first token is ATOM or HETATM; the final five fields are
// x y z charge radius. Other lines are ignored.
ChargeSet parse_pqr(std::istream &in);
ChargeSet parse_pqr_text(std::string_view text);
ChargeSet load_pqr(const std::filesystem::path &path);

// OFF uses 0-based "3 i j k" faces. For MSMS, `path` may be the common stem or either of the
// .vert/.face files; face indices are 1-based and each file has three header lines.
SurfaceMesh load_mesh(const std::filesystem::path &path, MeshFormat format);
SurfaceMesh read_off(std::istream &in);
SurfaceMesh read_msms(std::istream &vert, std::istream &face);

// Writes with round-trip precision, so read_off(write_off(m)) reproduces m bit-exactly.
void write_off(std::ostream &out, const SurfaceMesh &mesh);

// Icosahedron refined `subdivisions` times by midpoint splitting, vertices projected onto the
// sphere of the given radius around `center`.
SurfaceMesh generate_icosphere(double radius, int subdivisions, const Vec3 &center = Vec3::Zero());

struct ContainmentReport
{
  std::vector<double> winding;          // per atom, ~1 inside and ~0 outside
  std::vector<double> surface_distance;  // per atom [Å]
  std::vector<bool> inside;
  bool all_inside() const;
};

// Winding numbers from summed signed solid angles, plus distance to the surface.
ContainmentReport check_containment(const SurfaceMesh &mesh, const ChargeSet &charges,
                                    double surface_tol = 1e-6);

// As check_containment, but throws ValidationError listing every atom that is outside or on
// the surface.
ContainmentReport validate_containment(const SurfaceMesh &mesh, const ChargeSet &charges,
                                       double surface_tol = 1e-6);

// Signed solid angle of triangle (a, b, c) seen from p.
double solid_angle(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c);

// Closest point on triangle (a, b, c) to p.
Vec3 closest_point_on_triangle(const Vec3 &p, const Vec3 &a, const Vec3 &b, const Vec3 &c);

double distance_to_surface(const SurfaceMesh &mesh, const Vec3 &p);

}  // namespace pbbem

#endif  // PBBEM_MOLECULE_IO_HPP

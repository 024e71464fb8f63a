#include "nsfemdg/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace nsfemdg {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_vtk(std::ostream& os, const Mesh& mesh, const State& s, const std::string& title) {
  if (s.rho.size() != mesh.num_elements()) throw InvalidArgument("write_vtk: state does not match the mesh");
  // The title line is a single line of at most 256 characters.
  std::string head = title.substr(0, 255);
  for (char& c : head) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  os << "# vtk DataFile Version 3.0\n" << head << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec3& p : mesh.vertices()) os << fmt(p[0]) << ' ' << fmt(p[1]) << ' ' << fmt(p[2]) << '\n';
  const Index ne = mesh.num_elements();
  os << "CELLS " << ne << ' ' << 5 * ne << '\n';
  for (const Element& el : mesh.elements()) {
    os << 4;
    for (Index v : el.vertices) os << ' ' << v;
    os << '\n';
  }
  os << "CELL_TYPES " << ne << '\n';
  for (Index e = 0; e < ne; ++e) os << "10\n";
  os << "CELL_DATA " << ne << "\nSCALARS density double 1\nLOOKUP_TABLE default\n";
  for (Index e = 0; e < ne; ++e) os << fmt(s.rho[e]) << '\n';
  os << "VECTORS velocity double\n";
  for (const Vec3& u : element_average(s.u, mesh)) os << fmt(u[0]) << ' ' << fmt(u[1]) << ' ' << fmt(u[2]) << '\n';
}

void write_vtk(const std::string& path, const Mesh& mesh, const State& s, const std::string& title) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_vtk(os, mesh, s, title);
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace nsfemdg

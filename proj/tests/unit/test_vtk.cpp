#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nsfemdg/cli/fields.hpp"
#include "nsfemdg/vtk.hpp"

namespace nsfemdg {
namespace {

TEST(Vtk, LegacyUnstructuredGrid) {
  const Mesh m = build_box_mesh(1);
  std::mt19937_64 rng(2);
  const State s = cli::random_state(m, rng);
  std::ostringstream os;
  write_vtk(os, m, s, "two\nlines");
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# vtk DataFile Version 3.0");
  std::getline(in, line);
  EXPECT_EQ(line, "two lines");
  std::getline(in, line);
  EXPECT_EQ(line, "ASCII");
  std::getline(in, line);
  EXPECT_EQ(line, "DATASET UNSTRUCTURED_GRID");

  std::string kw;
  std::string type;
  Index count = 0;
  in >> kw >> count >> type;
  EXPECT_EQ(kw, "POINTS");
  EXPECT_EQ(count, 8);
  for (Index i = 0; i < count; ++i) {
    Vec3 p;
    in >> p[0] >> p[1] >> p[2];
    EXPECT_EQ(p, m.vertex(i));
  }
  Index size = 0;
  in >> kw >> count >> size;
  EXPECT_EQ(kw, "CELLS");
  EXPECT_EQ(count, 6);
  EXPECT_EQ(size, 30);
  for (Index e = 0; e < count; ++e) {
    int nv = 0;
    in >> nv;
    EXPECT_EQ(nv, 4);
    for (int k = 0; k < 4; ++k) {
      Index v = 0;
      in >> v;
      EXPECT_EQ(v, m.element(e).vertices[static_cast<std::size_t>(k)]);
    }
  }
  in >> kw >> count;
  EXPECT_EQ(kw, "CELL_TYPES");
  for (Index e = 0; e < count; ++e) {
    int t = 0;
    in >> t;
    EXPECT_EQ(t, 10);
  }
  in >> kw >> count;
  EXPECT_EQ(kw, "CELL_DATA");
  EXPECT_EQ(count, 6);
  std::string name;
  int comps = 0;
  in >> kw >> name >> type >> comps;
  EXPECT_EQ(kw + name, "SCALARSdensity");
  in >> kw >> name;
  EXPECT_EQ(kw + name, "LOOKUP_TABLEdefault");
  for (Index e = 0; e < count; ++e) {
    double r = 0.0;
    in >> r;
    EXPECT_EQ(r, s.rho[e]);  // %.17g round-trips
  }
  in >> kw >> name >> type;
  EXPECT_EQ(kw + name, "VECTORSvelocity");
  const std::vector<Vec3> uh = element_average(s.u, m);
  for (Index e = 0; e < count; ++e) {
    Vec3 u;
    in >> u[0] >> u[1] >> u[2];
    EXPECT_EQ(u, uh[static_cast<std::size_t>(e)]);
  }
  EXPECT_TRUE(static_cast<bool>(in));
  in >> kw;
  EXPECT_TRUE(in.eof());
}

TEST(Vtk, FileOutputAndErrors) {
  const Mesh m = build_box_mesh(1);
  std::mt19937_64 rng(2);
  const State s = cli::random_state(m, rng);
  const auto path = std::filesystem::temp_directory_path() / "nsfemdg_vtk_test.vtk";
  write_vtk(path.string(), m, s);
  std::ifstream f(path);
  std::stringstream file;
  file << f.rdbuf();
  std::ostringstream direct;
  write_vtk(direct, m, s);
  EXPECT_EQ(file.str(), direct.str());
  std::filesystem::remove(path);

  EXPECT_THROW(write_vtk("/nonexistent-dir/x.vtk", m, s), std::runtime_error);
  const Mesh m2 = build_box_mesh(2);
  std::ostringstream os;
  EXPECT_THROW(write_vtk(os, m2, s), InvalidArgument);
}

}  // namespace
}  // namespace nsfemdg

#pragma once

#include <iosfwd>
#include <string>

#include "nsfemdg/scheme.hpp"

namespace nsfemdg {

/// Legacy ASCII VTK 3.0 unstructured grid with per-cell density and element
/// average velocity.
void write_vtk(std::ostream& os, const Mesh& mesh, const State& s, const std::string& title = "nsfemdg");
void write_vtk(const std::string& path, const Mesh& mesh, const State& s, const std::string& title = "nsfemdg");

}  // namespace nsfemdg

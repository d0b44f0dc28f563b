// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "vfvm/mesh.hpp"

namespace vfvm {

/// Text mesh format, whitespace separated, '#' starts a comment:
///   <nv> <dim>          then nv lines: <index> <x> ... (dim coordinates)
///   <nc>                then nc lines: <index> <v0> ... <vdim> <region>
///   <nf>                then nf lines: <index> <v0> ... <vdim-1> <tag>
/// Indices are 0-based and must be consecutive. Coordinates are written with
/// 17 significant digits so write/read round-trips bit-exactly.
/// read_mesh throws ParseError with a line number, then validates the mesh.
Mesh read_mesh(std::istream& is);
Mesh read_mesh_file(const std::string& path);
void write_mesh(const Mesh& m, std::ostream& os);
void write_mesh_file(const Mesh& m, const std::string& path);

}  // namespace vfvm

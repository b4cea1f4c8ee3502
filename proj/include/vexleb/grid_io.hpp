#pragma once

// Grid-function files: one JSON header line
//   {"dim":2,"x":[lo,hi,n],"y":[lo,hi,n]}          ("y" omitted for 1-D,
//                                                    "kind":"exponent" for p(.))
// followed by whitespace-separated cell values, row-major with y outer.

#include <iosfwd>
#include <string>

#include "vexleb/grid.hpp"

namespace vexleb {

enum class FieldKind { function, exponent };

struct GridFile {
    GridFunction function;
    FieldKind kind = FieldKind::function;
};

GridFile read_grid_file(std::istream& in);
GridFile read_grid_file(const std::string& path);

void write_grid_file(std::ostream& out, const GridFunction& f, FieldKind kind = FieldKind::function);
void write_grid_file(const std::string& path, const GridFunction& f,
                     FieldKind kind = FieldKind::function);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

} // namespace vexleb

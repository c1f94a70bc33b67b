#pragma once

#include <iosfwd>
#include <string>

#include "aronsson/grid.hpp"

namespace aronsson {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes one row per interior/boundary node:
///   1D: ix,x,class,value      2D: ix,iy,x,y,class,value
/// Values are printed with 17 significant digits so reloading is bit-exact.
void write_csv(std::ostream& os, const GridFunction& u);
void write_csv(const std::string& path, const GridFunction& u);

/// Reloads a GridFunction written by write_csv. The lattice (extents, node
/// classes) is reconstructed from the rows; values round-trip bit-exactly.
GridFunction load_csv(std::istream& is);
GridFunction load_csv(const std::string& path);

}  // namespace aronsson

#pragma once

#include "hjsg/mra/coeff_field.hpp"

#include <iosfwd>
#include <string>

namespace hjsg::mra
{
// CSV dump of a single-component field: a comment header with dim, max level,
// family and extents, then one row per (levels, translations, degree
// multi-index, coefficient) in sorted key order.
void write_field_csv(std::ostream &out, HierCoeffField const &field);
void write_field_csv(std::string const &path, HierCoeffField const &field);

// Reads a dump produced by write_field_csv. The space is rebuilt from the
// keys present in the file.
HierCoeffField read_field_csv(std::istream &in);
HierCoeffField read_field_csv(std::string const &path);

} // namespace hjsg::mra

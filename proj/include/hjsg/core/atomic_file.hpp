#pragma once

#include <functional>
#include <iosfwd>
#include <string>

namespace hjsg
{
// Writes through a temporary file in the same directory and renames it over
// path once the writer returns, so readers never see a partial file.
void write_file_atomic(std::string const &path, std::function<void(std::ostream &)> const &writer,
                       bool binary = false);

} // namespace hjsg

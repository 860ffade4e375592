#include "hjsg/core/atomic_file.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

namespace hjsg
{
void write_file_atomic(std::string const &path, std::function<void(std::ostream &)> const &writer,
                       bool binary)
{
  namespace fs = std::filesystem;
  fs::path const target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, binary ? std::ios::out | std::ios::binary : std::ios::out);
    if (!out)
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    writer(out);
    out.flush();
    if (!out)
      throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
  {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

} // namespace hjsg

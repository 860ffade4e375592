#include "hjsg/mra/field_io.hpp"

#include "hjsg/core/atomic_file.hpp"
#include "hjsg/core/error.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace hjsg::mra
{
namespace
{
char const *family_name(BasisFamily f)
{
  switch (f)
  {
  case BasisFamily::alpert:
    return "alpert";
  case BasisFamily::interpolatory:
    return "interpolatory";
  case BasisFamily::point_values:
    return "point_values";
  }
  return "unknown";
}

BasisFamily parse_family(std::string const &s)
{
  if (s == "alpert")
    return BasisFamily::alpert;
  if (s == "interpolatory")
    return BasisFamily::interpolatory;
  if (s == "point_values")
    return BasisFamily::point_values;
  throw ConfigError("field csv: unknown basis family '" + s + "'");
}
} // namespace

void write_field_csv(std::ostream &out, HierCoeffField const &field)
{
  if (field.shape().ncomp != 1)
    throw ConfigError("write_field_csv: only single-component fields are supported");
  AdaptiveSpace const &space = *field.space();
  int const dim = space.dim();
  auto const &ext = field.shape().extents;
  out << "# hjsg-field dim=" << dim << " max_level=" << space.max_level()
      << " family=" << family_name(field.family()) << " extents=";
  for (int m = 0; m < dim; ++m)
    out << (m ? "," : "") << ext[m];
  out << '\n';
  for (int m = 0; m < dim; ++m)
    out << "l" << m + 1 << ',';
  for (int m = 0; m < dim; ++m)
    out << "j" << m + 1 << ',';
  for (int m = 0; m < dim; ++m)
    out << "i" << m + 1 << ',';
  out << "value\n";
  out << std::setprecision(17);
  std::vector<int> idx(dim);
  for (std::size_t e = 0; e < space.size(); ++e)
  {
    ElementKey const key = space.key(e);
    auto blk = field.block(e);
    for (int flat = 0; flat < field.block_size(); ++flat)
    {
      int rem = flat;
      for (int m = dim - 1; m >= 0; --m)
      {
        idx[m] = rem % ext[m];
        rem /= ext[m];
      }
      for (int m = 0; m < dim; ++m)
        out << key.level(m) << ',';
      for (int m = 0; m < dim; ++m)
        out << key.translation(m) << ',';
      for (int m = 0; m < dim; ++m)
        out << idx[m] << ',';
      out << blk[flat] << '\n';
    }
  }
}

void write_field_csv(std::string const &path, HierCoeffField const &field)
{
  write_file_atomic(path, [&](std::ostream &out) { write_field_csv(out, field); });
}

HierCoeffField read_field_csv(std::istream &in)
{
  std::string line;
  if (!std::getline(in, line) || line.rfind("# hjsg-field", 0) != 0)
    throw ConfigError("field csv: missing header");
  int dim = 0;
  int max_level = 0;
  std::string family;
  std::vector<int> extents;
  {
    std::istringstream hs(line.substr(12));
    std::string tok;
    while (hs >> tok)
    {
      auto eq = tok.find('=');
      if (eq == std::string::npos)
        continue;
      std::string const k = tok.substr(0, eq);
      std::string const v = tok.substr(eq + 1);
      if (k == "dim")
        dim = std::stoi(v);
      else if (k == "max_level")
        max_level = std::stoi(v);
      else if (k == "family")
        family = v;
      else if (k == "extents")
      {
        std::istringstream es(v);
        std::string part;
        while (std::getline(es, part, ','))
          extents.push_back(std::stoi(part));
      }
    }
  }
  if (dim < 1 || static_cast<int>(extents.size()) != dim)
    throw ConfigError("field csv: malformed header");
  std::getline(in, line); // column names

  std::map<ElementKey, std::vector<double>> blocks;
  BlockShape shape{1, extents};
  std::vector<int> levels(dim), idx(dim);
  std::vector<std::uint32_t> trans(dim);
  while (std::getline(in, line))
  {
    if (line.empty())
      continue;
    std::istringstream ls(line);
    std::string cell;
    auto next = [&]() {
      if (!std::getline(ls, cell, ','))
        throw ConfigError("field csv: short row");
      return cell;
    };
    for (int m = 0; m < dim; ++m)
      levels[m] = std::stoi(next());
    for (int m = 0; m < dim; ++m)
      trans[m] = static_cast<std::uint32_t>(std::stoul(next()));
    for (int m = 0; m < dim; ++m)
      idx[m] = std::stoi(next());
    double const value = std::stod(next());
    auto &blk = blocks[ElementKey::from_levels(levels, trans)];
    blk.resize(shape.size(), 0.0);
    int flat = 0;
    for (int m = 0; m < dim; ++m)
    {
      if (idx[m] < 0 || idx[m] >= extents[m])
        throw ConfigError("field csv: degree index out of range");
      flat = flat * extents[m] + idx[m];
    }
    blk[flat] = value;
  }
  std::vector<ElementKey> keys;
  for (auto const &kv : blocks)
    keys.push_back(kv.first);
  auto space = std::make_shared<AdaptiveSpace const>(dim, max_level, keys);
  if (!space->is_hierarchically_complete())
    throw ConfigError("field csv: key set is not hierarchically complete");
  HierCoeffField field(space, parse_family(family), shape);
  for (std::size_t e = 0; e < space->size(); ++e)
  {
    auto const &src = blocks.at(space->key(e));
    std::copy(src.begin(), src.end(), field.block(e).begin());
  }
  return field;
}

HierCoeffField read_field_csv(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open field file " + path);
  return read_field_csv(in);
}

} // namespace hjsg::mra

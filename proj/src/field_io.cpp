#include "film/field_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "film/serialize.hpp"

namespace film {

namespace {

using nlohmann::json;

void put_double(std::string& out, double x)
{
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, r.ptr);
}

template <typename Array>
void write_csv_line(std::ostream& os, const Array& a)
{
  std::string line;
  line.reserve(static_cast<std::size_t>(a.size()) * 12);
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (k)
      line.push_back(',');
    if constexpr (std::is_same_v<typename Array::Scalar, double>)
      put_double(line, a.data()[k]);
    else
      line.append(std::to_string(static_cast<int>(a.data()[k])));
  }
  line.push_back('\n');
  os << line;
}

template <typename Array>
void read_csv_line(std::istream& is, Array& a, const char* name, const std::string& path)
{
  std::string line;
  if (!std::getline(is, line))
    throw IoError(path + ": missing array '" + name + "'");
  const char* p = line.data();
  const char* end = p + line.size();
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    double x = 0.0;
    auto r = std::from_chars(p, end, x);
    if (r.ec != std::errc())
      throw IoError(path + ": malformed value in array '" + name + "'");
    a.data()[k] = static_cast<typename Array::Scalar>(x);
    p = r.ptr;
    if (k + 1 < a.size()) {
      if (p == end || *p != ',')
        throw IoError(path + ": array '" + name + "' is too short");
      ++p;
    }
  }
  if (p != end)
    throw IoError(path + ": array '" + name + "' is too long");
}

void write_block(std::ostream& os, const Array2<double>& a)
{
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(double)));
  } else {
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      auto bits = std::bit_cast<std::uint64_t>(a.data()[k]);
      char b[8];
      for (int m = 0; m < 8; ++m)
        b[m] = static_cast<char>((bits >> (8 * m)) & 0xff);
      os.write(b, 8);
    }
  }
}

void read_block(std::istream& is, Array2<double>& a, const std::string& path)
{
  std::vector<unsigned char> raw(static_cast<std::size_t>(a.size()) * 8);
  if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
    throw IoError(path + ": truncated binary block");
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    std::uint64_t bits = 0;
    for (int m = 0; m < 8; ++m)
      bits |= static_cast<std::uint64_t>(raw[static_cast<std::size_t>(k) * 8 + m]) << (8 * m);
    a.data()[k] = std::bit_cast<double>(bits);
  }
}

}  // namespace

void write_field(const std::string& path, const DisplacementField& f, DumpEncoding encoding)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw IoError("cannot open '" + path + "' for writing");
  json h;
  h["format"] = "film-field";
  h["version"] = 1;
  h["encoding"] = encoding == DumpEncoding::csv ? "csv" : "binary";
  h["nx"] = f.grid.nx;
  h["ny"] = f.grid.ny;
  h["hx"] = f.grid.hx();
  h["hy"] = f.grid.hy();
  h["x0"] = f.grid.x0;
  h["y0"] = f.grid.y0;
  h["lx"] = f.grid.lx;
  h["ly"] = f.grid.ly;
  h["params"] = f.params;
  h["support_kind"] = f.support_kind == SupportKind::analytic ? "analytic" : "threshold";
  h["edge_height"] = f.edge_height;
  h["arrays"] = {"u", "v", "w", "support"};
  os << h.dump() << '\n';
  if (encoding == DumpEncoding::csv) {
    write_csv_line(os, f.u);
    write_csv_line(os, f.v);
    write_csv_line(os, f.w);
    write_csv_line(os, f.support);
  } else {
    write_block(os, f.u);
    write_block(os, f.v);
    write_block(os, f.w);
    os.write(reinterpret_cast<const char*>(f.support.data()), static_cast<std::streamsize>(f.support.size()));
  }
  if (!os)
    throw IoError("write to '" + path + "' failed");
}

DisplacementField read_field(const std::string& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open '" + path + "'");
  std::string header;
  if (!std::getline(is, header))
    throw IoError(path + ": empty file");
  json h;
  try {
    h = json::parse(header);
  } catch (const json::exception& e) {
    throw IoError(path + ": bad header: " + e.what());
  }
  DisplacementField f;
  try {
    if (h.at("format") != "film-field")
      throw IoError(path + ": not a field dump");
    Grid g{h.at("nx").get<Eigen::Index>(), h.at("ny").get<Eigen::Index>(), h.at("x0").get<double>(),
           h.at("y0").get<double>(), h.at("lx").get<double>(), h.at("ly").get<double>()};
    g.validate();
    f = DisplacementField(g, h.at("params").get<Params>());
    f.support_kind = h.value("support_kind", "threshold") == "analytic" ? SupportKind::analytic : SupportKind::threshold;
    f.edge_height = h.value("edge_height", 0.0);
    const auto enc = h.at("encoding").get<std::string>();
    if (enc == "csv") {
      read_csv_line(is, f.u, "u", path);
      read_csv_line(is, f.v, "v", path);
      read_csv_line(is, f.w, "w", path);
      read_csv_line(is, f.support, "support", path);
    } else if (enc == "binary") {
      read_block(is, f.u, path);
      read_block(is, f.v, path);
      read_block(is, f.w, path);
      if (!is.read(reinterpret_cast<char*>(f.support.data()), static_cast<std::streamsize>(f.support.size())))
        throw IoError(path + ": truncated support block");
    } else {
      throw IoError(path + ": unknown encoding '" + enc + "'");
    }
  } catch (const json::exception& e) {
    throw IoError(path + ": bad header: " + e.what());
  } catch (const DomainError& e) {
    throw IoError(path + ": " + e.what());
  }
  return f;
}

std::string energy_json(const EnergyBreakdown& e) { return json(e).dump(2); }

}  // namespace film

#include "symlines/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "symlines/error.hpp"

namespace symlines {

namespace {

bool g_quiet = false;

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return __builtin_bswap32(v);
}

}  // namespace

void write_stack(const std::string& path, const std::vector<Image>& images) {
  const int m = static_cast<int>(images.size());
  const int N = m ? images[0].N : 0;
  for (const auto& im : images)
    if (im.N != N) throw Error(Errc::invalid_argument, "write_stack: mixed image sizes");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "write_stack: cannot open " + path);
  nlohmann::json h = {{"magic", "SYMSTACK1"}, {"m", m}, {"N", N},
                      {"dtype", "f32"}, {"byte_order", "LE"}};
  if (m) h["pixel_size"] = images[0].pixel_size;
  f << h.dump() << '\n';
  std::vector<std::uint32_t> buf(static_cast<size_t>(N) * N);
  for (const auto& im : images) {
    for (size_t t = 0; t < buf.size(); ++t) {
      const float v = static_cast<float>(im.pixels[t]);
      std::uint32_t u;
      std::memcpy(&u, &v, 4);
      buf[t] = to_le(u);
    }
    f.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * 4));
  }
  if (!f) throw Error(Errc::io, "write_stack: write failed for " + path);
}

std::vector<Image> read_stack(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "read_stack: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw Error(Errc::io, "read_stack: missing header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io, std::string("read_stack: bad header: ") + e.what());
  }
  if (h.value("magic", "") != "SYMSTACK1" || h.value("dtype", "") != "f32" ||
      h.value("byte_order", "") != "LE")
    throw Error(Errc::io, "read_stack: not a SYMSTACK1 f32 LE file");
  const int m = h.at("m").get<int>();
  const int N = h.at("N").get<int>();
  const double px = h.value("pixel_size", 1.0);
  if (m < 0 || N < 0) throw Error(Errc::io, "read_stack: negative dimensions");
  const size_t per = static_cast<size_t>(N) * N;
  const std::streampos start = f.tellg();
  f.seekg(0, std::ios::end);
  const auto bytes = static_cast<size_t>(f.tellg() - start);
  if (bytes != per * m * 4)
    throw Error(Errc::io, "read_stack: payload is " + std::to_string(bytes) +
                              " bytes, expected " + std::to_string(per * m * 4));
  f.seekg(start);
  std::vector<Image> out(m, Image(N, px));
  std::vector<std::uint32_t> buf(per);
  for (auto& im : out) {
    f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(per * 4));
    for (size_t t = 0; t < per; ++t) {
      const std::uint32_t u = to_le(buf[t]);
      float v;
      std::memcpy(&v, &u, 4);
      im.pixels[t] = v;
    }
  }
  if (!f) throw Error(Errc::io, "read_stack: short read");
  return out;
}

void write_rotations(const std::string& path, const std::vector<Rotation>& rs) {
  std::ofstream f(path);
  if (!f) throw Error(Errc::io, "write_rotations: cannot open " + path);
  f << "index,r11,r12,r13,r21,r22,r23,r31,r32,r33\n";
  f << std::setprecision(17);
  for (size_t i = 0; i < rs.size(); ++i) {
    f << i;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) f << ',' << rs[i](a, b);
    f << '\n';
  }
  if (!f) throw Error(Errc::io, "write_rotations: write failed for " + path);
}

std::vector<Rotation> read_rotations(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::io, "read_rotations: cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("index,r11", 0) != 0)
    throw Error(Errc::io, "read_rotations: missing header in " + path);
  std::vector<Rotation> out;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    try {
      while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw Error(Errc::io, "read_rotations: bad number on line " + std::to_string(lineno));
    }
    if (v.size() != 10)
      throw Error(Errc::io, "read_rotations: expected 10 fields on line " +
                                std::to_string(lineno));
    if (static_cast<size_t>(v[0]) != out.size())
      throw Error(Errc::io, "read_rotations: index out of order on line " +
                                std::to_string(lineno));
    Rotation r;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) r(a, b) = v[1 + 3 * a + b];
    if (!is_rotation(r, 1e-6))
      throw Error(Errc::io, "read_rotations: not a rotation on line " +
                                std::to_string(lineno));
    out.push_back(r);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(Errc::io, "cannot open " + path);
  f << text;
  if (!f) throw Error(Errc::io, "write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::io, "cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void log_line(const std::string& stage, const std::string& msg) {
  if (!g_quiet) std::cerr << '[' << stage << "] " << msg << '\n';
}

void set_log_quiet(bool quiet) { g_quiet = quiet; }

}  // namespace symlines

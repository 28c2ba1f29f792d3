#include "gsq/io.hpp"

#include "gsq/errors.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "binary path dumps are defined little-endian");

namespace gsq {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string format_e16(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

} // namespace

std::string path_csv(const SampledPath& path) {
  std::string out = "t,x\n";
  for (std::size_t k = 0; k < path.x.size(); ++k) {
    out += format_e16(path.grid.time(k));
    out += ',';
    out += format_e16(path.x[k]);
    out += '\n';
  }
  return out;
}

void write_path_csv(const SampledPath& path, const std::string& file) {
  atomic_write(file, path_csv(path));
}

void write_path_binary(const SampledPath& path, const std::string& file) {
  std::string tmp = file + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw NumericError("write_path_binary: cannot open " + tmp);
    os.write("GSP1", 4);
    std::uint64_t n = path.x.size();
    os.write(reinterpret_cast<const char*>(&n), 8);
    os.write(reinterpret_cast<const char*>(&path.grid.origin), 8);
    os.write(reinterpret_cast<const char*>(&path.grid.step), 8);
    os.write(reinterpret_cast<const char*>(path.x.data()), std::streamsize(8 * n));
  }
  std::filesystem::rename(tmp, file);
}

SampledPath read_path_binary(const std::string& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw NumericError("read_path_binary: cannot open " + file);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, "GSP1", 4) != 0)
    throw NumericError("read_path_binary: bad magic in " + file);
  std::uint64_t n = 0;
  double origin = 0, step = 0;
  is.read(reinterpret_cast<char*>(&n), 8);
  is.read(reinterpret_cast<char*>(&origin), 8);
  is.read(reinterpret_cast<char*>(&step), 8);
  SampledPath path;
  path.grid = GridSpec(step, n, origin);
  path.x.resize(n);
  is.read(reinterpret_cast<char*>(path.x.data()), std::streamsize(8 * n));
  if (!is) throw NumericError("read_path_binary: truncated file " + file);
  return path;
}

std::string queue_csv(const QueuePath& queue) {
  std::string out = "t,q\n";
  for (std::size_t k = 0; k < queue.q.size(); ++k) {
    out += format_e16(queue.grid.time(k));
    out += ',';
    out += format_e16(queue.q[k]);
    out += '\n';
  }
  return out;
}

void write_queue_csv(const QueuePath& queue, const std::string& file) {
  atomic_write(file, queue_csv(queue));
}

std::string crossing_record_json(const CrossingRecord& record) {
  nlohmann::ordered_json j;
  j["boundary"] = record.boundary_id;
  j["total_crossings"] = record.total_crossings;
  auto cps = nlohmann::ordered_json::array();
  for (const auto& cp : record.checkpoints) {
    nlohmann::ordered_json e;
    e["t"] = cp.t;
    if (cp.xi)
      e["xi"] = *cp.xi;
    else
      e["xi"] = nullptr;
    e["crossed"] = cp.crossed_in_window;
    cps.push_back(e);
  }
  j["checkpoints"] = cps;
  if (!record.crossing_times.empty()) j["crossing_times"] = record.crossing_times;
  return j.dump(2);
}

std::string constants_json(const AsymptoticConstants& k) {
  std::ostringstream os;
  auto field = [&](const char* name, double v, bool last = false) {
    os << "  \"" << name << "\": " << format_g17(v) << (last ? "\n" : ",\n");
  };
  os << "{\n";
  field("c", k.driftC);
  field("alpha0", k.alpha0);
  field("A0", k.A0);
  field("alphaInf", k.alphaInf);
  field("AInf", k.AInf);
  field("tauStar", k.tauStar);
  field("A", k.A);
  field("B", k.B);
  field("b", k.b);
  field("lambda", k.lambda);
  field("gamma", k.gamma);
  field("zetaAlpha", k.zetaAlpha);
  if (k.pickandsH) {
    field("pickandsH", *k.pickandsH);
    field("scrC", *k.scrC, true);
  } else {
    os << "  \"pickandsH\": \"pending\",\n";
    os << "  \"scrC\": \"pending\"\n";
  }
  os << "}\n";
  return os.str();
}

void atomic_write(const std::string& file, const std::string& content) {
  std::string tmp = file + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw NumericError("atomic_write: cannot open " + tmp);
    os.write(content.data(), std::streamsize(content.size()));
  }
  std::filesystem::rename(tmp, file);
}

std::string read_file(const std::string& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw NumericError("read_file: cannot open " + file);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

bool file_exists(const std::string& file) { return std::filesystem::exists(file); }

} // namespace gsq

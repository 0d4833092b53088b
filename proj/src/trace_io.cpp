#include "rmom/trace_io.hpp"

#include <unistd.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmom/errors.hpp"

namespace rmom {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trace_to_csv(const std::vector<IterRecord>& rows) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const IterRecord& r : rows) {
    out += std::to_string(r.k);
    for (double v : {r.f_x, r.f_y, r.grad_norm_y, r.beta, r.a_next, r.big_a, r.cond2_margin,
                     r.dist_x0}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += std::to_string(r.wall_ns);
    out += '\n';
  }
  return out;
}

std::vector<IterRecord> trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw ConfigError("trace CSV: unexpected header");
  }
  std::vector<IterRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw ConfigError("trace CSV: expected 10 columns: " + line);
    IterRecord r;
    r.k = std::stol(cells[0]);
    double* fields[] = {&r.f_x,  &r.f_y,   &r.grad_norm_y,  &r.beta,
                        &r.a_next, &r.big_a, &r.cond2_margin, &r.dist_x0};
    for (int i = 0; i < 8; ++i) {
      const std::string& c = cells[i + 1];
      const auto res = std::from_chars(c.data(), c.data() + c.size(), *fields[i]);
      if (res.ec != std::errc()) throw ConfigError("trace CSV: bad number '" + c + "'");
    }
    r.wall_ns = std::stoll(cells[9]);
    rows.push_back(r);
  }
  return rows;
}

std::string restarts_to_json(const std::vector<long>& restarts) {
  std::string out = "{\"restarts\":[";
  for (std::size_t i = 0; i < restarts.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(restarts[i]);
  }
  out += "]}\n";
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rmom

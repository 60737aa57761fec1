#include "cli/results.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "steinlab/errors.hpp"

namespace steinlab::cli {

namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_int(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("bad integer field '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s) {
  // strtod rather than from_chars so inf/nan spellings from printf read back
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw DomainError("bad real field '" + tmp + "'");
  }
  return v;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_row(const ResultRow& r) {
  std::string s;
  s += r.experiment;
  s += ',' + std::to_string(r.q);
  s += ',' + format_real(r.beta);
  s += ',' + std::to_string(r.N);
  s += ',' + std::to_string(r.M_trunc);
  s += ',' + std::to_string(r.reps);
  s += ',' + std::to_string(r.master_seed);
  s += ',' + r.estimator;
  s += ',' + format_real(r.value);
  s += ',' + format_real(r.stderr_);
  s += ',' + format_real(r.lower);
  s += ',' + format_real(r.upper);
  return s;
}

ResultRow parse_row(std::string_view line) {
  const auto f = fields(line);
  if (f.size() != 12) throw DomainError("results row needs 12 fields, got " + std::to_string(f.size()));
  ResultRow r;
  r.experiment = std::string(f[0]);
  r.q = parse_int<int>(f[1]);
  r.beta = parse_real(f[2]);
  r.N = parse_int<std::size_t>(f[3]);
  r.M_trunc = parse_int<std::size_t>(f[4]);
  r.reps = parse_int<std::size_t>(f[5]);
  r.master_seed = parse_int<std::uint64_t>(f[6]);
  r.estimator = std::string(f[7]);
  r.value = parse_real(f[8]);
  r.stderr_ = parse_real(f[9]);
  r.lower = parse_real(f[10]);
  r.upper = parse_real(f[11]);
  return r;
}

std::string write_csv(std::span<const ResultRow> rows) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : rows) out += format_row(r) + '\n';
  return out;
}

std::vector<ResultRow> read_csv(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line) || line != kResultsHeader) {
    throw DomainError("results file does not start with the expected header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (!line.empty()) rows.push_back(parse_row(line));
  }
  return rows;
}

void write_file_atomic(const std::filesystem::path& file, std::string_view contents) {
  const auto dir = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  auto tmp = file;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    os.flush();
    if (!os) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, file);
}

}  // namespace steinlab::cli

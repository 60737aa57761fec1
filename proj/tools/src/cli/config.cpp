#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "steinlab/constants.hpp"
#include "steinlab/errors.hpp"

namespace steinlab::cli {

namespace {

constexpr std::pair<Subcommand, const char*> kNames[] = {
    {Subcommand::constants, "constants"}, {Subcommand::rho, "rho"},
    {Subcommand::clt_rate, "clt-rate"},   {Subcommand::nclt_rate, "nclt-rate"},
    {Subcommand::ks, "ks"},               {Subcommand::spitzer, "spitzer"},
    {Subcommand::oracle, "oracle"},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    parts.push_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::size_t to_size(std::string_view tok) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw DomainError("not a non-negative integer: '" + std::string(tok) + "'");
  }
  return v;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* subcommand_name(Subcommand s) {
  for (const auto& [k, name] : kNames) {
    if (k == s) return name;
  }
  return "?";
}

Subcommand parse_subcommand(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  throw DomainError("unknown subcommand '" + std::string(name) + "'");
}

OutputFormat ExperimentConfig::resolved_format() const {
  if (format != OutputFormat::automatic) return format;
  return subcommand == Subcommand::constants ? OutputFormat::json : OutputFormat::csv;
}

std::size_t ExperimentConfig::effective_M() const {
  if (trunc_M > 0) return trunc_M;
  if (n_grid.empty()) return std::size_t{1} << 20;
  return trunc_factor * *std::max_element(n_grid.begin(), n_grid.end());
}

std::vector<std::size_t> parse_n_grid(std::string_view text) {
  const auto parts = split(text);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] != "...") {
      out.push_back(to_size(parts[i]));
      continue;
    }
    if (out.size() != 2 || i + 2 != parts.size()) {
      throw DomainError("an ellipsis needs exactly two leading entries and one final entry");
    }
    const std::size_t a = out[0], b = out[1], last = to_size(parts[i + 1]);
    if (!(a < b && b <= last)) throw DomainError("an ellipsis grid must increase");
    bool geometric = false;
    if (a > 0 && b % a == 0) {
      std::size_t x = b;
      while (x < last) x *= b / a;
      geometric = x == last;
    }
    if (geometric) {
      for (std::size_t x = b * (b / a); x <= last; x *= b / a) out.push_back(x);
    } else {
      if ((last - a) % (b - a) != 0) {
        throw DomainError("ellipsis end " + std::to_string(last) + " is not on the grid");
      }
      for (std::size_t x = b + (b - a); x <= last; x += b - a) out.push_back(x);
    }
    break;
  }
  if (out.empty()) throw DomainError("empty grid");
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (auto tok : split(text)) {
    std::string s(tok);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw DomainError("not a number: '" + s + "'");
    out.push_back(v);
  }
  return out;
}

void validate(const ExperimentConfig& cfg) {
  ModelParams{cfg.q, cfg.beta, cfg.normalize_weights}.validate();
  if (cfg.trunc_factor < 1) throw DomainError("trunc-factor must be >= 1");
  if (cfg.subcommand != Subcommand::rho) {
    for (std::size_t N : cfg.n_grid) {
      if (N < 1) throw DomainError("grid entries must be >= 1");
    }
  }
  if (!std::is_sorted(cfg.n_grid.begin(), cfg.n_grid.end()) ||
      std::adjacent_find(cfg.n_grid.begin(), cfg.n_grid.end()) != cfg.n_grid.end()) {
    throw DomainError("n-grid must be strictly increasing");
  }
  if (!(cfg.sigma_tol > 0.0)) throw DomainError("sigma-tol must be positive");
  if (cfg.n_ref < 1 || cfg.n_max < 1) throw DomainError("n-ref and n-max must be >= 1");
  switch (cfg.subcommand) {
    case Subcommand::constants:
      break;
    case Subcommand::rho:
      if (cfg.n_grid.empty()) throw DomainError("rho needs --n-grid (the lags)");
      break;
    case Subcommand::clt_rate:
    case Subcommand::nclt_rate:
      if (cfg.n_grid.size() < 4) throw DomainError("a rate fit needs at least 4 grid points");
      if (cfg.subcommand == Subcommand::clt_rate && cfg.reps < 2) {
        throw DomainError("clt-rate needs reps >= 2");
      }
      break;
    case Subcommand::ks:
      if (cfg.n_grid.empty()) throw DomainError("ks needs --n-grid");
      if (cfg.reps < 2) throw DomainError("ks needs reps >= 2");
      break;
    case Subcommand::spitzer:
      if (cfg.eps.empty()) throw DomainError("spitzer needs --eps");
      for (double e : cfg.eps) {
        if (!(e > 0.0)) throw DomainError("eps values must be positive");
      }
      break;
    case Subcommand::oracle:
      if (cfg.n_grid.empty()) throw DomainError("oracle needs --n-grid");
      break;
  }
}

std::string canonical(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "subcommand=" << subcommand_name(cfg.subcommand) << '\n'
     << "q=" << cfg.q << '\n'
     << "beta=" << fmt(cfg.beta) << '\n'
     << "normalize=" << (cfg.normalize_weights ? 1 : 0) << '\n'
     << "n_grid=";
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) os << (i ? "," : "") << cfg.n_grid[i];
  os << '\n'
     << "reps=" << cfg.reps << '\n'
     << "master_seed=" << cfg.master_seed << '\n'
     << "trunc_factor=" << cfg.trunc_factor << '\n'
     << "trunc_M=" << cfg.trunc_M << '\n'
     << "n_ref=" << cfg.n_ref << '\n'
     << "n_max=" << cfg.n_max << '\n'
     << "eps=";
  for (std::size_t i = 0; i < cfg.eps.size(); ++i) os << (i ? "," : "") << fmt(cfg.eps[i]);
  os << '\n'
     << "sigma_tol=" << fmt(cfg.sigma_tol) << '\n'
     << "format=" << (cfg.resolved_format() == OutputFormat::json ? "json" : "csv") << '\n';
  return os.str();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& cfg, std::string_view version) {
  return fnv1a(canonical(cfg) + "version=" + std::string(version) + '\n');
}

}  // namespace steinlab::cli

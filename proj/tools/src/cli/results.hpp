#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace steinlab::cli {

inline constexpr std::string_view kResultsHeader =
    "experiment,q,beta,N,M_trunc,reps,master_seed,estimator,value,stderr,lower,upper";

/// One line of the results table.  Reals are written with 17 significant
/// digits so a read-write cycle reproduces the bytes.
struct ResultRow {
  std::string experiment;
  int q = 0;
  double beta = 0.0;
  std::size_t N = 0;
  std::size_t M_trunc = 0;
  std::size_t reps = 0;
  std::uint64_t master_seed = 0;
  std::string estimator;
  double value = 0.0;
  double stderr_ = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const ResultRow&) const = default;
};

std::string format_real(double x);
std::string format_row(const ResultRow& row);
ResultRow parse_row(std::string_view line);

/// Header line plus one line per row, '\n' terminated.
std::string write_csv(std::span<const ResultRow> rows);
/// Inverse of write_csv; the header must match exactly.
std::vector<ResultRow> read_csv(std::string_view text);

/// Writes through a sibling temporary and renames it into place.
void write_file_atomic(const std::filesystem::path& file, std::string_view contents);

}  // namespace steinlab::cli

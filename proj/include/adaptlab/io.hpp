#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "adaptlab/excitation.hpp"
#include "adaptlab/integrate.hpp"

namespace adaptlab {

// Header "t,z1,...,dz1,..."; 17 significant digits per value.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

struct CsvParseError : std::runtime_error {
  CsvParseError(const std::string& what, std::size_t row_number)
      : std::runtime_error(what + " (row " + std::to_string(row_number) + ")"),
        row(row_number) {}
  std::size_t row;
};

// Reads a sampled signal back from CSV: first column is time, remaining
// numeric columns are components. Columns whose header starts with "dz"
// are derivative outputs and are skipped. Throws CsvParseError with the
// offending 1-based row number.
SampledSignal read_signal_csv(std::istream& is);

// FNV-1a 64-bit over raw bytes, hex-encoded.
std::string fnv1a64_hex(const std::string& bytes);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& contents);

}  // namespace adaptlab

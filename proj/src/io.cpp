#include "adaptlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace adaptlab {

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  const std::size_t dim = traj.states.empty() ? 0 : traj.states[0].size();
  os << "t";
  for (std::size_t j = 0; j < dim; ++j) os << ",z" << (j + 1);
  for (std::size_t j = 0; j < dim; ++j) os << ",dz" << (j + 1);
  os << "\n";
  char buf[32];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", traj.times[i]);
    os << buf;
    for (std::size_t j = 0; j < dim; ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g", traj.states[i][j]);
      os << buf;
    }
    for (std::size_t j = 0; j < dim; ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g", traj.derivs[i][j]);
      os << buf;
    }
    os << "\n";
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

SampledSignal read_signal_csv(std::istream& is) {
  std::string line;
  std::size_t row = 0;
  if (!std::getline(is, line)) throw CsvParseError("empty input", 1);
  ++row;
  const std::vector<std::string> header = split_csv(line);
  if (header.size() < 2) throw CsvParseError("need a time and a value column", row);

  std::vector<std::size_t> keep;
  for (std::size_t j = 1; j < header.size(); ++j)
    if (header[j].rfind("dz", 0) != 0) keep.push_back(j);
  if (keep.empty()) throw CsvParseError("no signal columns in header", row);

  SampledSignal sig;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != header.size())
      throw CsvParseError("wrong number of columns", row);
    try {
      std::size_t pos = 0;
      sig.times.push_back(std::stod(cells[0], &pos));
      Vec y(keep.size());
      for (std::size_t k = 0; k < keep.size(); ++k)
        y[k] = std::stod(cells[keep[k]], &pos);
      sig.samples.push_back(std::move(y));
    } catch (const std::exception&) {
      throw CsvParseError("malformed number", row);
    }
    if (sig.times.size() >= 2 &&
        !(sig.times.back() > sig.times[sig.times.size() - 2]))
      throw CsvParseError("time column must be strictly increasing", row);
  }
  if (sig.times.size() < 2) throw CsvParseError("need at least two rows", row);
  return sig;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& contents) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << contents;
}

}  // namespace adaptlab

#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace qoe {

// All numeric CSV output goes through one formatter so reruns are
// byte-identical: 12 significant digits, shortest form ("%.12g").
std::string format_number(double v);

class CsvWriter {
 public:
  // Opens the file and writes the header line. Throws on I/O failure.
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void write_row(const std::vector<std::string>& cells);

  // Convenience for all-numeric rows.
  void write_numeric_row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::string path_;
};

} // namespace qoe

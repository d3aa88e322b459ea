#pragma once

#include <string>
#include <vector>

namespace qcf {

/// 17 significant digits, shortest exponent form; "nan", "inf" for non-finite values.
std::string formatNumber(double v);

/// Row-at-a-time CSV builder: LF line endings, header fixed at construction.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(const std::vector<std::string>& cells);
  CsvTable& row(const std::vector<double>& values);

  std::size_t rows() const { return rows_; }
  const std::string& text() const { return text_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Writes text to path, creating parent directories. Throws Error on failure.
void writeFile(const std::string& path, const std::string& text);

}  // namespace qcf

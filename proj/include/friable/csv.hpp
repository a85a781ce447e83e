#ifndef FRIABLE_CSV_HPP
#define FRIABLE_CSV_HPP

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace friable {
namespace io {

// Bit-stable float formatting for golden-file CSV output: %.12e, '.' decimal
// separator, no locale dependence.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& cols) { line(cols); }

  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  void comment(const std::string& text) { out_ << "# " << text << '\n'; }

 private:
  std::ostream& out_;
};

}  // namespace io
}  // namespace friable

#endif  // FRIABLE_CSV_HPP

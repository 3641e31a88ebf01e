#ifndef PROJCOMP_CSV_HPP
#define PROJCOMP_CSV_HPP

#include <Eigen/Dense>
#include <ostream>
#include <string>
#include <vector>

namespace projcomp {

/// Fixed-format double for reproducible output ("%.<digits>g").
std::string format_double(double v, int digits = 17);

std::string csv_join(const std::vector<std::string>& fields);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : m_out(out) {}
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);
  void comment(const std::string& text);

 private:
  std::ostream& m_out;
};

std::vector<std::string> number_fields(const Eigen::VectorXd& v,
                                       int digits = 17);

}  // namespace projcomp

#endif

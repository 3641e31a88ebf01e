#include "projcomp/csv.hpp"

#include <cstdio>

namespace projcomp {

std::string format_double(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  m_out << csv_join(names) << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  m_out << csv_join(fields) << '\n';
}

void CsvWriter::comment(const std::string& text) {
  m_out << "# " << text << '\n';
}

std::vector<std::string> number_fields(const Eigen::VectorXd& v, int digits) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (int i = 0; i < v.size(); ++i) out.push_back(format_double(v[i], digits));
  return out;
}

}  // namespace projcomp

#ifndef PROJCOMP_CONFIG_HPP
#define PROJCOMP_CONFIG_HPP

#include <map>
#include <string>

namespace projcomp {

/// key = value lines, '#' comments. Later keys override earlier ones.
std::map<std::string, std::string> parse_config(std::istream& in);
std::map<std::string, std::string> parse_config_file(const std::string& path);

}  // namespace projcomp

#endif

#pragma once

#include <locale>
#include <sstream>
#include <string>

namespace relp::detail {

// Locale-independent fixed-point formatting; all file output must be
// byte-stable across environments.
inline std::string format_fixed(double value, int places) {
  std::ostringstream oss;
  oss.imbue(std::locale::classic());
  oss.setf(std::ios::fixed, std::ios::floatfield);
  oss.precision(places);
  oss << value;
  return oss.str();
}

}  // namespace relp::detail

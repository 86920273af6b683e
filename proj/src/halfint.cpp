#include "tbl/halfint.hpp"

#include <cmath>
#include <cstdlib>

namespace tbl {

HalfInt HalfInt::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos || text.substr(slash + 1) != "2")
    throw config_error("HalfInt: expected \"p/2\" with p odd, got \"" + text + "\"");
  const std::string num = text.substr(0, slash);
  if (num.empty() || (!std::isdigit(static_cast<unsigned char>(num[0])) && num[0] != '-' && num[0] != '+'))
    throw config_error("HalfInt: bad numerator in \"" + text + "\"");
  char* end = nullptr;
  const long long p = std::strtoll(num.c_str(), &end, 10);
  if (end == nullptr || *end != '\0')
    throw config_error("HalfInt: bad numerator in \"" + text + "\"");
  return HalfInt(p);
}

HalfInt HalfInt::nearest(double x) {
  // lattice points are (2k+1)/2; pick k = round(x - 1/2), ties toward +inf
  const double k = std::floor(x - 0.5 + 0.5 + 1e-300);
  std::int64_t twice = 2 * static_cast<std::int64_t>(k) + 1;
  // guard against floor() landing one off under rounding
  while (0.5 * static_cast<double>(twice) - x > 0.5) twice -= 2;
  while (x - 0.5 * static_cast<double>(twice) >= 0.5) twice += 2;
  return HalfInt(twice);
}

}  // namespace tbl

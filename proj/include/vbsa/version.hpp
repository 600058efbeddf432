#ifndef VBSA_VERSION_HPP
#define VBSA_VERSION_HPP

#include <string_view>

namespace vbsa {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace vbsa

#endif  // VBSA_VERSION_HPP

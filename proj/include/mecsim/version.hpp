#ifndef MECSIM_VERSION_HPP
#define MECSIM_VERSION_HPP

namespace mecsim {

inline constexpr const char* kVersion = "0.1.0";

}

#endif

#ifndef REDSIM_VERSION_HPP
#define REDSIM_VERSION_HPP

namespace redsim {

inline constexpr const char* kVersion = "1.0.0";

}

#endif

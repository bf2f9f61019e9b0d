#ifndef OTDD_VERSION_HPP
#define OTDD_VERSION_HPP

namespace otdd {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kResultSchemaVersion = 1;

}  // namespace otdd

#endif  // OTDD_VERSION_HPP

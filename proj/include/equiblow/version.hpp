#ifndef EQUIBLOW_VERSION_HPP
#define EQUIBLOW_VERSION_HPP

namespace equiblow {

inline constexpr const char* kVersion = "0.1.0";

// The engine string written into every report. Verification deliberately
// ignores it: reports are checked on content, not on who produced them.
inline constexpr const char* kEngine = "equiblow 0.1.0";

}  // namespace equiblow

#endif  // EQUIBLOW_VERSION_HPP

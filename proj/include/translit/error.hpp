#pragma once

#include <stdexcept>
#include <string>

namespace translit {

// Error category, mapped to process exit codes by the CLI:
// usage -> 1, data -> 2.
enum class errc {
  usage,
  data,
};

class error : public std::runtime_error {
public:
  error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  errc kind() const noexcept { return kind_; }

private:
  errc kind_;
};

inline error usage_error(const std::string& what) { return error(errc::usage, what); }
inline error data_error(const std::string& what) { return error(errc::data, what); }

}  // namespace translit

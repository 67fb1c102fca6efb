#pragma once

#include <mutex>
#include <ostream>
#include <string>
#include <vector>

namespace citeval {

/// Thread-safe warning sink. Warnings are kept in arrival order and, when an
/// echo stream is attached, written to it as they arrive.
class Diagnostics {
 public:
  Diagnostics() = default;
  explicit Diagnostics(std::ostream* echo) : echo_(echo) {}

  void warn(std::string message);
  std::vector<std::string> warnings() const;
  std::size_t count() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::vector<std::string> warnings_;
  std::ostream* echo_ = nullptr;
};

}  // namespace citeval

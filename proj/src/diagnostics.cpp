#include "citeval/diagnostics.hpp"

namespace citeval {

void Diagnostics::warn(std::string message) {
  std::lock_guard lock(mu_);
  if (echo_ != nullptr) *echo_ << "warning: " << message << '\n';
  warnings_.push_back(std::move(message));
}

std::vector<std::string> Diagnostics::warnings() const {
  std::lock_guard lock(mu_);
  return warnings_;
}

std::size_t Diagnostics::count() const {
  std::lock_guard lock(mu_);
  return warnings_.size();
}

void Diagnostics::clear() {
  std::lock_guard lock(mu_);
  warnings_.clear();
}

}  // namespace citeval

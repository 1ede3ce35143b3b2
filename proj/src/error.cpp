#include "error.hpp"

#include <iostream>
#include <utility>

namespace ripg {
namespace {

WarningHandler& handler() {
  static WarningHandler h = [](const std::string& message) {
    std::cerr << "ripg: warning: " << message << '\n';
  };
  return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler next) {
  return std::exchange(handler(), std::move(next));
}

void warn(const std::string& message) {
  if (handler()) handler()(message);
}

}  // namespace ripg

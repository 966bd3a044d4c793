#pragma once

#include <numbers>
#include <string_view>

namespace oinfo {

enum class LogBase { Nats, Bits };

// Adding 0.0 turns -0.0 into +0.0 and leaves every other value unchanged.
constexpr double from_nats(double nats, LogBase base) noexcept {
  return (base == LogBase::Bits ? nats / std::numbers::ln2 : nats) + 0.0;
}

constexpr double from_bits(double bits, LogBase base) noexcept {
  return (base == LogBase::Nats ? bits * std::numbers::ln2 : bits) + 0.0;
}

constexpr std::string_view unit_name(LogBase base) noexcept {
  return base == LogBase::Bits ? "bits" : "nats";
}

}  // namespace oinfo

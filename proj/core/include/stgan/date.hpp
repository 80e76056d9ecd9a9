#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace stgan {

/// Calendar day stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

  static Date from_ymd(int year, unsigned month, unsigned day);

  /// Parses YYYY-MM-DD; throws ValidationError on anything else.
  static Date parse(std::string_view iso);

  std::string iso() const;
  constexpr std::int32_t days() const { return days_; }

  /// 0 = Monday ... 6 = Sunday.
  int weekday() const;

  Date plus_days(std::int32_t n) const { return Date(days_ + n); }
  /// Next Monday-Friday day strictly after this one.
  Date next_weekday() const;

  constexpr auto operator<=>(const Date&) const = default;

 private:
  std::int32_t days_ = 0;
};

}  // namespace stgan

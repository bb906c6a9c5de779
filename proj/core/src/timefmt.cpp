#include "smartband/timefmt.hpp"

#include <cmath>
#include <cstdio>

namespace smartband {

namespace {

bool is_leap(std::int64_t year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(std::int64_t year, int month) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30,
                                      31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return kDays[month - 1];
}

}  // namespace

std::string format_utc(std::int64_t epoch_unix, double offset_s) {
    std::int64_t total =
        epoch_unix + static_cast<std::int64_t>(std::floor(offset_s));

    std::int64_t days = total / 86400;
    std::int64_t secs = total % 86400;
    if (secs < 0) {
        secs += 86400;
        --days;
    }

    std::int64_t year = 1970;
    while (true) {
        std::int64_t len = is_leap(year) ? 366 : 365;
        if (days >= len) {
            days -= len;
            ++year;
        } else if (days < 0) {
            --year;
            days += is_leap(year) ? 366 : 365;
        } else {
            break;
        }
    }

    int month = 1;
    while (days >= days_in_month(year, month)) {
        days -= days_in_month(year, month);
        ++month;
    }

    char buf[40];
    std::snprintf(buf, sizeof buf, "%04lld-%02d-%02lld %02lld:%02lld:%02lld UTC",
                  static_cast<long long>(year), month,
                  static_cast<long long>(days + 1),
                  static_cast<long long>(secs / 3600),
                  static_cast<long long>(secs / 60 % 60),
                  static_cast<long long>(secs % 60));
    return buf;
}

}  // namespace smartband

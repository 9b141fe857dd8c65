// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/month.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "trendcast/error.hpp"

namespace trendcast {

namespace {

int parse_int(const std::string& text, std::size_t pos, std::size_t len,
              const std::string& what) {
    if (pos + len > text.size()) fail(ErrorKind::Parse, "truncated " + what + ": '" + text + "'");
    int value = 0;
    const char* begin = text.data() + pos;
    auto [ptr, ec] = std::from_chars(begin, begin + len, value);
    if (ec != std::errc() || ptr != begin + len)
        fail(ErrorKind::Parse, "invalid " + what + ": '" + text + "'");
    return value;
}

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> days = {31, 28, 31, 30, 31, 30,
                                                 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return days[month - 1];
}

}  // namespace

YearMonth YearMonth::next() const noexcept { return from_index(index() + 1); }

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

YearMonth YearMonth::from_index(int index) noexcept {
    YearMonth m;
    m.year = index / 12;
    m.month = index % 12 + 1;
    if (m.month < 1) {  // negative index
        m.month += 12;
        m.year -= 1;
    }
    return m;
}

YearMonth YearMonth::parse(const std::string& text) {
    if (text.size() != 7 || text[4] != '-')
        fail(ErrorKind::Parse, "expected YYYY-MM, got '" + text + "'");
    YearMonth m;
    m.year = parse_int(text, 0, 4, "year");
    m.month = parse_int(text, 5, 2, "month");
    if (m.month < 1 || m.month > 12)
        fail(ErrorKind::Parse, "month out of range in '" + text + "'");
    return m;
}

MonthRange MonthRange::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        fail(ErrorKind::Parse, "expected YYYY-MM:YYYY-MM, got '" + text + "'");
    MonthRange r;
    r.first = YearMonth::parse(text.substr(0, colon));
    r.last = YearMonth::parse(text.substr(colon + 1));
    if (r.last < r.first)
        fail(ErrorKind::Validation, "month range ends before it starts: '" + text + "'");
    return r;
}

std::vector<std::string> TimeGrid::month_names() const {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(months));
    for (int i = 0; i < months; ++i) names.push_back(month_at(i).str());
    return names;
}

TimeGrid TimeGrid::make(const MonthRange& train, const MonthRange& validation,
                        const MonthRange& test) {
    if (validation.first.index() != train.last.index() + 1)
        fail(ErrorKind::Validation,
             "validation range must start the month after training ends (" +
                 train.str() + " vs " + validation.str() + ")");
    if (test.first.index() != validation.last.index() + 1)
        fail(ErrorKind::Validation,
             "test range must start the month after validation ends (" +
                 validation.str() + " vs " + test.str() + ")");
    TimeGrid grid;
    grid.start = train.first;
    grid.months = test.last.index() - train.first.index() + 1;
    grid.train = train;
    grid.validation = validation;
    grid.test = test;
    return grid;
}

Date Date::parse(const std::string& text) {
    // Accepts YYYY-MM-DD with an optional time suffix (T.. or space..).
    if (text.size() < 10 || text[4] != '-' || text[7] != '-')
        fail(ErrorKind::Parse, "expected ISO-8601 date, got '" + text + "'");
    if (text.size() > 10 && text[10] != 'T' && text[10] != ' ')
        fail(ErrorKind::Parse, "expected ISO-8601 date, got '" + text + "'");
    Date d;
    d.year = parse_int(text, 0, 4, "year");
    d.month = parse_int(text, 5, 2, "month");
    d.day = parse_int(text, 8, 2, "day");
    if (d.month < 1 || d.month > 12)
        fail(ErrorKind::Parse, "month out of range in '" + text + "'");
    if (d.day < 1 || d.day > days_in_month(d.year, d.month))
        fail(ErrorKind::Parse, "day out of range in '" + text + "'");
    return d;
}

}  // namespace trendcast

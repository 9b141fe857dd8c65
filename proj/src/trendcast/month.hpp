// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <string>
#include <vector>

namespace trendcast {

/// Calendar month (UTC). Ordered, with integer arithmetic on a linear index.
struct YearMonth {
    int year = 0;
    int month = 1;  // 1..12

    int index() const noexcept { return year * 12 + (month - 1); }
    auto operator<=>(const YearMonth&) const = default;

    YearMonth next() const noexcept;
    std::string str() const;  // "YYYY-MM"

    static YearMonth from_index(int index) noexcept;
    static YearMonth parse(const std::string& text);
};

/// Inclusive month range, parsed from "YYYY-MM:YYYY-MM".
struct MonthRange {
    YearMonth first;
    YearMonth last;

    int size() const noexcept { return last.index() - first.index() + 1; }
    bool contains(YearMonth m) const noexcept { return m >= first && m <= last; }
    std::string str() const { return first.str() + ":" + last.str(); }

    static MonthRange parse(const std::string& text);
};

/// Consecutive months covering train, validation and test, in that order and
/// with no gaps between the ranges.
struct TimeGrid {
    YearMonth start;
    int months = 0;
    MonthRange train;
    MonthRange validation;
    MonthRange test;

    int index_of(YearMonth m) const noexcept { return m.index() - start.index(); }
    YearMonth month_at(int i) const noexcept { return YearMonth::from_index(start.index() + i); }
    bool contains(YearMonth m) const noexcept {
        int i = index_of(m);
        return i >= 0 && i < months;
    }

    int train_begin() const noexcept { return index_of(train.first); }
    int train_end() const noexcept { return index_of(train.last) + 1; }
    int validation_begin() const noexcept { return index_of(validation.first); }
    int validation_end() const noexcept { return index_of(validation.last) + 1; }
    int test_begin() const noexcept { return index_of(test.first); }
    int test_end() const noexcept { return index_of(test.last) + 1; }

    std::vector<std::string> month_names() const;

    static TimeGrid make(const MonthRange& train, const MonthRange& validation,
                         const MonthRange& test);
};

/// Calendar date parsed from an ISO-8601 timestamp; only the date part is kept.
struct Date {
    int year = 0;
    int month = 1;
    int day = 1;

    YearMonth year_month() const noexcept { return {year, month}; }

    static Date parse(const std::string& text);
};

}  // namespace trendcast

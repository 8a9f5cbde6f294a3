#include "vcm/time_util.hpp"

#include <doctest.h>

using namespace vcm;

TEST_CASE("parse_utc handles the shapes the pipeline meets") {
    CHECK(parse_utc("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_utc("2019-01-02T12:00Z") == 1546430400);  // NVD minute precision
    CHECK(parse_utc("2018-06-11T00:00:00Z") == 1528675200);
    CHECK(parse_utc("2018-06-11") == 1528675200);
    CHECK(parse_utc("2018-06-11T02:00:00+02:00") == 1528675200);
    CHECK(parse_utc("2018-06-10T22:00:00-02:00") == 1528675200);
    CHECK(parse_utc("2018-06-11T00:00:00.500Z") == 1528675200);  // fraction dropped
}

TEST_CASE("parse_utc rejects junk") {
    CHECK_FALSE(parse_utc(""));
    CHECK_FALSE(parse_utc("2018-13-01"));
    CHECK_FALSE(parse_utc("2018-02-30"));
    CHECK_FALSE(parse_utc("2018-06-11T25:00Z"));
    CHECK_FALSE(parse_utc("2018-06-11X00:00Z"));
    CHECK_FALSE(parse_utc("not a date"));
    CHECK_FALSE(parse_utc("2018-06-11T00:00:00Zjunk"));
}

TEST_CASE("leap years") {
    CHECK(parse_utc("2016-02-29T00:00:00Z"));
    CHECK_FALSE(parse_utc("2017-02-29T00:00:00Z"));
    CHECK(parse_utc("2000-02-29"));   // divisible by 400
    CHECK_FALSE(parse_utc("1900-02-29"));
}

TEST_CASE("format_utc round trips") {
    for (int64_t t : {int64_t(0), int64_t(1528675200), int64_t(1546430400), int64_t(-86400),
                      int64_t(4102444799)}) {
        auto text = format_utc(t);
        CHECK(parse_utc(text) == t);
    }
    CHECK(format_utc(1528675200) == "2018-06-11T00:00:00Z");
}

TEST_CASE("utc_year") {
    CHECK(utc_year(0) == 1970);
    CHECK(utc_year(1546300799) == 2018);  // 2018-12-31T23:59:59Z
    CHECK(utc_year(1546300800) == 2019);
    CHECK(utc_year(-1) == 1969);
}

TEST_CASE("floor_days is a true floor") {
    CHECK(floor_days(0) == 0);
    CHECK(floor_days(86399) == 0);
    CHECK(floor_days(86400) == 1);
    CHECK(floor_days(-1) == -1);
    CHECK(floor_days(-86400) == -1);
    CHECK(floor_days(-86401) == -2);
    CHECK(floor_days(-129600) == -2);  // -1.5 days
}
